//! Boolean expressions and model files.
//!
//! ```text
//! expr  := equiv
//! equiv := imp ("<->" imp)*
//! imp   := or ("->" imp)?
//! or    := and ("|" and)*
//! and   := unary ("&" unary)*
//! unary := "!" unary | "(" expr ")" | "true" | "false" | ident
//! ```
//!
//! Implications and equivalences are rewritten into `!`, `&` and `|` while
//! parsing.

use crate::configspace::{ConfigSet, Engine, FeatureSpace};
use crate::error::{Error, Result};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Imp,
    Iff,
    Open,
    Close,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str, line: usize, first_column: usize) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| first_column + i;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => Tok::Open,
            ')' => Tok::Close,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Imp
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_ascii_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column: at(start),
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        i += 1;
        out.push(Lexed {
            tok,
            line,
            column: at(start),
        });
    }
    out.push(Lexed {
        tok: Tok::End,
        line,
        column: at(chars.len()),
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    space: &'a FeatureSpace,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, message: String) -> Error {
        let t = &self.toks[self.pos];
        Error::Syntax {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn equiv(&mut self) -> Result<Formula> {
        let mut left = self.imp()?;
        while self.eat(&Tok::Iff) {
            let right = self.imp()?;
            left = Formula::or([
                Formula::and([left.clone(), right.clone()]),
                Formula::and([left.negate(), right.negate()]),
            ]);
        }
        Ok(left)
    }

    fn imp(&mut self) -> Result<Formula> {
        let left = self.or()?;
        if self.eat(&Tok::Imp) {
            let right = self.imp()?;
            return Ok(Formula::or([left.negate(), right]));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut parts = vec![self.and()?];
        while self.eat(&Tok::Or) {
            parts.push(self.and()?);
        }
        Ok(Formula::or(parts))
    }

    fn and(&mut self) -> Result<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::And) {
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula> {
        let t = &self.toks[self.pos];
        let (line, column) = (t.line, t.column);
        match t.tok.clone() {
            Tok::Not => {
                self.pos += 1;
                Ok(self.unary()?.negate())
            }
            Tok::Open => {
                self.pos += 1;
                let inner = self.equiv()?;
                if !self.eat(&Tok::Close) {
                    return Err(self.error(format!("expected `)`, found {}", self.peek().describe())));
                }
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => match self.space.lookup(&name) {
                        Some(f) => Ok(Formula::var(f)),
                        None => Err(Error::UnknownIdentifier { name, line, column }),
                    },
                }
            }
            other => Err(self.error(format!("expected a feature, `!` or `(`, found {}", other.describe()))),
        }
    }
}

fn parse_at(text: &str, space: &FeatureSpace, line: usize, column: usize) -> Result<Formula> {
    finish(Parser {
        toks: lex(text, line, column)?,
        pos: 0,
        space,
    })
}

/// Parses an expression over `space`. The text may span several lines;
/// positions in errors are 1-based.
pub fn parse_expression(text: &str, space: &FeatureSpace) -> Result<Formula> {
    let mut toks = Vec::new();
    let mut end = None;
    for (i, line) in text.lines().enumerate() {
        let mut lexed = lex(line, i + 1, 1)?;
        end = lexed.pop();
        toks.extend(lexed);
    }
    toks.push(end.unwrap_or(Lexed {
        tok: Tok::End,
        line: 1,
        column: 1,
    }));
    finish(Parser { toks, pos: 0, space })
}

fn finish(mut p: Parser<'_>) -> Result<Formula> {
    let f = p.equiv()?;
    if *p.peek() != Tok::End {
        return Err(p.error(format!("unexpected {}", p.peek().describe())));
    }
    Ok(f)
}

/// A parsed model: features in declaration order and the valid set.
pub struct Model {
    pub space: FeatureSpace,
    pub engine: Engine,
    pub constraint: Formula,
    pub valid: ConfigSet,
}

impl std::fmt::Debug for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Model")
            .field("features", &self.space.names())
            .field("valid", &self.valid.count())
            .finish()
    }
}

/// Parses a model file: one `features:` line, then any number of `valid:`
/// lines whose expressions are conjoined (none means every configuration is
/// valid). `#` starts a comment.
pub fn parse_model(text: &str) -> Result<Model> {
    let mut space: Option<FeatureSpace> = None;
    let mut constraints = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let body = line.trim_start();
        let syntax = |column: usize, message: &str| Error::Syntax {
            line: line_no,
            column,
            message: message.to_string(),
        };
        if let Some(rest) = body.strip_prefix("features:") {
            if space.is_some() {
                return Err(syntax(indent + 1, "`features:` declared twice"));
            }
            let mut names = Vec::new();
            let base = indent + "features:".len();
            for (offset, name) in split_words(rest) {
                if name == "true" || name == "false" {
                    return Err(syntax(base + offset + 1, "`true` and `false` are reserved"));
                }
                names.push(name.to_string());
            }
            let located = |n: &str, what: &str| {
                let offset = rest.find(n).unwrap_or(0);
                syntax(base + offset + 1, &format!("{what} `{n}`"))
            };
            space = Some(FeatureSpace::new(names).map_err(|e| match e {
                Error::InvalidFeatureName(n) => located(&n, "invalid feature name"),
                Error::DuplicateFeature(n) => located(&n, "duplicate feature"),
                Error::EmptySpace => syntax(base + 1, "no features declared"),
                other => other,
            })?);
        } else if let Some(rest) = body.strip_prefix("valid:") {
            let Some(space) = &space else {
                return Err(syntax(indent + 1, "`valid:` before `features:`"));
            };
            let column = indent + "valid:".len() + 1;
            constraints.push(parse_at(rest, space, line_no, column)?);
        } else {
            return Err(syntax(indent + 1, "expected `features:` or `valid:`"));
        }
    }
    let space = space.ok_or(Error::Syntax {
        line: 1,
        column: 1,
        message: "missing `features:` line".into(),
    })?;
    let engine = Engine::new(&space);
    let constraint = Formula::and(constraints);
    let valid = constraint.to_set(&engine);
    if valid.is_empty() {
        return Err(Error::EmptyValid);
    }
    Ok(Model {
        space,
        engine,
        constraint,
        valid,
    })
}

/// Whitespace-separated words with their byte offsets.
pub(crate) fn split_words(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |w| (w.as_ptr() as usize - text.as_ptr() as usize, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EMAIL: &str =
        "# email client\nfeatures: m s e c a r\nvalid: m & (e <-> (c | a | r)) & !(c & a) & !(c & r) & !(a & r)\n";

    #[test]
    fn email_model() {
        let m = parse_model(EMAIL).unwrap();
        assert_eq!(m.valid.count(), 8);
        let e = parse_expression("a | r", &m.space).unwrap().to_set(&m.engine);
        assert_eq!((&e & &m.valid).count(), 4);
    }

    #[test]
    fn trivial_models() {
        let m = parse_model("features: x\nvalid: true").unwrap();
        assert_eq!(m.valid.count(), 2);
        let m = parse_model("features: x y").unwrap();
        assert!(m.valid.is_full());
        assert_eq!(
            parse_model("features: x\nvalid: x & !x").unwrap_err(),
            Error::EmptyValid
        );
    }

    #[test]
    fn operators() {
        let m = parse_model("features: x y z").unwrap();
        let set = |s: &str| parse_expression(s, &m.space).unwrap().to_set(&m.engine);
        assert_eq!(set("x -> y"), set("!x | y"));
        assert_eq!(set("x -> y -> z"), set("x -> (y -> z)"));
        assert_eq!(set("x <-> y"), set("x & y | !x & !y"));
        assert_eq!(set("!x & y | z"), set("((!x) & y) | z"));
        assert_eq!(set("x | y -> z"), set("(x | y) -> z"));
        assert_eq!(set("x -> y <-> z"), set("(x -> y) <-> z"));
        let f = parse_expression("e", &parse_model("features: e c").unwrap().space).unwrap();
        assert!(matches!(f, Formula::Lit(_, true)));
    }

    #[test]
    fn expression_ast() {
        let m = parse_model("features: e c").unwrap();
        let f = parse_expression("e & !c", &m.space).unwrap();
        let e = m.space.feature("e").unwrap();
        let c = m.space.feature("c").unwrap();
        assert_eq!(f, Formula::And(vec![Formula::Lit(e, true), Formula::Lit(c, false)]));
    }

    #[test]
    fn positional_errors() {
        let m = parse_model("features: x y").unwrap();
        assert_eq!(
            parse_expression("x & q", &m.space).unwrap_err(),
            Error::UnknownIdentifier {
                name: "q".into(),
                line: 1,
                column: 5
            }
        );
        assert!(matches!(
            parse_expression("x & (y", &m.space).unwrap_err(),
            Error::Syntax { line: 1, column: 7, .. }
        ));
        assert!(matches!(
            parse_expression("x $ y", &m.space).unwrap_err(),
            Error::Syntax { line: 1, column: 3, .. }
        ));
        assert!(matches!(
            parse_expression("x y", &m.space).unwrap_err(),
            Error::Syntax { line: 1, column: 3, .. }
        ));
        assert!(matches!(
            parse_expression("", &m.space).unwrap_err(),
            Error::Syntax { .. }
        ));
        assert!(matches!(
            parse_model("features: x\nvalid: x &\n").unwrap_err(),
            Error::Syntax {
                line: 2,
                column: 11,
                ..
            }
        ));
        assert!(matches!(
            parse_model("features: x\n  valid: y").unwrap_err(),
            Error::UnknownIdentifier {
                line: 2,
                column: 10,
                ..
            }
        ));
        assert!(matches!(
            parse_model("valid: true").unwrap_err(),
            Error::Syntax { line: 1, column: 1, .. }
        ));
        assert!(matches!(
            parse_model("features: x x").unwrap_err(),
            Error::Syntax { line: 1, .. }
        ));
        assert!(matches!(
            parse_model("features: x\nbogus").unwrap_err(),
            Error::Syntax { line: 2, column: 1, .. }
        ));
    }

    #[test]
    fn crlf_and_comments() {
        let m = parse_model("features: x y # two\r\nvalid: x | y\r\n").unwrap();
        assert_eq!(m.valid.count(), 3);
        let multi = parse_model("features: x y\nvalid: x\nvalid: y").unwrap();
        assert_eq!(multi.valid.count(), 1);
    }
}
