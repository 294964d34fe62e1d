//! Configuration lists: one configuration per line, selected feature names
//! separated by whitespace, `-` for the empty selection. Blank lines and
//! `#` comments are ignored.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::configspace::{ConfigSet, Engine, FeatureSpace, TotalConfig};
use crate::error::{Error, Result};
use crate::ingest::expr::split_words;

/// Parses a configuration list, keeping line order and repeats.
pub fn parse_configs(text: &str, space: &FeatureSpace) -> Result<Vec<TotalConfig>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let words: Vec<(usize, &str)> = split_words(line).collect();
        match words.as_slice() {
            [] => continue,
            [(_, "-")] => {
                out.push(TotalConfig::from_bits(space, 0));
                continue;
            }
            _ => {}
        }
        let mut seen = HashSet::new();
        let mut bits = 0u64;
        for (offset, name) in words {
            if name == "-" {
                return Err(Error::Syntax {
                    line: line_no,
                    column: offset + 1,
                    message: "`-` must stand alone on its line".into(),
                });
            }
            let Some(f) = space.lookup(name) else {
                return Err(Error::UnknownIdentifier {
                    name: name.to_string(),
                    line: line_no,
                    column: offset + 1,
                });
            };
            if !seen.insert(f) {
                return Err(Error::DuplicateInConfig {
                    name: name.to_string(),
                    line: line_no,
                });
            }
            bits |= 1u64 << f.index();
        }
        out.push(TotalConfig::from_bits(space, bits));
    }
    Ok(out)
}

/// Parses a configuration list into a set.
pub fn parse_config_list(text: &str, engine: &Engine) -> Result<ConfigSet> {
    Ok(engine.from_configs(&parse_configs(text, engine.space())?))
}

/// Renders a set in configuration-list format, members in lexicographic
/// order, one per line.
pub fn render_config_list(set: &ConfigSet) -> String {
    let mut out = String::new();
    set.for_each_config(|c| {
        let _ = writeln!(out, "{c}");
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> FeatureSpace {
        FeatureSpace::new(["m", "s", "e", "c", "a", "r"]).unwrap()
    }

    #[test]
    fn parses_lines() {
        let s = space();
        let configs = parse_configs("m e a\n\n# note\n-\nm  s # trailing\n", &s).unwrap();
        let shown: Vec<String> = configs.iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, vec!["m e a", "-", "m s"]);
    }

    #[test]
    fn errors_carry_positions() {
        let s = space();
        assert_eq!(
            parse_configs("m\nm x", &s).unwrap_err(),
            Error::UnknownIdentifier {
                name: "x".into(),
                line: 2,
                column: 3
            }
        );
        assert_eq!(
            parse_configs("m e m", &s).unwrap_err(),
            Error::DuplicateInConfig {
                name: "m".into(),
                line: 1
            }
        );
        assert!(matches!(
            parse_configs("m -", &s).unwrap_err(),
            Error::Syntax { line: 1, column: 3, .. }
        ));
    }

    #[test]
    fn round_trip() {
        let s = space();
        let engine = Engine::new(&s);
        let set = parse_config_list("m e a\nm\n-\nm s e r\n", &engine).unwrap();
        let text = render_config_list(&set);
        assert_eq!(text, "-\nm\nm e a\nm s e r\n");
        assert_eq!(parse_config_list(&text, &engine).unwrap(), set);
        assert_eq!(render_config_list(&engine.empty()), "");
    }
}
