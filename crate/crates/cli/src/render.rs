//! Text, JSON and CSV renderings of analyses.

use std::fmt::Write;

use feature_causes::accountability::{format_decimal, format_exact};
use feature_causes::{FeatureSpace, Rational};
use serde_json::{json, Map, Value};

use crate::analysis::{Analysis, ExactCover, PerInstance};
use crate::Format;

pub fn render(format: Format, space: &FeatureSpace, analyses: &[Analysis], digits: usize) -> String {
    match format {
        Format::Text => text(analyses, digits),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json_report(space, analyses)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => csv(analyses),
    }
}

fn exact(r: &Rational) -> Value {
    Value::String(format_exact(r))
}

fn ratio(num: usize, den: usize) -> Rational {
    Rational::new(num.into(), den.max(1).into())
}

fn json_report(space: &FeatureSpace, analyses: &[Analysis]) -> Value {
    json!({
        "model": {
            "features": space.names(),
            "valid": analyses.first().map(|a| count(a.valid)),
        },
        "analyses": analyses.iter().map(json_analysis).collect::<Vec<_>>(),
    })
}

/// Counts past `u64` are written as decimal strings.
fn count(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(n) => json!(n),
        Err(_) => json!(n.to_string()),
    }
}

fn json_analysis(a: &Analysis) -> Value {
    let mut m = Map::new();
    m.insert("effect".into(), json!(a.effect));
    m.insert("negated".into(), json!(a.negated));
    m.insert(
        "counts".into(),
        json!({
            "features": a.features,
            "valid": count(a.valid),
            "effect": count(a.effect_count),
        }),
    );
    m.insert("warnings".into(), json!(a.warnings));
    if let Some(c) = &a.causes {
        m.insert("causes".into(), json!(c));
    }
    if let Some(e) = &a.explication {
        let mut x = Map::new();
        x.insert("chi".into(), json!(e.chi));
        x.insert("chi_length".into(), json!(e.chi_length));
        x.insert("dls".into(), json!(e.dls));
        x.insert("dls_length".into(), json!(e.dls_length));
        x.insert("dls_ratio".into(), exact(&ratio(e.dls_length, e.chi_length)));
        x.insert("most_general".into(), json!(e.most_general));
        x.insert("most_general_dls".into(), json!(e.most_general_dls));
        if let Some(g) = &e.greedy {
            x.insert("greedy_cover".into(), json!(g));
        }
        match &e.exact {
            Some(ExactCover::Found(c)) => {
                x.insert("exact_cover".into(), json!(c));
            }
            Some(ExactCover::TooLarge { candidates, limit }) => {
                x.insert(
                    "exact_cover".into(),
                    json!({ "skipped": "cover-too-large", "candidates": candidates, "limit": limit }),
                );
            }
            None => {}
        }
        m.insert("explication".into(), Value::Object(x));
    }
    if let Some(acc) = &a.account {
        let table =
            |rows: &[(String, Rational)]| Value::Object(rows.iter().map(|(k, v)| (k.clone(), exact(v))).collect());
        let mut x = Map::new();
        x.insert("distribution".into(), json!(acc.distribution));
        x.insert("blame".into(), table(&acc.blame));
        x.insert("cause_blame".into(), table(&acc.cause_blame));
        x.insert("pair_blame".into(), table(&acc.pairs));
        if let Some(PerInstance { features: header, rows }) = &acc.per_instance {
            let rows: Map<String, Value> = rows
                .iter()
                .map(|(config, values)| {
                    let row = header.iter().cloned().zip(values.iter().map(exact)).collect();
                    (config.clone(), Value::Object(row))
                })
                .collect();
            x.insert("responsibility".into(), Value::Object(rows));
        }
        m.insert("account".into(), Value::Object(x));
    }
    if let Some(i) = &a.interactions {
        m.insert(
            "interactions".into(),
            json!({
                "degree": i.degree,
                "witnesses": i.witnesses,
                "necessary": i.necessary,
            }),
        );
    }
    Value::Object(m)
}

fn text(analyses: &[Analysis], digits: usize) -> String {
    let dec = |r: &Rational| format_decimal(r, digits);
    let mut o = String::new();
    for (n, a) in analyses.iter().enumerate() {
        if n > 0 {
            o.push('\n');
        }
        let neg = if a.negated { " (negated)" } else { "" };
        writeln!(o, "effect: {}{neg}", a.effect).unwrap();
        writeln!(
            o,
            "features {}  valid {}  effect {}",
            a.features, a.valid, a.effect_count
        )
        .unwrap();
        for w in &a.warnings {
            writeln!(o, "warning: {w}").unwrap();
        }
        if let Some(causes) = &a.causes {
            if causes.is_empty() {
                writeln!(o, "no causes (empty effect set)").unwrap();
            } else {
                writeln!(o, "causes ({})", causes.len()).unwrap();
                let blame = a.account.as_ref().map(|acc| &acc.cause_blame).filter(|b| !b.is_empty());
                match blame {
                    Some(b) => {
                        let width = causes.iter().map(|c| c.len()).max().unwrap_or(0);
                        for (c, r) in b {
                            writeln!(o, "  {c:width$}  {:>8}  {}", format_exact(r), dec(r)).unwrap();
                        }
                    }
                    None => {
                        for c in causes {
                            writeln!(o, "  {c}").unwrap();
                        }
                    }
                }
            }
        }
        if let Some(e) = &a.explication {
            writeln!(o, "explication").unwrap();
            writeln!(o, "  chi   {}  (length {})", e.chi, e.chi_length).unwrap();
            let pct = ratio(e.dls_length * 100, e.chi_length);
            writeln!(o, "  dls   {}  (length {}, {}%)", e.dls, e.dls_length, dec(&pct)).unwrap();
            writeln!(o, "  most general ({})", e.most_general.len()).unwrap();
            for c in &e.most_general {
                writeln!(o, "    {c}").unwrap();
            }
            writeln!(o, "  most general dls   {}", e.most_general_dls).unwrap();
            if let Some(g) = &e.greedy {
                writeln!(o, "  greedy cover ({})", g.len()).unwrap();
                for c in g {
                    writeln!(o, "    {c}").unwrap();
                }
            }
            match &e.exact {
                Some(ExactCover::Found(c)) => {
                    writeln!(o, "  exact cover ({})", c.len()).unwrap();
                    for c in c {
                        writeln!(o, "    {c}").unwrap();
                    }
                }
                Some(ExactCover::TooLarge { candidates, limit }) => {
                    writeln!(
                        o,
                        "  exact cover skipped: {candidates} candidates exceed the limit of {limit}"
                    )
                    .unwrap();
                }
                None => {}
            }
        }
        if let Some(acc) = &a.account {
            writeln!(o, "blame ({})", acc.distribution).unwrap();
            let width = acc
                .blame
                .iter()
                .chain(&acc.pairs)
                .map(|(k, _)| k.len())
                .max()
                .unwrap_or(0);
            for (f, r) in &acc.blame {
                writeln!(o, "  {f:width$}  {:>8}  {}", format_exact(r), dec(r)).unwrap();
            }
            if !acc.pairs.is_empty() {
                writeln!(o, "interaction blame").unwrap();
                for (p, r) in &acc.pairs {
                    writeln!(o, "  {p:width$}  {:>8}  {}", format_exact(r), dec(r)).unwrap();
                }
            }
            if let Some(PerInstance { features: header, rows }) = &acc.per_instance {
                writeln!(o, "responsibility per instance").unwrap();
                let cw = rows.iter().map(|(c, _)| c.len()).max().unwrap_or(0).max(6);
                let vw = header.iter().map(|h| h.len()).max().unwrap_or(0).max(6);
                write!(o, "  {:cw$}", "config").unwrap();
                for h in header {
                    write!(o, "  {h:>vw$}").unwrap();
                }
                o.push('\n');
                for (config, values) in rows {
                    write!(o, "  {config:cw$}").unwrap();
                    for v in values {
                        write!(o, "  {:>vw$}", format_exact(v)).unwrap();
                    }
                    o.push('\n');
                }
            }
        }
        if let Some(i) = &a.interactions {
            writeln!(o, "interactions").unwrap();
            match i.degree {
                Some(t) => {
                    writeln!(o, "  degree {t}").unwrap();
                    writeln!(o, "  witnesses ({})", i.witnesses.len()).unwrap();
                    for w in &i.witnesses {
                        writeln!(o, "    {w}").unwrap();
                    }
                }
                None => writeln!(o, "  no witnesses").unwrap(),
            }
            let yes = if i.necessary { "yes" } else { "no" };
            writeln!(o, "  interaction necessary: {yes}").unwrap();
        }
        writeln!(o, "time {:.3?}", a.elapsed).unwrap();
    }
    o
}

fn csv(analyses: &[Analysis]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |section: &str, item: &str, value: &str| {
        w.write_record([section, item, value]).expect("in-memory write");
    };
    row("section", "item", "value");
    for a in analyses {
        row("effect", &a.effect, if a.negated { "negated" } else { "" });
        row("count", "features", &a.features.to_string());
        row("count", "valid", &a.valid.to_string());
        row("count", "effect", &a.effect_count.to_string());
        for warning in &a.warnings {
            row("warning", warning, "");
        }
        for c in a.causes.iter().flatten() {
            row("cause", c, "");
        }
        if let Some(e) = &a.explication {
            row("explication", "chi", &e.chi);
            row("explication", "chi_length", &e.chi_length.to_string());
            row("explication", "dls", &e.dls);
            row("explication", "dls_length", &e.dls_length.to_string());
            row(
                "explication",
                "dls_ratio",
                &format_exact(&ratio(e.dls_length, e.chi_length)),
            );
            row("explication", "most_general_dls", &e.most_general_dls);
            for c in &e.most_general {
                row("most_general", c, "");
            }
            for c in e.greedy.iter().flatten() {
                row("greedy_cover", c, "");
            }
            match &e.exact {
                Some(ExactCover::Found(cs)) => cs.iter().for_each(|c| row("exact_cover", c, "")),
                Some(ExactCover::TooLarge { candidates, .. }) => row("exact_cover", "skipped", &candidates.to_string()),
                None => {}
            }
        }
        if let Some(acc) = &a.account {
            row("distribution", &acc.distribution, "");
            for (f, r) in &acc.blame {
                row("blame", f, &format_exact(r));
            }
            for (c, r) in &acc.cause_blame {
                row("cause_blame", c, &format_exact(r));
            }
            for (p, r) in &acc.pairs {
                row("pair_blame", p, &format_exact(r));
            }
            if let Some(PerInstance { features: header, rows }) = &acc.per_instance {
                for (config, values) in rows {
                    for (f, v) in header.iter().zip(values) {
                        row("responsibility", &format!("{config}:{f}"), &format_exact(v));
                    }
                }
            }
        }
        if let Some(i) = &a.interactions {
            let degree = i.degree.map(|t| t.to_string()).unwrap_or_default();
            row("interactions", "degree", &degree);
            row("interactions", "necessary", if i.necessary { "true" } else { "false" });
            for wit in &i.witnesses {
                row("witness", wit, "");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
