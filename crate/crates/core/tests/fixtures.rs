mod common;

use common::fixture;
use feature_causes::accountability::{format_decimal, interaction_blame_many, interaction_responsibility};
use feature_causes::configspace::{PartialConfig, TotalConfig};
use feature_causes::explications::{characteristic_formula, dls_simplify, most_general_causes};
use feature_causes::ingest::{
    effect_set, load_measurements, parse_configs, parse_model, render_config_list, EffectSpec,
};
use feature_causes::interactions::{interaction_necessity, tway_witnesses};
use feature_causes::{AnalysisSession, Distribution, Rational};

fn minepump() -> AnalysisSession {
    let model = parse_model(&fixture("minepump.fm")).unwrap();
    let list = parse_configs(&fixture("minepump_stable.txt"), &model.space).unwrap();
    let effect = effect_set(&EffectSpec::ConfigList(list), None, &model.valid).unwrap();
    assert!(effect.warnings.is_empty());
    AnalysisSession::new(model.valid, effect.set).unwrap()
}

#[test]
fn minepump_causes_and_explication() {
    let s = minepump();
    assert_eq!(s.valid().count(), 128);
    assert_eq!(s.effect().count(), 28);
    let causes: Vec<String> = s.causes().iter().map(|p| p.to_string()).collect();
    assert_eq!(
        causes,
        [
            "Stop & High & Start",
            "Low & High & Start",
            "High & Start & MethaneAlarm",
            "Command & !Stop & Low & High",
            "Command & !Stop & High & MethaneAlarm",
            "High & Start & MethaneSensor & !MethaneQuery",
            "Command & !Stop & High & MethaneSensor & !MethaneQuery",
        ]
    );
    let mg: Vec<String> = most_general_causes(&s).iter().map(|p| p.to_string()).collect();
    assert_eq!(
        mg,
        [
            "Stop & High & Start",
            "Low & High & Start",
            "High & Start & MethaneAlarm"
        ]
    );
    let dls = dls_simplify(&characteristic_formula(most_general_causes(&s)));
    assert_eq!(
        dls.display(s.space()).to_string(),
        "High & Start & (Stop | Low | MethaneAlarm)"
    );
    assert!(interaction_necessity(&s));
    assert_eq!(tway_witnesses(&s).unwrap().0, 3);
}

#[test]
fn minepump_cause_blames() {
    let s = minepump();
    let dist = Distribution::uniform_over_effects(&s).unwrap();
    let blames = interaction_blame_many(s.causes().as_slice(), &dist, &s).unwrap();
    let sevenths: Vec<Rational> = [4, 4, 4, 2, 2, 2, 1]
        .iter()
        .map(|&n| Rational::new(n.into(), 7.into()))
        .collect();
    assert_eq!(blames, sevenths);
    let shown: Vec<String> = blames.iter().map(|b| format_decimal(b, 2)).collect();
    assert_eq!(shown, ["0.57", "0.57", "0.57", "0.29", "0.29", "0.29", "0.14"]);
}

#[test]
fn email_threshold_from_fixture() {
    let model = parse_model(&fixture("email.fm")).unwrap();
    assert_eq!(
        render_config_list(&model.valid),
        "m\nm e r\nm e a\nm e c\nm s\nm s e r\nm s e a\nm s e c\n"
    );
    let table = load_measurements(&fixture("email_decipher_years.csv"), &model.space).unwrap();
    let spec = EffectSpec::Threshold("decipher_years > 0.25".parse().unwrap());
    let e = effect_set(&spec, Some(&table), &model.valid).unwrap();
    let s = AnalysisSession::new(model.valid.clone(), e.set).unwrap();
    let ec = PartialConfig::from_named(s.space(), &[("e", true), ("c", false)]).unwrap();
    let mea = TotalConfig::from_selected(s.space(), &["m", "e", "a"]).unwrap();
    assert_eq!(
        format_decimal(&interaction_responsibility(&ec, &mea, &s).unwrap(), 4),
        "0.5"
    );
}

#[test]
fn majority_fixture_is_complete() {
    let model = parse_model(&fixture("majority.fm")).unwrap();
    let table = load_measurements(&fixture("majority.csv"), &model.space).unwrap();
    assert_eq!(table.len(), 2048);
    assert_eq!(table.metrics(), ["active"]);
    let spec = EffectSpec::Threshold("active >= 6".parse().unwrap());
    let e = effect_set(&spec, Some(&table), &model.valid).unwrap();
    let s = AnalysisSession::new(model.valid, e.set).unwrap();
    assert_eq!(s.causes().len(), 462);
    assert!(s
        .causes()
        .iter()
        .all(|c| c.support_len() == 6 && c.value_mask() == c.support_mask()));
}
