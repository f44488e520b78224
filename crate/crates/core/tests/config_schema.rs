use std::path::PathBuf;

use cochannel_atlas::config::Config;
use serde_json::Value;

fn repo(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn read_json(p: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn shipped_configs() -> Vec<PathBuf> {
    let mut v: Vec<_> = std::fs::read_dir(repo("configs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    assert!(!v.is_empty());
    v
}

#[test]
fn shipped_configs_parse_and_match_schema() {
    let schema = read_json(&repo("schema/config.json"));
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    for p in shipped_configs() {
        let doc = read_json(&p);
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", p.display());
        let cfg = Config::load(&p).unwrap();
        cfg.scenario().unwrap();
        // round trip through the serializer stays schema-valid
        let again: Value = serde_json::from_str(&cfg.to_json()).unwrap();
        let errors: Vec<String> = validator
            .iter_errors(&again)
            .map(|e| e.to_string())
            .collect();
        assert!(errors.is_empty(), "{} round trip: {errors:?}", p.display());
    }
}

#[test]
fn schema_rejects_what_the_parser_rejects() {
    let schema = read_json(&repo("schema/config.json"));
    let validator = jsonschema::validator_for(&schema).unwrap();
    let base = read_json(&repo("configs/fixed_rooftop_omni.json"));

    let mut extra = base.clone();
    extra["scenario"]["grid"]["depth_m"] = 3.into();
    let mut bad_mode = base.clone();
    bad_mode["scenario"]["transmitters"][0]["mode"] = "DVB-T 256QAM 2/3".into();
    let mut bad_shadow = base.clone();
    bad_shadow["scenario"]["shadowing"] = "sometimes".into();

    for doc in [extra, bad_mode, bad_shadow] {
        assert!(!validator.is_valid(&doc));
        let text = doc.to_string();
        assert!(Config::from_json(&text).and_then(|c| c.scenario()).is_err());
    }
}
