use std::collections::BTreeSet;

use fbi::config::*;
use fbi::dto::*;
use fbi_core::cas::FormalSymbol;
use fbi_core::poly::Poly;
use fbi_core::C64;
use serde_json::{json, Value};

fn schema() -> Value {
    let p = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/run_config.schema.json");
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

fn full_config() -> RunConfig {
    let sym = FormalSymbolDto {
        n: 1,
        base: vec![[0.0, 0.0]; 2],
        m: 0,
        k: 0,
        d: 1,
        coeffs: vec![vec![]],
    };
    RunConfig {
        command: Some("wkb".into()),
        n: 1,
        ladder: Some(vec![0.1]),
        phase: Some(PhaseSpec::Bargmann),
        grid: Some(GridSpec::default()),
        distribution: Some(DistributionSpec::Heaviside),
        probe: Some(ProbeSpec {
            y0: vec![0.0],
            eta0: vec![1.0],
        }),
        probes: Some(ProbeGridSpec::default()),
        line: Some(LineSpec::default()),
        symbol: Some(SymbolSpec {
            p: sym.clone(),
            q: Some(sym),
            k_out: Some(0),
            t0: 0.8,
            xi_radius: 0.6,
            rho: vec![1.0],
        }),
        wkb: Some(WkbSpec {
            operator: Some(vec![vec![vec![[0.0, -1.0]]]]),
            ..WkbSpec::default()
        }),
        output: Some(OutputSpec {
            stem: Some("run".into()),
        }),
        seed: Some(7),
    }
}

#[test]
fn schema_lists_exactly_the_config_fields() {
    let s = schema();
    let v = serde_json::to_value(full_config()).unwrap();
    assert_eq!(keys(&s["properties"]), keys(&v));
    for section in ["grid", "probe", "probes", "line", "symbol", "wkb", "output"] {
        assert_eq!(
            keys(&s["properties"][section]["properties"]),
            keys(&v[section]),
            "section {section}"
        );
    }
    assert_eq!(
        keys(&s["$defs"]["formal_symbol"]["properties"]),
        keys(&v["symbol"]["p"])
    );
}

#[test]
fn schema_enumerates_every_distribution_kind() {
    let s = schema();
    let kinds: BTreeSet<String> = s["$defs"]["distribution"]["properties"]["kind"]["enum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|k| k.as_str().unwrap().to_string())
        .collect();
    for k in &kinds {
        let mut obj = json!({"kind": k});
        match k.as_str() {
            "delta" => obj["y0"] = json!(0.0),
            "gaussian" | "y_gaussian" => obj["a"] = json!(1.0),
            "polynomial" => obj["coeffs"] = json!([[1.0, 0.0]]),
            _ => {}
        }
        let d: DistributionSpec = serde_json::from_value(obj).unwrap();
        assert!(d.build().is_ok(), "{k}");
    }
    assert_eq!(kinds.len(), 9);
}

#[test]
fn shipped_configs_parse_and_validate() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/configs");
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        RunConfig::from_json(&std::fs::read_to_string(&p).unwrap())
            .unwrap_or_else(|err| panic!("{}: {err}", p.display()));
    }
}

#[test]
fn config_round_trips_and_hash_is_stable() {
    let c = full_config();
    let text = serde_json::to_string(&c).unwrap();
    let back = RunConfig::from_json(&text).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.sha256(), c.sha256());
    let mut d = c.clone();
    d.seed = Some(8);
    assert_ne!(d.sha256(), c.sha256());
    assert_eq!(c.sha256().len(), 64);
}

#[test]
fn validation_rejects_bad_values() {
    for bad in [
        r#"{"n": 3}"#,
        r#"{"ladder": [0.1, -0.1]}"#,
        r#"{"grid": {"window": [1, -1]}}"#,
        r#"{"probe": {"y0": [0, 0], "eta0": [1]}}"#,
        r#"{"wkb": {"r_in": 2, "r_out": 1}}"#,
        r#"{"output": {"stem": "a/b"}}"#,
        r#"{"distribution": {"kind": "gaussian", "a": 1, "extra": 0}}"#,
    ] {
        assert!(RunConfig::from_json(bad).is_err(), "{bad}");
    }
}

#[test]
fn formal_symbol_round_trips() {
    let mut p0 = Poly::zero(2);
    p0.add_term(vec![1, 0], C64::new(0.5, -1.0));
    p0.add_term(vec![0, 2], C64::new(0.0, 2.0));
    let p1 = Poly::constant(2, C64::new(-3.0, 0.0));
    let s = FormalSymbol::new(1, vec![C64::new(0.1, 0.2), C64::new(0.0, 0.0)], 1, 2, vec![p0, p1])
        .unwrap();
    let dto = FormalSymbolDto::from_symbol(&s);
    let text = serde_json::to_string(&dto).unwrap();
    let back: FormalSymbolDto = serde_json::from_str(&text).unwrap();
    let t = back.to_symbol().unwrap();
    assert_eq!(t.coeffs, s.coeffs);
    assert_eq!(t.base, s.base);
    assert_eq!((t.m, t.degree_cap), (1, 2));
}

#[test]
fn mismatched_symbol_order_count_is_rejected() {
    let dto = FormalSymbolDto {
        n: 1,
        base: vec![[0.0, 0.0]; 2],
        m: 0,
        k: 2,
        d: 1,
        coeffs: vec![vec![]],
    };
    assert!(dto.to_symbol().is_err());
}

#[test]
fn phases_build_from_json() {
    let nf: PhaseSpec =
        serde_json::from_value(json!({"kind": "normal_form", "a": [[[0, -1]]], "b": [[1]]})).unwrap();
    assert!(nf.build(1).is_ok());
    let g: PhaseSpec = serde_json::from_value(json!({
        "kind": "general", "q_xx": [[[0, 0]]], "q_xy": [[[0, -1]]], "q_yy": [[[0.5, 1]]]
    }))
    .unwrap();
    assert!(g.build(1).is_ok());
    let bad: PhaseSpec = serde_json::from_value(json!({
        "kind": "general", "q_xx": [[[0, 0]]], "q_xy": [[[0, 0]]], "q_yy": [[[0, 1]]]
    }))
    .unwrap();
    assert!(bad.build(1).is_err());
}

#[test]
fn holomorphic_sample_round_trips() {
    use fbi_core::phase::FBIPhase;
    use fbi_core::transform::{covering_grid, fbi_forward, TestDistribution};
    let phi = FBIPhase::bargmann(1);
    let grid = covering_grid(&phi, 0.2, (-1.0, 1.0), 4.0, 0.5).unwrap();
    let v = fbi_forward(&[TestDistribution::Gaussian { a: 1.0 }], &phi, 0.2, &grid).unwrap();
    let dto = HoloSampleDto::from_sample(&v);
    let back: HoloSampleDto = serde_json::from_str(&serde_json::to_string(&dto).unwrap()).unwrap();
    let w = back.to_sample().unwrap();
    let gap = w.values.iter().zip(&v.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert_eq!(gap, 0.0, "max gap {gap}");
    assert_eq!(w.h, v.h);
    assert_eq!(HoloSampleDto::from_sample(&w), dto);
}
