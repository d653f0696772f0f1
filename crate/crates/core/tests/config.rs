use proptest::prelude::*;
use wavecert::config::{parse_config, DataKind, RunConfig, SweepRange};
use wavecert::Error;

#[test]
fn full_document_applies() {
    let text = "\
subcommand = sweep
seed = 42
[grid]
dr = 0.0625
l_max = 3
[weights]
s = 1.5
delta = 0.05
[semilinear]
p = 1.6
eps = 3
damped = true
data = positive
[sweep]
p = 1.6, 2.0
eps = 0.5, 3
[exponents]
sweep = 1.5:3:8
";
    let cfg = RunConfig::from_text(text).unwrap();
    assert_eq!(cfg.subcommand, "sweep");
    assert_eq!(cfg.seed, 42);
    assert_eq!((cfg.grid.dr, cfg.grid.l_max), (0.0625, 3));
    assert_eq!((cfg.weights.s, cfg.weights.delta), (1.5, 0.05));
    assert!(cfg.semilinear.damped);
    assert_eq!(cfg.data, DataKind::Positive);
    assert_eq!(cfg.sweep_eps, vec![0.5, 3.0]);
    assert_eq!(cfg.exponents.sweep, Some(SweepRange { p0: 1.5, p1: 3.0, steps: 8 }));
}

#[test]
fn json_roundtrip_is_exact() {
    let mut cfg = RunConfig::from_text("[grid]\ndr = 0.1\n[weights]\ns = 1.2345678901234567\n").unwrap();
    cfg.output_dir = Some("out dir".into());
    let text = serde_json::to_string(&cfg).unwrap();
    let back: RunConfig = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cfg);
    let partial: RunConfig = serde_json::from_str(r#"{"seed": 9}"#).unwrap();
    assert_eq!(partial.seed, 9);
    assert_eq!(partial.grid, RunConfig::default().grid);
}

#[test]
fn unknown_section_rejected() {
    assert!(matches!(RunConfig::from_text("[colours]\nred = 1\n"), Err(Error::Domain(_))));
}

proptest! {
    #[test]
    fn parser_never_panics(text in "\\PC{0,200}") {
        let _ = parse_config(&text);
    }

    #[test]
    fn written_documents_parse_back(entries in prop::collection::btree_map("[a-z][a-z0-9_]{0,8}", "[A-Za-z0-9.,:+-]{0,12}", 0..8)) {
        let mut text = String::from("[section]\n");
        for (k, v) in &entries {
            text.push_str(&format!("  {k} =  {v}  \n"));
        }
        let doc = parse_config(&text).unwrap();
        prop_assert_eq!(&doc.sections["section"], &entries.iter().map(|(k, v)| (k.clone(), v.clone())).collect());
    }

    #[test]
    fn seeds_survive(seed in any::<u64>()) {
        let cfg = RunConfig::from_text(&format!("seed = {seed}")).unwrap();
        prop_assert_eq!(cfg.seed, seed);
    }
}
