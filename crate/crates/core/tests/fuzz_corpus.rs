//! Replays the checked-in fuzz seeds through the same entry points the fuzz
//! targets exercise.

use std::fs;
use std::path::PathBuf;

use frontal::config::{parse_config, GridSpec, MIN_GRID_COUNT};
use frontal::expr;
use frontal::io::read_curve_csv;

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    assert!(!paths.is_empty(), "no seeds for {target}");
    paths.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

#[test]
fn parse_expr_seeds() {
    let mut parsed = 0;
    for s in seeds("parse_expr") {
        if let Ok(e) = expr::parse(std::str::from_utf8(&s).unwrap()) {
            assert_eq!(expr::parse(&e.to_string()).unwrap(), e);
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn eval_expr_seeds() {
    for s in seeds("eval_expr") {
        let t = f64::from_le_bytes(s[..8].try_into().unwrap());
        let order = usize::from(s[8] % 6);
        let e = expr::parse(std::str::from_utf8(&s[9..]).unwrap()).unwrap();
        let _ = expr::eval(&e, t);
        let _ = expr::eval_jet(&e, t, order);
    }
}

#[test]
fn parse_grid_seeds() {
    let ok: Vec<GridSpec> = seeds("parse_grid")
        .iter()
        .filter_map(|s| std::str::from_utf8(s).unwrap().parse().ok())
        .collect();
    assert_eq!(ok.len(), 2);
    assert!(ok.iter().all(|g| g.min < g.max && g.count >= MIN_GRID_COUNT));
}

#[test]
fn parse_config_seeds() {
    let ok = seeds("parse_config")
        .iter()
        .filter(|s| parse_config(std::str::from_utf8(s).unwrap()).is_ok())
        .count();
    assert_eq!(ok, 1);
}

#[test]
fn read_curve_csv_seeds() {
    let tables: Vec<_> = seeds("read_curve_csv")
        .iter()
        .filter_map(|s| read_curve_csv(&s[..]).ok())
        .collect();
    assert_eq!(tables.len(), 2);
    assert!(tables.iter().any(|t| t.clone().into_profile().is_ok()));
}
