//! CLI acceptance: determinism of the emitted CSVs (criterion 9), the
//! documented exit codes, and the per-command output contracts.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;
use thermo_neutral::commands;
use thermo_neutral::config::RawConfig;

const LOG2: f64 = std::f64::consts::LN_2;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_thermo-neutral")
}

fn write_config(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("thermo-neutral-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn parse(table: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = table.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn field(header: &[String], row: &[String], name: &str) -> f64 {
    let idx = header.iter().position(|h| h == name).unwrap();
    row[idx].parse().unwrap()
}

const HORSESHOE_CONF: &str = "system.kind = horseshoe\nr = 3\n";
const MMRNE_CONF: &str = "system.kind = horseshoe\nr.grid = 0.001,0.5,1,2,3,5,10\n";
const VERIFY_PARRY_CONF: &str = "system.kind = sft\n\
    system.adjacency = 11;10\n\
    system.phi_u = 1,2\n\
    system.phi_s = -1,-2\n\
    metric.theta = 0.36787944117144233\n\
    r = 1\n\
    n = 400\n\
    samples = 200\n\
    seed = 7\n";
const VERIFY_UNIFORM_CONF: &str = "system.kind = horseshoe\n\
    system.eta1 = 0.4\n\
    system.eta2 = 0.2\n\
    measure.kind = bernoulli\n\
    measure.probs = 0.5,0.5\n\
    metric.theta = 0.36787944117144233\n\
    r = 1\n\
    n = 200\n\
    samples = 100\n\
    seed = 3\n";

#[test]
fn acceptance_9_repeated_runs_are_byte_identical() {
    let start = Instant::now();

    // Library level: parse+run twice per command.
    let run_horseshoe = || {
        commands::cmd_horseshoe(RawConfig::parse_str("h.conf", HORSESHOE_CONF).unwrap()).unwrap()
    };
    let (csv_a, summary_a) = run_horseshoe();
    let (csv_b, summary_b) = run_horseshoe();
    assert_eq!(csv_a, csv_b);
    assert_eq!(summary_a, summary_b);

    let run_mmrne =
        || commands::cmd_mmrne(RawConfig::parse_str("m.conf", MMRNE_CONF).unwrap()).unwrap();
    assert_eq!(run_mmrne(), run_mmrne());

    let run_verify = || {
        commands::cmd_verify(
            RawConfig::parse_str("v.conf", VERIFY_PARRY_CONF).unwrap(),
            None,
        )
        .unwrap()
    };
    assert_eq!(run_verify(), run_verify());

    // Binary level: separate processes, compared byte for byte.
    let conf = write_config("determinism.conf", VERIFY_PARRY_CONF);
    let run_bin = || {
        let out = Command::new(bin())
            .args(["verify", "--config"])
            .arg(&conf)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run_bin(), run_bin());

    let elapsed = start.elapsed();
    println!("[PASS] criterion 9: determinism ({elapsed:?})");
}

#[test]
fn output_is_independent_of_thread_count() {
    let conf = write_config("threads.conf", VERIFY_PARRY_CONF);
    let run_with_threads = |args: &[&str], env: Option<(&str, &str)>| {
        let mut cmd = Command::new(bin());
        cmd.args(["verify", "--config"]).arg(&conf).args(args);
        if let Some((k, v)) = env {
            cmd.env(k, v);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let one = run_with_threads(&["--threads", "1"], None);
    let four = run_with_threads(&["--threads", "4"], None);
    let via_env = run_with_threads(&[], Some(("THERMO_NEUTRAL_THREADS", "2")));
    assert_eq!(one, four);
    assert_eq!(one, via_env);
}

#[test]
fn verify_seed_override_changes_and_restores_output() {
    let conf = write_config("seeded.conf", VERIFY_PARRY_CONF);
    let run_with = |seed: &str| {
        let out = Command::new(bin())
            .args(["verify", "--config"])
            .arg(&conf)
            .args(["--seed", seed])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run_with("11"), run_with("11"));
    assert_ne!(run_with("11"), run_with("12"));
}

#[test]
fn pressure_grid_output_contract() {
    let conf = "system.kind = horseshoe\n\
        system.eta1 = 0.4\n\
        system.eta2 = 0.2\n\
        grid.p.min = -1\n\
        grid.p.max = 1\n\
        grid.p.count = 3\n\
        grid.q.min = -1\n\
        grid.q.max = 1\n\
        grid.q.count = 3\n";
    let csv = commands::cmd_pressure(RawConfig::parse_str("p.conf", conf).unwrap()).unwrap();
    let (header, rows) = parse(&csv);
    assert_eq!(rows.len(), 9);
    assert_eq!(header[0], "p");
    // Center row is the zero potential: Q = log 2.
    let center = rows
        .iter()
        .find(|row| field(&header, row, "p") == 0.0 && field(&header, row, "q") == 0.0)
        .unwrap();
    assert!((field(&header, center, "Q") - LOG2).abs() < 1e-12);
    for row in &rows {
        assert!(field(&header, row, "deriv_resid_u") < 1e-6);
        assert!(field(&header, row, "deriv_resid_s") < 1e-6);
    }
}

#[test]
fn mmrne_constant_system_pins_origin() {
    let conf = "system.kind = horseshoe\n\
        system.eta1 = 0.4\n\
        system.eta2 = 0.4\n\
        r.grid = 0,0.1,1,10\n";
    let csv = commands::cmd_mmrne(RawConfig::parse_str("m.conf", conf).unwrap()).unwrap();
    let (header, rows) = parse(&csv);
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert_eq!(field(&header, row, "argmax_p"), 0.0);
        assert_eq!(field(&header, row, "argmax_q"), 0.0);
        assert_eq!(field(&header, row, "edge_hit"), 0.0);
    }
}

#[test]
fn mmrne_flags_coexisting_maximizers_and_convexity() {
    let csv = commands::cmd_mmrne(RawConfig::parse_str("m.conf", MMRNE_CONF).unwrap()).unwrap();
    let (header, rows) = parse(&csv);
    let hr: Vec<f64> = rows.iter().map(|r| field(&header, r, "hr_max")).collect();
    let rates: Vec<f64> = rows.iter().map(|r| field(&header, r, "r")).collect();
    assert!(rates.windows(2).all(|w| w[0] < w[1]), "rows sorted by rate");
    for w in hr.windows(2) {
        assert!(w[1] >= w[0] - 1e-12);
    }
    // Convexity along the (irregular) rate grid via divided differences.
    for i in 1..rates.len() - 1 {
        let left = (hr[i] - hr[i - 1]) / (rates[i] - rates[i - 1]);
        let right = (hr[i + 1] - hr[i]) / (rates[i + 1] - rates[i]);
        assert!(right >= left - 1e-9);
    }
    // The wide-contrast default splits at r = 3 and beyond.
    for row in &rows {
        let r = field(&header, row, "r");
        let count = field(&header, row, "bernoulli_maxima");
        if r >= 3.0 {
            assert_eq!(count, 2.0, "r = {r}");
        } else if r <= 1.0 {
            assert_eq!(count, 1.0, "r = {r}");
        }
    }
}

#[test]
fn verify_uniform_bernoulli_is_exact() {
    let csv = commands::cmd_verify(
        RawConfig::parse_str("v.conf", VERIFY_UNIFORM_CONF).unwrap(),
        None,
    )
    .unwrap();
    let (header, rows) = parse(&csv);
    assert_eq!(rows.len(), 1);
    assert_eq!(field(&header, &rows[0], "stddev"), 0.0);
    assert!((field(&header, &rows[0], "mean") - 3.0 * LOG2).abs() < 1e-12);
    assert!((field(&header, &rows[0], "predicted") - 3.0 * LOG2).abs() < 1e-12);
}

#[test]
fn verify_accepts_explicit_markov_measures() {
    // The Parry transition matrix given explicitly; the stationary vector
    // is recomputed at load.
    let conf = "system.kind = sft\n\
        system.adjacency = 11;10\n\
        system.phi_u = 1,2\n\
        system.phi_s = -1,-2\n\
        measure.kind = markov\n\
        measure.matrix = 0.5,0.5;1,0\n\
        r = 1\n\
        n = 200\n\
        samples = 100\n\
        seed = 21\n";
    let csv = commands::cmd_verify(RawConfig::parse_str("v.conf", conf).unwrap(), None).unwrap();
    let (header, rows) = parse(&csv);
    let mean = field(&header, &rows[0], "mean");
    let predicted = field(&header, &rows[0], "predicted");
    assert!((mean - predicted).abs() / predicted < 0.05);
}

#[test]
fn verify_rejects_measures_off_the_shift() {
    // Bernoulli(1/2, 1/2) charges the forbidden transition of the
    // golden-mean shift.
    let conf = write_config(
        "unsupported-measure.conf",
        "system.kind = sft\n\
         system.adjacency = 11;10\n\
         system.phi_u = 1,2\n\
         system.phi_s = -1,-2\n\
         measure.kind = bernoulli\n\
         measure.probs = 0.5,0.5\n",
    );
    let out = Command::new(bin())
        .args(["verify", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not supported"));
}

#[test]
fn verify_parry_tracks_prediction() {
    let csv = commands::cmd_verify(
        RawConfig::parse_str("v.conf", VERIFY_PARRY_CONF).unwrap(),
        None,
    )
    .unwrap();
    let (header, rows) = parse(&csv);
    let mean = field(&header, &rows[0], "mean");
    let predicted = field(&header, &rows[0], "predicted");
    assert!((mean - predicted).abs() / predicted < 0.02);
}

#[test]
fn horseshoe_summary_contract() {
    let (_, summary) =
        commands::cmd_horseshoe(RawConfig::parse_str("h.conf", HORSESHOE_CONF).unwrap()).unwrap();
    assert!(summary.contains("derivative at p = 1/2: 0.0000000000000000e0"));
    assert!(summary.contains("maximizers: 2"));
    assert!(summary.contains("critical r: 2.61826736861"));

    // Pure entropy at rate zero: the symmetric weight is the unique
    // maximizer.
    let (_, summary) = commands::cmd_horseshoe(
        RawConfig::parse_str("h0.conf", "system.kind = horseshoe\nr = 0\n").unwrap(),
    )
    .unwrap();
    assert!(summary.contains("maximizers: 1"));
    let p_line = summary
        .lines()
        .find(|l| l.trim_start().starts_with("p = "))
        .unwrap();
    let p: f64 = p_line
        .trim_start()
        .trim_start_matches("p = ")
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((p - 0.5).abs() < 1e-10, "maximizer at {p}");
}

#[test]
fn malformed_adjacency_exits_with_config_error() {
    // Symbol 1 has no outgoing edge; the message must name it and the line.
    let conf = write_config(
        "bad-adjacency.conf",
        "system.kind = sft\n\
         system.adjacency = 11;00\n\
         system.phi_u = 1,2\n\
         system.phi_s = -1,-2\n",
    );
    let out = Command::new(bin())
        .args(["verify", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains(":2:"), "line missing: {stderr}");
    assert!(stderr.contains("symbol 1"), "symbol missing: {stderr}");
}

#[test]
fn unknown_key_and_conflicting_rates_exit_with_config_error() {
    let conf = write_config(
        "unknown-key.conf",
        "system.kind = horseshoe\ngrid.p.mn = 1\n",
    );
    let out = Command::new(bin())
        .args(["pressure", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));

    let conf = write_config(
        "conflicting-rates.conf",
        "system.kind = horseshoe\nr = 1\nr.grid = 1,2\n",
    );
    let out = Command::new(bin())
        .args(["mmrne", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let conf = write_config("missing.conf", "system.kind = sft\n");
    let out = Command::new(bin())
        .args(["pressure", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_hyperbolic_system_exits_with_config_error() {
    let conf = write_config(
        "nonhyperbolic.conf",
        "system.kind = sft\n\
         system.adjacency = 11;10\n\
         system.phi_u = 0,1\n\
         system.phi_s = -1,-1\n",
    );
    let out = Command::new(bin())
        .args(["pressure", "--config"])
        .arg(&conf)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hyperbolicity"));
}

#[test]
fn csv_lines_end_with_lf_only() {
    let csv = commands::cmd_verify(
        RawConfig::parse_str("v.conf", VERIFY_UNIFORM_CONF).unwrap(),
        None,
    )
    .unwrap();
    assert!(!csv.contains('\r'));
    assert!(csv.ends_with('\n'));
}
