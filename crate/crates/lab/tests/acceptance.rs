//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::time::Instant;

use cantor_lab::fanout::Parallel;
use cantor_lab::presets::{preset, NAMES};
use cantor_lab::{execute, Task};
use cantor_zeros::analysis::*;
use cantor_zeros::cantor::{build_tree, CantorFunction};
use cantor_zeros::events::{
    exact_z_oracle, second_moment_decomposition_check, simulate_moments, MomentConfig,
    MomentReport, YMode,
};
use cantor_zeros::sequences::{derive_b, SequenceKind, SequenceSpec};
use cantor_zeros::stats::linear_fit;

/// Tolerances pinned for the suite.
const EXACT_TOL: f64 = 1e-12;
const DECOMPOSITION_TOL: f64 = 1e-10;
const MEAN_Z_RANGE: (f64, f64) = (0.24, 1.0);
const SIGMAS: f64 = 3.0;
const LIL_TOL: f64 = 1e-9;
const SLOPE_RANGE: (f64, f64) = (0.8, 1.2);
const ALPHA_TOL: f64 = 0.005;
const SEED: u64 = 20240601;

type Verdict = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn binary(kind: SequenceKind, eps: f64) -> SequenceSpec {
    SequenceSpec::binary(kind, eps).unwrap()
}

fn four_specs() -> Vec<(&'static str, SequenceSpec)> {
    vec![
        (
            "Geometric(1.5)",
            binary(SequenceKind::Geometric { x: 1.5 }, 0.5),
        ),
        (
            "Geometric(4)",
            binary(SequenceKind::Geometric { x: 4.0 }, 0.5),
        ),
        (
            "Constant(1)",
            binary(SequenceKind::Constant { a: 1.0 }, 0.25),
        ),
        ("Power(2)", binary(SequenceKind::Power { d: 2.0 }, 0.05)),
    ]
}

fn moments(
    cf: &CantorFunction,
    n: usize,
    replicates: u64,
    y_mode: YMode,
    oracle: bool,
) -> MomentReport {
    let cfg = MomentConfig {
        level: n,
        replicates,
        seed: SEED,
        y_mode,
        oracle,
    };
    simulate_moments(cf, &cfg, &Parallel::new(available_workers())).unwrap()
}

fn available_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn construction_fidelity() -> Verdict {
    let fig1 = SequenceSpec::new(
        SequenceKind::Custom(vec![1.6f64.sqrt(), 0.64f64.sqrt(), 0.8]),
        2,
        0.1,
    )
    .unwrap();
    let fig3 =
        SequenceSpec::new(SequenceKind::Custom(vec![1.8f64.sqrt(), 1.8, 2.7]), 3, 0.1).unwrap();
    let mut worst: f64 = 0.0;
    for (spec, want) in [(&fig1, [0.4, 0.04, 0.01]), (&fig3, [0.2, 0.04, 0.01])] {
        let b = derive_b(spec, 3).unwrap();
        for (d, w) in b[1..].iter().zip(want) {
            worst = worst.max((d.b - w).abs());
        }
    }
    let cf = build_tree(&fig1, 3).unwrap();
    let plateau = cf.evaluate_fbn(1, 1.5).unwrap();
    let enc = cf.evaluate_fb(1.5, 1e-15);
    let plateau_ok = plateau == 0.5 && enc.lo <= 0.5 && 0.5 <= enc.hi && enc.width() <= 1e-15;
    check(
        worst < EXACT_TOL && plateau_ok,
        format!("max |b - target| = {worst:.1e}, level-1 gap plateau f = {plateau}"),
    )
}

fn hitting_bounds() -> Verdict {
    let (mut worst_ratio, mut lo, mut hi) = (0.0f64, f64::INFINITY, 0.0f64);
    for (_, spec) in four_specs() {
        let cf = build_tree(&spec, 8).unwrap();
        for n in 1..=8 {
            let o = exact_z_oracle(&cf, n).unwrap();
            let cap = 0.5f64.powi(n as i32);
            worst_ratio = o.p.iter().fold(worst_ratio, |m, p| m.max(p / cap));
            lo = lo.min(o.mean);
            hi = hi.max(o.mean);
        }
    }
    check(
        worst_ratio <= 1.0 && lo >= MEAN_Z_RANGE.0 && hi <= MEAN_Z_RANGE.1,
        format!("max P(Z_n(I))·2^n = {worst_ratio:.4}, E(Z) in [{lo:.4}, {hi:.4}]"),
    )
}

fn second_moment_identity() -> Verdict {
    let mut worst: f64 = 0.0;
    for (_, spec) in four_specs() {
        let cf = build_tree(&spec, 8).unwrap();
        for n in 1..=8 {
            let c = second_moment_decomposition_check(&exact_z_oracle(&cf, n).unwrap());
            worst = worst.max(c.discrepancy);
        }
    }
    check(
        worst < DECOMPOSITION_TOL,
        format!("max discrepancy {worst:.2e} over n = 1..8"),
    )
}

fn oracle_agreement(reports: &[(&str, MomentReport)]) -> Verdict {
    let mut worst: f64 = 0.0;
    let mut max_se: f64 = 0.0;
    for (_, r) in reports {
        let z1 = (r.mean_z.value - r.mean_z_exact.unwrap()).abs() / r.mean_z.se;
        let z2 = (r.second_moment_z.value - r.second_moment_z_exact.unwrap()).abs()
            / r.second_moment_z.se;
        worst = worst.max(z1).max(z2);
        max_se = max_se.max(r.mean_z.se);
    }
    check(
        worst <= SIGMAS,
        format!("max |MC - oracle|/SE = {worst:.2} (max SE(E Z) = {max_se:.1e})"),
    )
}

fn paley_zygmund(reports: &[(&str, MomentReport)]) -> Verdict {
    let mut worst = f64::INFINITY;
    for (_, r) in reports {
        let floor = r.pz_lower_bound.unwrap();
        worst = worst.min((r.prob_z_positive.value - floor) / r.prob_z_positive.se);
        let mc = &r.pz_monte_carlo;
        let se = (r.prob_z_positive.se.powi(2) + mc.se.powi(2)).sqrt();
        worst = worst.min((r.prob_z_positive.value - mc.value) / se);
    }
    check(
        worst >= -SIGMAS,
        format!("min (P(Z>0) - PZ floor)/SE = {worst:.2}"),
    )
}

fn dichotomy_signal() -> Verdict {
    let reps = 100_000;
    let geo = build_tree(&binary(SequenceKind::Geometric { x: 1.5 }, 0.5), 8).unwrap();
    let mut geo_margin = f64::INFINITY;
    for n in 2..=8 {
        let r = moments(&geo, n, reps, YMode::Endpoints, true);
        let floor = r.pz_lower_bound.unwrap();
        geo_margin = geo_margin.min((r.prob_z_positive.value - floor) / r.prob_z_positive.se);
    }
    let mut notes = vec![format!(
        "Geometric(1.5) min (P(Z>0) - floor)/SE = {geo_margin:.2}"
    )];
    let mut ok = geo_margin >= -SIGMAS;
    for (name, kind) in [
        ("Constant(1)", SequenceKind::Constant { a: 1.0 }),
        ("InverseLogSqrt", SequenceKind::InverseLogSqrt),
    ] {
        let cf = build_tree(&binary(kind, 0.25), 8).unwrap();
        let p: Vec<_> = (4..=8)
            .map(|n| moments(&cf, n, reps, YMode::Exact, false).prob_y_positive)
            .collect();
        let strictly = p.windows(2).all(|w| w[1].value < w[0].value);
        // no step may show a significant increase, and the overall drop must be significant
        let no_rise = p
            .windows(2)
            .all(|w| w[1].value - w[0].value <= 1.96 * w[0].se.hypot(w[1].se));
        let (first, last) = (p[0], p[p.len() - 1]);
        let drop_z = (first.value - last.value) / first.se.hypot(last.se);
        ok &= strictly && no_rise && drop_z > 1.96;
        notes.push(format!(
            "{name} P(Y>0) n=4..8: {} (SE {:.1e}, drop {drop_z:.1} SE)",
            p.iter()
                .map(|e| format!("{:.4}", e.value))
                .collect::<Vec<_>>()
                .join(" "),
            first.se
        ));
    }
    check(ok, notes.join("; "))
}

fn s_function_bound() -> Verdict {
    let mut min_gap = f64::INFINITY;
    for i in 0..1000 {
        let z = 10f64.powf(-2.0 + 3.0 * i as f64 / 999.0);
        let s = s_function(z, 16);
        min_gap = min_gap.min((s_bound(z) - s.value - s.tail_bound) / s_bound(z));
    }
    check(
        min_gap > 0.0,
        format!("min relative slack (bound - S)/bound = {min_gap:.3e} on 1000 points"),
    )
}

fn census_and_chebyshev() -> Verdict {
    let specs = [
        binary(SequenceKind::Constant { a: 1.0 }, 0.25),
        binary(SequenceKind::Geometric { x: 1.5 }, 0.5),
        binary(SequenceKind::InverseLogSqrt, 0.25),
    ];
    let mut mismatches = 0;
    let mut dominance = f64::INFINITY;
    for spec in &specs {
        for rule in [BalanceRule::ZeroFractionThird, BalanceRule::WeightedSum] {
            for n in 1..=24 {
                let c = census(spec, n, rule).unwrap();
                if n <= 16 {
                    let (bal, unbal) = census_brute_force(spec, n, rule).unwrap();
                    mismatches += (bal != c.balanced_count || unbal != c.unbalanced_count) as usize;
                }
                dominance = dominance.min(c.chebyshev_bound - c.unbalanced_fraction());
            }
        }
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for n in (4..=24).step_by(4) {
        let c = census(&specs[0], n, BalanceRule::ZeroFractionThird).unwrap();
        xs.push(n as f64);
        ys.push(c.unbalanced_fraction().ln());
    }
    let slope = linear_fit(&xs, &ys).0;
    check(
        mismatches == 0 && dominance >= 0.0 && slope < 0.0,
        format!("{mismatches} census mismatches (n <= 16), min (bound - fraction) = {dominance:.3e}, log-fraction slope {slope:.4}"),
    )
}

fn lil_classifier() -> Verdict {
    let geo = build_tree(&binary(SequenceKind::Geometric { x: 4.0 }, 0.5), 12).unwrap();
    let lin = build_tree(&binary(SequenceKind::Linear, 0.01), 30).unwrap();
    let con = build_tree(&binary(SequenceKind::Constant { a: 1.0 }, 0.25), 20).unwrap();
    let mut ok = true;
    for t in [
        1.0,
        2.0,
        geo.node(3, 5).unwrap().right,
        geo.node(2, 1).unwrap().left,
    ] {
        ok &= lil_profile(&geo, t, 12).unwrap().class == LilClass::Diverging;
    }
    let mut worst: f64 = 0.0;
    for (cf, depth) in [(&lin, 30), (&con, 20), (&geo, 12)] {
        let p = lil_profile(cf, 1.0, depth).unwrap();
        for (l, r) in p.levels.iter().zip(&p.ratios) {
            let b = cf.b(*l);
            let want = 0.5f64.powi(*l as i32 + 1) / (2.0 * b * (1.0 / b).ln().ln()).sqrt();
            worst = worst.max((r - want).abs() / want.max(1.0));
        }
    }
    let lin_class = lil_profile(&lin, 1.0, 30).unwrap().class;
    let con_class = lil_profile(&con, 1.0, 20).unwrap().class;
    ok &= lin_class == LilClass::Vanishing && con_class == LilClass::Vanishing && worst < LIL_TOL;
    check(
        ok,
        format!(
            "Linear {lin_class:?}, Constant(1) {con_class:?}, max closed-form error {worst:.1e}"
        ),
    )
}

fn cut_sweep() -> Verdict {
    let cf = build_tree(&binary(SequenceKind::Geometric { x: 1.5 }, 0.5), 10).unwrap();
    let s = cut_probability_sweep(
        &cf,
        &halving_windows(2, 6),
        10,
        100_000,
        SEED,
        &Parallel::new(available_workers()),
    )
    .unwrap();
    let alpha_err = (s.alpha_mc.value - s.alpha_exact).abs();
    check(
        (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&s.slope) && alpha_err <= ALPHA_TOL,
        format!(
            "slope {:.3}, alpha {:.4} ± {:.4} vs {:.4}",
            s.slope, s.alpha_mc.value, s.alpha_mc.se, s.alpha_exact
        ),
    )
}

fn determinism() -> Verdict {
    let root = tempfile::tempdir().unwrap();
    let mut compared = 0;
    for name in NAMES {
        let dirs = [
            root.path().join(format!("{name}-a")),
            root.path().join(format!("{name}-b")),
        ];
        for d in &dirs {
            std::fs::create_dir_all(d).unwrap();
            execute(preset(name).unwrap(), d, Task::All).unwrap();
        }
        let mut files: Vec<_> = std::fs::read_dir(&dirs[0])
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .filter(|f| f.to_string_lossy().ends_with(".csv"))
            .collect();
        files.sort();
        for f in files {
            let (a, b) = (
                std::fs::read(dirs[0].join(&f)).unwrap(),
                std::fs::read(dirs[1].join(&f)).unwrap(),
            );
            if a != b {
                return Err(format!("{name}/{} differs", f.to_string_lossy()));
            }
            compared += 1;
        }
    }
    check(
        compared > 0,
        format!(
            "{compared} CSVs byte-identical across reruns of {} presets",
            NAMES.len()
        ),
    )
}

fn main() {
    let t = Instant::now();
    let reports: Vec<(&str, MomentReport)> = four_specs()
        .into_iter()
        .map(|(name, spec)| {
            let cf = build_tree(&spec, 4).unwrap();
            (name, moments(&cf, 4, 1_000_000, YMode::Endpoints, true))
        })
        .collect();
    println!(
        "shared n = 4 Monte Carlo run for criteria 4 and 5: {:.1}s",
        t.elapsed().as_secs_f64()
    );
    let criteria: Vec<Criterion> = vec![
        ("construction fidelity", Box::new(construction_fidelity)),
        ("hitting probability bounds", Box::new(hitting_bounds)),
        ("second-moment identity", Box::new(second_moment_identity)),
        (
            "oracle/Monte Carlo agreement",
            Box::new(|| oracle_agreement(&reports)),
        ),
        ("Paley-Zygmund floor", Box::new(|| paley_zygmund(&reports))),
        ("dichotomy signal", Box::new(dichotomy_signal)),
        ("S(z) bound", Box::new(s_function_bound)),
        (
            "census and exponential bound",
            Box::new(census_and_chebyshev),
        ),
        ("LIL classifier", Box::new(lil_classifier)),
        ("cut sweep", Box::new(cut_sweep)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = f();
        let secs = t.elapsed().as_secs_f64();
        match v {
            Ok(d) => println!("PASS criterion {:>2} {name}: {d} [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {d} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
