//! Stage runners. Each stage writes one or two CSV files into the run
//! directory and can run on its own given the same config.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use cantor_zeros::analysis::{
    balanced_first_moment_lower, balanced_uniform_bound, c2_constant, census,
    conditional_sum_bound, cut_probability_sweep, easy_conditional_bounds,
    fit_conditional_constants, halving_windows, holder_diagnostics, isolated_zone_construction,
    lil_profile, s_bound, s_function, second_moment_rollup, BalanceRule, LilClass,
};
use cantor_zeros::cantor::{build_tree, CantorFunction};
use cantor_zeros::events::{
    exact_z_oracle, level_seed, simulate_moments, LevelGrid, MomentConfig, ORACLE_CAP,
};
use cantor_zeros::sequences::{
    check_epsilon_condition, classify, ConvergenceHeuristic, Verdict, WindowSequence,
};
use cantor_zeros::AnalysisError;

use crate::config::{ExperimentConfig, NamedSpec, Output};
use crate::error::{LabError, StageExt};
use crate::fanout::Parallel;
use crate::manifest::{RunManifest, StageTiming};
use crate::table::{Loaded, Table};

/// Largest tree level dumped by the `tree` stage.
pub const TREE_DUMP_MAX_INTERVALS: u64 = 1 << 12;

pub const MOMENTS_HEADER: &[&str] = &[
    "spec_id",
    "k",
    "n",
    "mean_Z",
    "se",
    "mean_Z_exact",
    "m2_Z",
    "m2_Z_exact",
    "pz_bound",
    "p_Z_pos",
    "se",
    "mean_Y",
    "se",
    "p_Y_pos",
    "se",
    "replicates",
    "seed",
];

/// One invocation against a run directory.
pub struct Run {
    pub cfg: ExperimentConfig,
    pub out: PathBuf,
    fanout: Parallel,
    trees: BTreeMap<String, CantorFunction>,
    timings: Vec<StageTiming>,
    written: Vec<String>,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::PositiveProbability => "PositiveProbability",
        Verdict::ZeroProbability => "ZeroProbability",
        Verdict::Undecided => "Undecided",
    }
}

fn lil_name(c: LilClass) -> &'static str {
    match c {
        LilClass::Diverging => "Diverging",
        LilClass::Vanishing => "Vanishing",
        LilClass::Inconclusive => "Inconclusive",
    }
}

fn probe_len(s: &NamedSpec) -> usize {
    s.spec.table_len().unwrap_or(64)
}

impl Run {
    pub fn new(cfg: ExperimentConfig, out: impl Into<PathBuf>) -> Result<Self, LabError> {
        let out = out.into();
        std::fs::create_dir_all(&out)?;
        Ok(Self {
            fanout: Parallel::new(cfg.workers),
            cfg,
            out,
            trees: BTreeMap::new(),
            timings: Vec::new(),
            written: Vec::new(),
        })
    }

    /// Builds (once) the tree for `s` at `depth` and returns its cache key.
    fn tree(&mut self, s: &NamedSpec, depth: usize) -> Result<String, LabError> {
        let key = format!("{}@{depth}", s.id);
        if !self.trees.contains_key(&key) {
            let cf = build_tree(&s.spec, depth).stage("build")?;
            self.trees.insert(key.clone(), cf);
        }
        Ok(key)
    }

    fn emit(&mut self, file: &str, table: &Table) -> Result<(), LabError> {
        table.write(&self.out.join(file))?;
        if !self.written.iter().any(|f| f == file) {
            self.written.push(file.into());
        }
        Ok(())
    }

    fn timed<F>(&mut self, stage: &'static str, f: F) -> Result<(), LabError>
    where
        F: FnOnce(&mut Self) -> Result<(), LabError>,
    {
        let t = Instant::now();
        f(self)?;
        self.timings.push(StageTiming {
            stage: stage.into(),
            seconds: t.elapsed().as_secs_f64(),
        });
        Ok(())
    }

    /// Runs one output stage.
    pub fn stage(&mut self, o: Output) -> Result<(), LabError> {
        match o {
            Output::Classify => self.timed("classify", Self::classify),
            Output::Tree => self.timed("tree", Self::tree_dump),
            Output::Moments => self.timed("moments", Self::moments),
            Output::Census => self.timed("census", Self::census),
            Output::Lil => self.timed("lil", Self::lil),
            Output::Cuts => self.timed("cuts", Self::cuts),
            Output::Bounds => self.timed("bounds", Self::bounds),
            Output::Paths => self.timed("paths", Self::paths),
        }
    }

    /// Runs every enabled stage, then the report.
    pub fn run_all(&mut self) -> Result<(), LabError> {
        for o in self.cfg.outputs.clone() {
            self.stage(o)?;
        }
        self.summary()
    }

    /// Writes summary.csv from whatever outputs the run directory holds.
    pub fn summary(&mut self) -> Result<(), LabError> {
        self.timed("report", Self::report)
    }

    pub fn manifest(&self, started: Instant) -> RunManifest {
        RunManifest::new(
            &self.cfg,
            started,
            self.timings.clone(),
            self.written.clone(),
        )
    }

    fn classify(&mut self) -> Result<(), LabError> {
        let mut t = Table::new(
            "classify",
            &[
                "spec_id",
                "kind",
                "k",
                "epsilon",
                "verdict",
                "positive_by_sum_a",
                "positive_by_sum_inv_a",
                "window_c",
                "window_delta",
                "window_n0",
                "log_growth_c",
                "weak_gap",
                "largest_valid_epsilon",
            ],
        );
        for s in &self.cfg.specs {
            let v = classify(&s.spec, probe_len(s), ConvergenceHeuristic::default());
            let eps = check_epsilon_condition(&s.spec, probe_len(s).min(40));
            let (wc, wd, wn) = match v.zero_by_window {
                Some(w) => (
                    match w.c {
                        WindowSequence::Constant(c) => t.num("window_c", c)?,
                        WindowSequence::Harmonic => "1/n".into(),
                    },
                    t.num("window_delta", w.delta)?,
                    w.n0.to_string(),
                ),
                None => (String::new(), String::new(), String::new()),
            };
            let kind = crate::config::kind_label(&s.spec.kind);
            t.push(vec![
                s.id.clone(),
                kind,
                s.spec.branching.to_string(),
                t.num("epsilon", s.spec.epsilon)?,
                verdict_name(v.verdict).into(),
                v.positive_by_sum_a.to_string(),
                v.positive_by_sum_inv_a.to_string(),
                wc,
                wd,
                wn,
                t.opt("log_growth_c", v.zero_by_log_growth.map(|w| w.c))?,
                v.weak_gap_x.is_some().to_string(),
                t.num("largest_valid_epsilon", eps.largest_valid_epsilon)?,
            ]);
        }
        self.emit("classify.csv", &t)
    }

    fn tree_dump(&mut self) -> Result<(), LabError> {
        let mut t = Table::new(
            "tree",
            &[
                "spec_id", "k", "level", "index", "address", "left", "right", "f_left", "f_right",
            ],
        );
        for s in self.cfg.specs.clone() {
            let depth = self.cfg.depth;
            let key = self.tree(&s, depth)?;
            let cf = &self.trees[&key];
            for n in 0..=depth {
                if cf.count(n) > TREE_DUMP_MAX_INTERVALS {
                    break;
                }
                for node in cf.level_nodes(n).stage("tree")?.iter() {
                    let addr: String = node
                        .address()
                        .iter()
                        .map(|d| char::from(b'0' + d))
                        .collect();
                    t.push(vec![
                        s.id.clone(),
                        node.branching.to_string(),
                        n.to_string(),
                        node.index.to_string(),
                        addr,
                        t.num("left", node.left)?,
                        t.num("right", node.right)?,
                        t.num("f_left", node.f_left())?,
                        t.num("f_right", node.f_right())?,
                    ]);
                }
            }
        }
        self.emit("tree.csv", &t)
    }

    fn moments(&mut self) -> Result<(), LabError> {
        let mut t = Table::new("moments", MOMENTS_HEADER);
        let cfg = self.cfg.clone();
        for s in &cfg.specs {
            let key = self.tree(s, cfg.depth)?;
            let cf = &self.trees[&key];
            for &n in &cfg.levels {
                if cfg.oracle && cf.count(n) > ORACLE_CAP {
                    return Err(LabError::Events {
                        stage: "moments",
                        source: cantor_zeros::EventsError::OracleCapExceeded {
                            level: n,
                            intervals: cf.count(n),
                            cap: ORACLE_CAP,
                        },
                    });
                }
                let mc = MomentConfig {
                    level: n,
                    replicates: cfg.replicates,
                    seed: cfg.seed,
                    y_mode: cfg.y_mode,
                    oracle: cfg.oracle,
                };
                let r = simulate_moments(cf, &mc, &self.fanout).stage("moments")?;
                let pz = r.pz_lower_bound.unwrap_or(r.pz_monte_carlo.value);
                t.push(vec![
                    s.id.clone(),
                    r.branching.to_string(),
                    n.to_string(),
                    t.num("mean_Z", r.mean_z.value)?,
                    t.num("se", r.mean_z.se)?,
                    t.opt("mean_Z_exact", r.mean_z_exact)?,
                    t.num("m2_Z", r.second_moment_z.value)?,
                    t.opt("m2_Z_exact", r.second_moment_z_exact)?,
                    t.num("pz_bound", pz)?,
                    t.num("p_Z_pos", r.prob_z_positive.value)?,
                    t.num("se", r.prob_z_positive.se)?,
                    t.num("mean_Y", r.mean_y.value)?,
                    t.num("se", r.mean_y.se)?,
                    t.num("p_Y_pos", r.prob_y_positive.value)?,
                    t.num("se", r.prob_y_positive.se)?,
                    r.replicates.to_string(),
                    r.seed.to_string(),
                ]);
            }
        }
        self.emit("moments.csv", &t)
    }

    fn census(&mut self) -> Result<(), LabError> {
        let mut t = Table::new(
            "census",
            &[
                "spec_id",
                "n",
                "rule",
                "d_n",
                "balanced",
                "unbalanced",
                "unbalanced_fraction",
                "chebyshev_bound",
                "theta",
            ],
        );
        for s in &self.cfg.specs {
            if s.spec.branching != 2 {
                continue;
            }
            for &n in &self.cfg.census_levels {
                for (rule, name) in [
                    (BalanceRule::ZeroFractionThird, "ZeroFractionThird"),
                    (BalanceRule::WeightedSum, "WeightedSum"),
                ] {
                    let c = census(&s.spec, n, rule).stage("census")?;
                    t.push(vec![
                        s.id.clone(),
                        n.to_string(),
                        name.into(),
                        t.opt("d_n", c.d_n)?,
                        c.balanced_count.to_string(),
                        c.unbalanced_count.to_string(),
                        t.num("unbalanced_fraction", c.unbalanced_fraction())?,
                        t.num("chebyshev_bound", c.chebyshev_bound)?,
                        t.num("theta", c.theta)?,
                    ]);
                }
            }
        }
        self.emit("census.csv", &t)
    }

    fn lil(&mut self) -> Result<(), LabError> {
        let mut t = Table::new(
            "lil",
            &[
                "spec_id",
                "t",
                "level",
                "scale",
                "increment",
                "ratio",
                "class",
            ],
        );
        let cfg = self.cfg.clone();
        for s in &cfg.specs {
            let key = self.tree(s, cfg.lil_depth)?;
            let cf = &self.trees[&key];
            for &anchor in &cfg.lil_anchors {
                let p = lil_profile(cf, anchor, cfg.lil_depth).stage("lil")?;
                for i in 0..p.ratios.len() {
                    t.push(vec![
                        s.id.clone(),
                        t.num("t", anchor)?,
                        p.levels[i].to_string(),
                        t.num("scale", p.scales[i])?,
                        t.num("increment", p.increments[i])?,
                        t.num("ratio", p.ratios[i])?,
                        lil_name(p.class).into(),
                    ]);
                }
            }
        }
        self.emit("lil.csv", &t)
    }

    fn cuts(&mut self) -> Result<(), LabError> {
        let mut t = Table::new(
            "cuts",
            &[
                "spec_id", "j_lo", "j_hi", "j_len", "level", "estimate", "se", "ratio",
            ],
        );
        let mut summary = Table::new(
            "cuts",
            &[
                "spec_id",
                "proxy_level",
                "slope",
                "alpha_mc",
                "alpha_se",
                "alpha_exact",
            ],
        );
        let cfg = self.cfg.clone();
        for s in &cfg.specs {
            let key = self.tree(s, cfg.depth)?;
            let cf = &self.trees[&key];
            let windows = halving_windows(s.spec.branching, cfg.cut_windows);
            let sw = cut_probability_sweep(
                cf,
                &windows,
                cfg.cut_level,
                cfg.replicates,
                cfg.seed,
                &self.fanout,
            )
            .stage("cuts")?;
            for c in &sw.cuts {
                t.push(vec![
                    s.id.clone(),
                    t.num("j_lo", c.j_lo)?,
                    t.num("j_hi", c.j_hi)?,
                    t.num("j_len", c.j_hi - c.j_lo)?,
                    c.level.to_string(),
                    t.num("estimate", c.estimate.value)?,
                    t.num("se", c.estimate.se)?,
                    t.num("ratio", c.ratio)?,
                ]);
            }
            summary.push(vec![
                s.id.clone(),
                sw.proxy_level.to_string(),
                t.opt("slope", sw.slope.is_finite().then_some(sw.slope))?,
                t.num("alpha_mc", sw.alpha_mc.value)?,
                t.num("alpha_se", sw.alpha_mc.se)?,
                t.num("alpha_exact", sw.alpha_exact)?,
            ]);
        }
        self.emit("cuts.csv", &t)?;
        self.emit("cuts_summary.csv", &summary)
    }

    /// `(p̂, ĉ_1)` from config, else from earlier `moments.csv` / `cuts.csv`.
    fn zone_inputs(&self, id: &str) -> Option<(f64, f64)> {
        let from_files = || -> Result<(f64, f64), LabError> {
            let m = Loaded::read(&self.out.join("moments.csv"))?;
            let (sc, nc, pc) = (m.col("spec_id")?, m.col("n")?, m.col("p_Z_pos")?);
            let mut best: Option<(f64, f64)> = None;
            for i in 0..m.rows.len() {
                if m.rows[i][sc] == id {
                    let n = m.f64_at(i, nc)?;
                    if best.is_none_or(|b| n > b.0) {
                        best = Some((n, m.f64_at(i, pc)?));
                    }
                }
            }
            let c = Loaded::read(&self.out.join("cuts.csv"))?;
            let (sc, rc) = (c.col("spec_id")?, c.col("ratio")?);
            let mut c1 = 0.0f64;
            for i in 0..c.rows.len() {
                if c.rows[i][sc] == id {
                    c1 = c1.max(c.f64_at(i, rc)?);
                }
            }
            match best {
                Some((_, p)) if p > 0.0 && c1 > 0.0 => Ok((p, c1)),
                _ => Err(LabError::Report("no estimates".into())),
            }
        };
        match (self.cfg.zone_p_hat, self.cfg.zone_c1_hat) {
            (Some(p), Some(c)) => Some((p, c)),
            _ => from_files().ok(),
        }
    }

    fn bounds(&mut self) -> Result<(), LabError> {
        let mut t = Table::new(
            "bounds",
            &["spec_id", "table", "n", "ell", "x", "name", "value"],
        );
        let row = |t: &Table,
                   id: &str,
                   table: &str,
                   n: Option<usize>,
                   ell: Option<usize>,
                   x: Option<f64>,
                   name: &str,
                   v: f64|
         -> Result<Vec<String>, LabError> {
            Ok(vec![
                id.into(),
                table.into(),
                n.map_or(String::new(), |n| n.to_string()),
                ell.map_or(String::new(), |l| l.to_string()),
                t.opt("x", x)?,
                name.into(),
                t.num(name, v)?,
            ])
        };
        for i in 0..50 {
            let z = 10f64.powf(-2.0 + 3.0 * i as f64 / 49.0);
            let sv = s_function(z, 16);
            let r = row(&t, "", "s_function", None, None, Some(z), "S", sv.value)?;
            t.push(r);
            let r = row(
                &t,
                "",
                "s_function",
                None,
                None,
                Some(z),
                "S_bound",
                s_bound(z),
            )?;
            t.push(r);
        }
        let cfg = self.cfg.clone();
        for s in &cfg.specs {
            let id = s.id.as_str();
            let key = self.tree(s, cfg.depth)?;
            let cf = self.trees[&key].clone();
            if s.spec.branching == 2 {
                let eps = s.spec.epsilon;
                let r = row(
                    &t,
                    id,
                    "constants",
                    None,
                    None,
                    None,
                    "c2",
                    c2_constant(eps),
                )?;
                t.push(r);
                for n in 1..=cfg.bounds_level {
                    for ell in 0..n {
                        let c = conditional_sum_bound(&cf, n, ell).stage("bounds")?;
                        let e = easy_conditional_bounds(&cf, n, ell);
                        for (name, v) in [
                            ("lhs", c.lhs),
                            ("rhs", c.rhs),
                            ("rhs_simplified", c.rhs_simplified),
                            ("easy_lo", e.lo),
                            ("easy_hi", e.hi),
                        ] {
                            let r = row(
                                &t,
                                id,
                                "conditional_sum",
                                Some(n),
                                Some(ell),
                                Some(c.z),
                                name,
                                v,
                            )?;
                            t.push(r);
                        }
                    }
                    let r = row(
                        &t,
                        id,
                        "rollup",
                        Some(n),
                        None,
                        None,
                        "second_moment_rollup",
                        second_moment_rollup(&cf, n),
                    )?;
                    t.push(r);
                }
                let mut on = cfg.bounds_level;
                while on > 0 && cf.count(on) > ORACLE_CAP {
                    on -= 1;
                }
                if on >= 2 {
                    let o = exact_z_oracle(&cf, on).stage("bounds")?;
                    let fit = fit_conditional_constants(&cf, &o).stage("bounds")?;
                    for (name, v) in [("c3", fit.c3), ("c4", fit.c4)] {
                        let r = row(&t, id, "fitted_conditionals", Some(on), None, None, name, v)?;
                        t.push(r);
                    }
                }
                for &n in &cfg.census_levels {
                    let zeros = vec![0u8; n];
                    let b = balanced_first_moment_lower(&s.spec, n, &zeros).stage("bounds")?;
                    let mut vals = vec![
                        ("C_n", balanced_uniform_bound(&s.spec, n).stage("bounds")?),
                        ("all_zero_total", b.total),
                        ("all_zero_total_variant", b.total_variant),
                        ("all_zero_integral", b.integral_form),
                    ];
                    if let Some(d) = b.discrete_form {
                        vals.push(("all_zero_discrete", d));
                    }
                    for (name, v) in vals {
                        let r = row(&t, id, "balanced", Some(n), None, None, name, v)?;
                        t.push(r);
                    }
                }
            }
            if cfg.depth >= 8 {
                let h = holder_diagnostics(&cf, cfg.depth).stage("bounds")?;
                if let Some(p) = h.paper_sigma {
                    let r = row(
                        &t,
                        id,
                        "holder",
                        Some(h.depth),
                        None,
                        None,
                        "paper_sigma",
                        p,
                    )?;
                    t.push(r);
                }
                for (name, v) in [
                    ("empirical_sigma", h.empirical_sigma),
                    ("scale_sigma", h.scale_sigma),
                ] {
                    let r = row(&t, id, "holder", Some(h.depth), None, None, name, v)?;
                    t.push(r);
                }
            }
            if let Some((p, c1)) = self.zone_inputs(id) {
                match isolated_zone_construction(&cf, p.min(1.0), c1) {
                    Ok(z) => {
                        for (name, v) in [
                            ("p_hat", p),
                            ("c1_hat", c1),
                            ("n0", z.n0 as f64),
                            ("n0_if_c1_doubled", z.n0_if_c1_doubled as f64),
                            ("n0_if_c1_halved", z.n0_if_c1_halved as f64),
                            ("threshold", z.threshold),
                            ("tail_sum", z.tail_sum),
                            ("measure", z.measure),
                            ("measure_bound", z.measure_bound),
                            ("surviving_probability", z.surviving_probability),
                        ] {
                            let r = row(&t, id, "isolated_zone", None, None, None, name, v)?;
                            t.push(r);
                        }
                    }
                    Err(AnalysisError::RegimeMismatch) | Err(AnalysisError::InvalidArgument(_)) => {
                    }
                    Err(e) => {
                        return Err(LabError::Analysis {
                            stage: "bounds",
                            source: e,
                        })
                    }
                }
            }
        }
        self.emit("bounds.csv", &t)
    }

    fn paths(&mut self) -> Result<(), LabError> {
        let mut t = Table::new("paths", &["spec_id", "replicate", "t", "value", "f"]);
        let cfg = self.cfg.clone();
        let n = *cfg.levels.iter().max().expect("levels validated non-empty");
        for s in &cfg.specs {
            let key = self.tree(s, cfg.depth)?;
            let cf = &self.trees[&key];
            let lg = LevelGrid::new(cf, n).stage("paths")?;
            let mut vals = vec![0.0; lg.points()];
            lg.sample(level_seed(cfg.seed, n, 0), &mut vals);
            for (time, v) in lg.grid.times().iter().zip(&vals) {
                let f = cf.evaluate_fbn(n, *time).stage("paths")?;
                t.push(vec![
                    s.id.clone(),
                    "0".into(),
                    t.num("t", *time)?,
                    t.num("value", *v)?,
                    t.num("f", f)?,
                ]);
            }
        }
        self.emit("paths.csv", &t)
    }

    /// Aggregates whatever stage outputs exist in the run directory.
    fn report(&mut self) -> Result<(), LabError> {
        let t = summarize(&self.out)?;
        self.emit("summary.csv", &t)
    }
}

/// One summary row per (spec, source, metric) from the CSVs in `dir`.
pub fn summarize(dir: &Path) -> Result<Table, LabError> {
    let mut t = Table::new("report", &["spec_id", "source", "metric", "value"]);
    let mut push = |id: &str, src: &str, metric: String, v: String| {
        t.rows.push(vec![id.into(), src.into(), metric, v]);
    };
    let file = |f: &str| dir.join(f);
    if file("classify.csv").exists() {
        let c = Loaded::read(&file("classify.csv"))?;
        let (s, v) = (c.col("spec_id")?, c.col("verdict")?);
        for r in &c.rows {
            push(&r[s], "classify", "verdict".into(), r[v].clone());
        }
    }
    if file("moments.csv").exists() {
        let m = Loaded::read(&file("moments.csv"))?;
        let (s, n) = (m.col("spec_id")?, m.col("n")?);
        for name in ["mean_Z", "p_Z_pos", "pz_bound", "p_Y_pos"] {
            let c = m.col(name)?;
            for r in &m.rows {
                push(&r[s], "moments", format!("{name}@{}", r[n]), r[c].clone());
            }
        }
    }
    if file("census.csv").exists() {
        let c = Loaded::read(&file("census.csv"))?;
        let (s, n, rule, f) = (
            c.col("spec_id")?,
            c.col("n")?,
            c.col("rule")?,
            c.col("unbalanced_fraction")?,
        );
        for r in &c.rows {
            push(
                &r[s],
                "census",
                format!("unbalanced_fraction@{}:{}", r[n], r[rule]),
                r[f].clone(),
            );
        }
    }
    if file("lil.csv").exists() {
        let l = Loaded::read(&file("lil.csv"))?;
        let (s, tc, cl) = (l.col("spec_id")?, l.col("t")?, l.col("class")?);
        let mut seen = std::collections::BTreeSet::new();
        for r in &l.rows {
            if seen.insert((r[s].clone(), r[tc].clone())) {
                push(&r[s], "lil", format!("class@{}", r[tc]), r[cl].clone());
            }
        }
    }
    if file("cuts_summary.csv").exists() {
        let c = Loaded::read(&file("cuts_summary.csv"))?;
        let s = c.col("spec_id")?;
        for name in ["slope", "alpha_mc"] {
            let k = c.col(name)?;
            for r in &c.rows {
                push(&r[s], "cuts", name.into(), r[k].clone());
            }
        }
    }
    if file("bounds.csv").exists() {
        let b = Loaded::read(&file("bounds.csv"))?;
        let (s, tb, nm, v) = (
            b.col("spec_id")?,
            b.col("table")?,
            b.col("name")?,
            b.col("value")?,
        );
        for r in &b.rows {
            if r[tb] == "holder" || r[tb] == "isolated_zone" || r[tb] == "fitted_conditionals" {
                push(
                    &r[s],
                    "bounds",
                    format!("{}:{}", r[tb], r[nm]),
                    r[v].clone(),
                );
            }
        }
    }
    if file("tree.csv").exists() {
        let tr = Loaded::read(&file("tree.csv"))?;
        let (s, lv, l, r) = (
            tr.col("spec_id")?,
            tr.col("level")?,
            tr.col("left")?,
            tr.col("right")?,
        );
        let mut total = std::collections::BTreeMap::<(String, u32), f64>::new();
        for (i, row) in tr.rows.iter().enumerate() {
            let level: u32 = row[lv]
                .parse()
                .map_err(|_| LabError::Report(format!("bad level `{}`", row[lv])))?;
            *total.entry((row[s].clone(), level)).or_default() +=
                tr.f64_at(i, r)? - tr.f64_at(i, l)?;
        }
        for ((id, level), len) in total {
            push(
                &id,
                "tree",
                format!("total_length@{level}"),
                len.to_string(),
            );
        }
    }
    if file("paths.csv").exists() {
        let p = Loaded::read(&file("paths.csv"))?;
        let s = p.col("spec_id")?;
        let mut counts = std::collections::BTreeMap::<String, usize>::new();
        for r in &p.rows {
            *counts.entry(r[s].clone()).or_default() += 1;
        }
        for (id, c) in counts {
            push(&id, "paths", "points".into(), c.to_string());
        }
    }
    if t.rows.is_empty() {
        return Err(LabError::Report(format!(
            "no stage outputs in {}",
            dir.display()
        )));
    }
    Ok(t)
}
