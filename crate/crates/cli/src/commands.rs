use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use serde_json::json;
use uqsd_core::decomposition::{
    decomposition_states, degenerate_decomposition, Decomposition, DecompositionParameter,
};
use uqsd_core::discrimination::metrics;
use uqsd_core::optics::{
    detection_distribution, monte_carlo, optimal_x, ps_max, success_probability_x,
    DetectorDistribution, Prepared, SetupConfig,
};
use uqsd_core::qcore::{
    eigendecompose, partial_trace_idler, prepare_spdc, Basis, RankTwoMixedState,
};
use uqsd_core::sweep::{self, SweepSpec};
use uqsd_core::tol::clamp_probability;
use uqsd_core::{Complex64, Execution};

use crate::error::CliResult;
use crate::output::{fmt_g, svg_cells, svg_lines, write_file, Series, Table};
use crate::record::RunRecord;

fn fmt_c(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_g(z.re), fmt_g(z.im.abs()))
}

fn prob(v: f64) -> CliResult<f64> {
    Ok(clamp_probability(v)?)
}

fn finish(record: &mut RunRecord, out: Option<&Path>) -> CliResult<()> {
    if let Some(p) = out {
        record.output("csv", p.display().to_string());
    }
    record.append(out)?;
    Ok(())
}

pub fn decompose(lambda1: f64, gamma_sq: f64, theta: f64, out: Option<&Path>) -> CliResult<()> {
    let state = RankTwoMixedState::canonical(lambda1, Basis::Eigen)?;
    let gamma = DecompositionParameter::from_modulus_sq(gamma_sq, theta)?;
    let degenerate = state.is_degenerate();
    let d: Decomposition = if degenerate {
        degenerate_decomposition(gamma)
    } else {
        decomposition_states(&state, gamma)?
    };
    let beta_mod = d.overlap().norm().min(1.0);
    let m = metrics(d.p1(), d.p2(), beta_mod)?;

    println!(
        "lambda1 = {}, lambda2 = {}",
        fmt_g(state.lambda1()),
        fmt_g(state.lambda2())
    );
    println!(
        "|gamma|^2 = {}, theta = {}",
        fmt_g(gamma.modulus_sq()),
        fmt_g(gamma.phase())
    );
    if degenerate {
        println!("note: lambda1 = lambda2 = 1/2; every decomposition is an orthogonal pair with p1 = p2 = 1/2");
    }
    if gamma_sq == 0.0 || gamma_sq == 1.0 {
        println!("note: spectral decomposition");
    }
    println!("p1 = {}", fmt_g(d.p1()));
    println!("p2 = {}", fmt_g(d.p2()));
    for (name, b) in [("beta1", d.beta1()), ("beta2", d.beta2())] {
        println!(
            "{name} = ({})|lambda1> + ({})|lambda2>",
            fmt_c(b.amp0()),
            fmt_c(b.amp1())
        );
    }
    println!("<beta1|beta2> = {}", fmt_c(d.overlap()));
    println!("|<beta1|beta2>| = {}", fmt_g(beta_mod));
    println!("regime = {}", m.regime);
    println!("p_s = {}", fmt_g(m.p_success));
    println!("p_e = {}", fmt_g(m.p_error_min));

    let values: Vec<(&str, String)> = vec![
        ("lambda1", fmt_g(state.lambda1())),
        ("gamma_sq", fmt_g(gamma.modulus_sq())),
        ("theta", fmt_g(gamma.phase())),
        ("p1", fmt_g(d.p1())),
        ("p2", fmt_g(d.p2())),
        ("beta1_lambda1_re", fmt_g(d.beta1().amp0().re)),
        ("beta1_lambda1_im", fmt_g(d.beta1().amp0().im)),
        ("beta1_lambda2_re", fmt_g(d.beta1().amp1().re)),
        ("beta1_lambda2_im", fmt_g(d.beta1().amp1().im)),
        ("beta2_lambda1_re", fmt_g(d.beta2().amp0().re)),
        ("beta2_lambda1_im", fmt_g(d.beta2().amp0().im)),
        ("beta2_lambda2_re", fmt_g(d.beta2().amp1().re)),
        ("beta2_lambda2_im", fmt_g(d.beta2().amp1().im)),
        ("overlap_re", fmt_g(d.overlap().re)),
        ("overlap_im", fmt_g(d.overlap().im)),
        ("overlap_mod", fmt_g(beta_mod)),
        ("regime", m.regime.to_string()),
        ("p_s", fmt_g(m.p_success)),
        ("p_e", fmt_g(m.p_error_min)),
    ];
    if let Some(p) = out {
        let mut t = Table::new(&["quantity", "value"]);
        for (k, v) in &values {
            t.push(vec![k.to_string(), v.clone()]);
        }
        t.emit(Some(p))?;
    }

    let mut rec = RunRecord::new("decompose");
    rec.param("lambda1", lambda1)
        .param("gamma_sq", gamma_sq)
        .param("theta", theta);
    rec.output("degenerate", degenerate)
        .output("p1", d.p1())
        .output("p2", d.p2())
        .output("overlap", json!([d.overlap().re, d.overlap().im]))
        .output("regime", m.regime.as_str())
        .output("p_s", m.p_success)
        .output("p_e", m.p_error_min);
    finish(&mut rec, out)
}

pub fn sweep_gamma(
    lambda1: f64,
    steps: usize,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> CliResult<()> {
    let spec = SweepSpec::gamma_sq(steps)?;
    let rows = sweep::sweep_gamma(lambda1, &spec, Execution::default())?;
    let mut t = Table::new(&["gamma_sq", "p1", "beta_mod", "p_s", "p_e"]);
    for r in &rows {
        t.push(vec![
            fmt_g(r.gamma_sq),
            fmt_g(prob(r.p1)?),
            fmt_g(r.beta_mod),
            fmt_g(prob(r.p_s)?),
            fmt_g(prob(r.p_e)?),
        ]);
    }
    t.emit(out)?;
    let max_beta = rows
        .iter()
        .fold(rows[0], |b, r| if r.beta_mod > b.beta_mod { *r } else { b });
    let min_ps = rows
        .iter()
        .fold(rows[0], |b, r| if r.p_s < b.p_s { *r } else { b });
    if out.is_some() {
        println!("rows = {}", rows.len());
        println!(
            "max |beta| = {} at gamma_sq = {}",
            fmt_g(max_beta.beta_mod),
            fmt_g(max_beta.gamma_sq)
        );
        println!(
            "min p_s = {} at gamma_sq = {}",
            fmt_g(min_ps.p_s),
            fmt_g(min_ps.gamma_sq)
        );
    }
    if let Some(path) = svg {
        let series = |label, f: fn(&sweep::GammaSweepRow) -> f64| Series {
            label,
            points: rows.iter().map(|r| (r.gamma_sq, f(r))).collect(),
        };
        let plot = svg_lines(
            &format!("lambda1 = {}", fmt_g(lambda1)),
            "|gamma|^2",
            (0.0, 1.0),
            &[
                series("p1", |r| r.p1),
                series("|beta|", |r| r.beta_mod),
                series("p_s", |r| r.p_s),
                series("p_e", |r| r.p_e),
            ],
        );
        write_file(path, plot.as_bytes())?;
    }
    let mut rec = RunRecord::new("sweep-gamma");
    rec.param("lambda1", lambda1).param("steps", steps);
    rec.output("rows", rows.len())
        .output("max_beta_mod", max_beta.beta_mod)
        .output("argmax_beta_mod", max_beta.gamma_sq)
        .output("min_p_s", min_ps.p_s)
        .output("argmin_p_s", min_ps.gamma_sq);
    finish(&mut rec, out)
}

pub fn region_map(resolution: usize, out: Option<&Path>, svg: Option<&Path>) -> CliResult<()> {
    let cells = sweep::region_map(resolution, Execution::default())?;
    let mut t = Table::new(&["gamma_sq", "lambda1", "regime", "p_s"]);
    let mut counts = [0usize; 3];
    for c in &cells {
        counts[c.regime as usize] += 1;
        t.push(vec![
            fmt_g(c.gamma_sq),
            fmt_g(c.lambda1),
            c.regime.to_string(),
            fmt_g(prob(c.p_s)?),
        ]);
    }
    t.emit(out)?;
    if out.is_some() {
        println!("cells = {}", cells.len());
        println!(
            "BothConclusive = {}, OnlyState1 = {}, OnlyState2 = {}",
            counts[0], counts[1], counts[2]
        );
    }
    if let Some(path) = svg {
        let grid: Vec<(f64, f64, usize)> = cells
            .iter()
            .map(|c| (c.gamma_sq, c.lambda1, c.regime as usize))
            .collect();
        let plot = svg_cells(
            "regime over (|gamma|^2, lambda1)",
            &grid,
            1.0 / resolution as f64,
            &["BothConclusive", "OnlyState1", "OnlyState2"],
        );
        write_file(path, plot.as_bytes())?;
    }
    let mut rec = RunRecord::new("region-map");
    rec.param("steps", resolution);
    rec.output("cells", cells.len())
        .output("both_conclusive", counts[0])
        .output("only_state1", counts[1])
        .output("only_state2", counts[2]);
    finish(&mut rec, out)
}

pub struct OpticsInput {
    pub alpha: f64,
    pub p1: f64,
    pub varphi: f64,
    pub x: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

pub fn optics(input: &OpticsInput) -> CliResult<()> {
    let &OpticsInput {
        alpha,
        p1,
        varphi,
        x,
        trials,
        seed,
        ..
    } = input;
    let out = input.out.as_deref();
    let p2 = 1.0 - p1;
    let (cfg, p_s) = match x {
        None => (
            SetupConfig::optimal(alpha, p1, varphi)?,
            ps_max(alpha, p1, p2, varphi)?,
        ),
        Some(x) => (
            SetupConfig::with_x(alpha, x, varphi)?,
            success_probability_x(alpha, x, varphi, p1, p2)?,
        ),
    };
    let d1 = clamp_dist(detection_distribution(&cfg, Prepared::State1))?;
    let d2 = clamp_dist(detection_distribution(&cfg, Prepared::State2))?;
    let weighted = [0, 1, 2, 3].map(|k| p1 * d1.as_array()[k] + p2 * d2.as_array()[k]);
    let p_conclusive = weighted[0] + weighted[1];
    let p_error = p1 * d1.p_pd2 + p2 * d2.p_pd1;

    println!(
        "alpha = {}, p1 = {}, varphi = {}",
        fmt_g(alpha),
        fmt_g(p1),
        fmt_g(varphi)
    );
    println!(
        "x = {}{}",
        fmt_g(cfg.x),
        if x.is_none() { " (optimal)" } else { "" }
    );
    println!("phi = {}", fmt_g(cfg.phi));
    println!("xi = {}", fmt_g(cfg.xi));
    println!("p_s = {}", fmt_g(p_s));
    println!(
        "{:<9} {:<19} {:<19} {:<19} leak",
        "detector", "PD(1)", "PD(2)", "PD(?)"
    );
    for (name, d) in [
        ("state1", &d1.as_array()),
        ("state2", &d2.as_array()),
        ("weighted", &weighted),
    ] {
        println!(
            "{name:<9} {:<19} {:<19} {:<19} {}",
            fmt_g(d[0]),
            fmt_g(d[1]),
            fmt_g(d[2]),
            fmt_g(d[3])
        );
    }
    println!(
        "conclusive = {}, error = {}",
        fmt_g(p_conclusive),
        fmt_g(p_error)
    );

    let mut t = Table::new(&["source", "p_pd1", "p_pd2", "p_inconclusive", "p_leak"]);
    for (name, d) in [
        ("state1", d1.as_array()),
        ("state2", d2.as_array()),
        ("weighted", weighted),
    ] {
        t.push(
            std::iter::once(name.to_string())
                .chain(d.iter().map(|&v| fmt_g(v)))
                .collect(),
        );
    }

    let mut rec = RunRecord::new("optics");
    rec.param("alpha", alpha)
        .param("p1", p1)
        .param("varphi", varphi)
        .param("trials", trials);
    if let Some(x) = x {
        rec.param("x", x);
    }
    rec.output("x", cfg.x)
        .output("phi", cfg.phi)
        .output("xi", cfg.xi)
        .output("p_s", p_s)
        .output("state1", json!(d1.as_array()))
        .output("state2", json!(d2.as_array()))
        .output("p_error", p_error);

    if trials > 0 {
        rec.seed = Some(seed);
        let r = monte_carlo(&cfg, p1, trials, seed)?;
        let n = r.n_trials as f64;
        let freq = r.n_conclusive() as f64 / n;
        let sigma = (p_conclusive * (1.0 - p_conclusive) / n).sqrt();
        let z = if sigma > 0.0 {
            (freq - p_conclusive) / sigma
        } else {
            0.0
        };
        println!("monte carlo: trials = {}, seed = {}", r.n_trials, seed);
        println!(
            "  PD(1) = {}, PD(2) = {}, PD(?) = {}, leak = {}, errors = {}",
            r.n_pd1, r.n_pd2, r.n_inconclusive, r.n_leak, r.n_errors
        );
        println!(
            "  conclusive frequency = {} (expected {}, sigma {}, z = {})",
            fmt_g(freq),
            fmt_g(p_conclusive),
            fmt_g(sigma),
            fmt_g(z)
        );
        t.push(
            std::iter::once("monte_carlo".to_string())
                .chain(
                    [r.n_pd1, r.n_pd2, r.n_inconclusive, r.n_leak]
                        .iter()
                        .map(|&c| fmt_g(c as f64 / n)),
                )
                .collect(),
        );
        rec.output(
            "monte_carlo",
            json!({
                "n_trials": r.n_trials,
                "n_pd1": r.n_pd1,
                "n_pd2": r.n_pd2,
                "n_inconclusive": r.n_inconclusive,
                "n_leak": r.n_leak,
                "n_errors": r.n_errors,
                "conclusive_frequency": freq,
                "sigma": sigma,
            }),
        );
    }
    if let Some(p) = out {
        t.emit(Some(p))?;
    }
    finish(&mut rec, out)
}

fn clamp_dist(d: DetectorDistribution) -> CliResult<DetectorDistribution> {
    Ok(DetectorDistribution {
        p_pd1: prob(d.p_pd1)?,
        p_pd2: prob(d.p_pd2)?,
        p_inconclusive: prob(d.p_inconclusive)?,
        p_leak: prob(d.p_leak)?,
    })
}

pub fn sweep_x(
    alpha: f64,
    p1: f64,
    varphi: f64,
    steps: usize,
    out: Option<&Path>,
    svg: Option<&Path>,
) -> CliResult<()> {
    let spec = SweepSpec::x(alpha, steps)?;
    let rows = sweep::sweep_x(alpha, p1, varphi, &spec, Execution::default())?;
    let opt = |v: Option<f64>| v.map(fmt_g).unwrap_or_default();
    let mut t = Table::new(&["x", "p_s", "q_s1", "q_s2", "feasible"]);
    for r in &rows {
        t.push(vec![
            fmt_g(r.x),
            opt(r.p_s),
            opt(r.q_s1),
            opt(r.q_s2),
            u8::from(r.feasible()).to_string(),
        ]);
    }
    t.emit(out)?;
    let best = rows.iter().filter_map(|r| r.p_s.map(|p| (r.x, p))).fold(
        None,
        |b: Option<(f64, f64)>, c| match b {
            Some(b) if b.1 >= c.1 => Some(b),
            _ => Some(c),
        },
    );
    let x_opt = if alpha <= FRAC_PI_2 {
        Some(optimal_x(alpha, p1, 1.0 - p1)?)
    } else {
        None
    };
    if out.is_some() {
        println!(
            "rows = {}, feasible = {}",
            rows.len(),
            rows.iter().filter(|r| r.feasible()).count()
        );
        if let Some((x, p)) = best {
            println!("grid argmax x = {} (p_s = {})", fmt_g(x), fmt_g(p));
        }
        if let Some(xo) = x_opt {
            println!("optimal x = {}", fmt_g(xo));
        }
    }
    if let Some(path) = svg {
        let plot = svg_lines(
            &format!("alpha = {}, p1 = {}", fmt_g(alpha), fmt_g(p1)),
            "x",
            (0.0, alpha),
            &[Series {
                label: "p_s(x)",
                points: rows
                    .iter()
                    .filter_map(|r| r.p_s.map(|p| (r.x, p)))
                    .collect(),
            }],
        );
        write_file(path, plot.as_bytes())?;
    }
    let mut rec = RunRecord::new("sweep-x");
    rec.param("alpha", alpha)
        .param("p1", p1)
        .param("varphi", varphi)
        .param("steps", steps);
    rec.output("rows", rows.len());
    if let Some((x, p)) = best {
        rec.output("argmax_x", x).output("max_p_s", p);
    }
    if let Some(xo) = x_opt {
        rec.output("optimal_x", xo);
    }
    finish(&mut rec, out)
}

pub fn spdc_prepare(lambda1: f64, out: Option<&Path>) -> CliResult<()> {
    let pair = prepare_spdc(lambda1)?;
    let rho = partial_trace_idler(&pair);
    let state = eigendecompose(&rho)?;
    let labels = ["hh", "hv", "vh", "vv"];
    let terms: Vec<String> = pair
        .amps()
        .iter()
        .zip(labels)
        .filter(|(a, _)| a.norm() > 0.0)
        .map(|(a, l)| format!("({})|{l}>", fmt_c(*a)))
        .collect();
    println!("pair = {}", terms.join(" + "));
    let e = rho.entries();
    println!("signal density matrix (h, v basis):");
    for row in e {
        println!("  [{}, {}]", fmt_c(row[0]), fmt_c(row[1]));
    }
    println!(
        "eigenvalues = {}, {}",
        fmt_g(state.lambda1()),
        fmt_g(state.lambda2())
    );
    if let Some(p) = out {
        let mut t = Table::new(&["row", "col", "re", "im"]);
        for (i, row) in e.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                t.push(vec![i.to_string(), j.to_string(), fmt_g(z.re), fmt_g(z.im)]);
            }
        }
        t.emit(Some(p))?;
    }
    let mut rec = RunRecord::new("spdc-prepare");
    rec.param("lambda1", lambda1);
    rec.output("diagonal", json!([e[0][0].re, e[1][1].re]))
        .output("eigenvalues", json!([state.lambda1(), state.lambda2()]));
    finish(&mut rec, out)
}
