//! Subcommand bodies. Each returns the rendered text and whether its checks passed.

use anyhow::{bail, ensure, Context, Result};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use realroots::asymptotics::{asymptotics as run_asymptotics, McColumn};
use realroots::geometry::{ellipsoid_in_polytope, ellipsoid_volume, Ellipsoid};
use realroots::lattice::{validate_support, BodySpec, SupportSet};
use realroots::mixedvol::{af_inequality_gap, bkk_count, expected_real_roots, expected_real_roots_deterministic};
use realroots::moments::{ball_constants, beta_n, moment_matrix};
use realroots::rational::format as format_rational;
use realroots::rootcount::{mc_expected_roots, RootKind};
use realroots::stats::worker_rng;
use realroots::McConfig;

use crate::Format;

/// Largest `|z|` accepted by `verify`.
pub const Z_LIMIT: f64 = 4.0;

/// Largest `n` accepted by `beta-table`.
pub const BETA_N_MAX: usize = 64;

pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn check_supports(supports: &[SupportSet], max_n: usize) -> Result<usize> {
    let n = supports.len();
    ensure!((1..=max_n).contains(&n), "expected 1 to {max_n} supports, got {n}");
    for (k, s) in supports.iter().enumerate() {
        ensure!(s.dim() == n, "support {} has dimension {}, but {n} supports need dimension {n}", k + 1, s.dim());
    }
    Ok(n)
}

fn ellipsoid_json(e: &Ellipsoid) -> Value {
    let m = e.shape();
    let shape: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
    json!({ "shape": shape, "volume": ellipsoid_volume(e) })
}

pub fn predict(supports: &[SupportSet], cfg: &McConfig, format: Format) -> Result<Output> {
    let n = check_supports(supports, 3)?;
    let expected_real = expected_real_roots_deterministic(supports)?;
    let sampled = expected_real_roots(supports, cfg)?;
    let bkk = bkk_count(supports)?;
    let fraction = (bkk > 0).then(|| expected_real / bkk as f64);
    let ellipsoids: Vec<Value> = supports.iter().map(|s| ellipsoid_json(&moment_matrix(s))).collect();
    let polytopes = supports
        .iter()
        .map(|s| {
            let p = s.newton_polytope()?;
            let vertices: Vec<Vec<String>> = p.vertices().iter().map(|v| v.iter().map(format_rational).collect()).collect();
            Ok(json!({
                "lattice_points": s.len(),
                "vertices": vertices,
                "intrinsic_dim": p.intrinsic_dim(),
                "volume": format_rational(&p.volume()),
            }))
        })
        .collect::<Result<Vec<Value>>>()?;
    let text = match format {
        Format::Json => to_json(&json!({
            "n": n,
            "expected_real": expected_real,
            "expected_real_sampled": sampled,
            "bkk": bkk,
            "fraction": fraction,
            "ellipsoids": ellipsoids,
            "polytopes": polytopes,
        }))?,
        Format::Csv => to_csv(
            &["n", "expected_real", "expected_real_sampled", "sampled_std_error", "bkk", "fraction"],
            &[vec![
                n.to_string(),
                expected_real.to_string(),
                sampled.value.to_string(),
                sampled.std_error.to_string(),
                bkk.to_string(),
                opt(fraction),
            ]],
        )?,
    };
    Ok(Output::ok(text))
}

pub fn verify(supports: &[SupportSet], cfg: &McConfig, kind: RootKind, grid: Option<usize>, format: Format) -> Result<Output> {
    let n = check_supports(supports, 2)?;
    let prediction = match kind {
        RootKind::Real => expected_real_roots_deterministic(supports)?,
        RootKind::Complex => bkk_count(supports)? as f64,
    };
    let run = mc_expected_roots(supports, cfg, kind, grid)?;
    let z = run.estimate.z_score(prediction);
    let passed = z.abs() <= Z_LIMIT;
    log::info!("prediction {prediction}, estimate {} ± {}, z = {z}", run.estimate.value, run.estimate.std_error);
    let text = match format {
        Format::Json => to_json(&json!({
            "n": n,
            "kind": kind,
            "prediction": prediction,
            "estimate": run.estimate,
            "z": z,
            "z_limit": Z_LIMIT,
            "diagnostics": run.diagnostics,
            "pass": passed,
        }))?,
        Format::Csv => to_csv(
            &["kind", "prediction", "estimate", "std_error", "samples", "z", "resamples", "newton_failures", "pass"],
            &[vec![
                format!("{kind:?}").to_lowercase(),
                prediction.to_string(),
                run.estimate.value.to_string(),
                run.estimate.std_error.to_string(),
                run.estimate.samples.to_string(),
                z.to_string(),
                run.diagnostics.resamples.to_string(),
                run.diagnostics.newton_failures.to_string(),
                passed.to_string(),
            ]],
        )?,
    };
    Ok(Output { text, passed })
}

const BALL_NOTE: &str = "limit is the moment-integral constant (1/(n+2))^(n/2); \
literal_limit is (beta_n/sigma_n)^(n/2); the two differ for n >= 2 and are reported side by side";

pub fn asymptotics(body: &BodySpec, m_list: &[i64], mc: Option<McConfig>, mc_max_m: i64, format: Format) -> Result<Output> {
    ensure!(!m_list.is_empty(), "empty --m-list");
    if let Some(m) = m_list.iter().find(|&&m| m < 1) {
        bail!("dilation factors must be positive, got {m}");
    }
    let column = mc.map(|config| McColumn { config, max_m: mc_max_m });
    let report = run_asymptotics(body, m_list, column)?;
    let is_ball = matches!(body, BodySpec::Ball { .. });
    let text = match format {
        Format::Json => {
            let mut value = serde_json::to_value(&report)?;
            if is_ball {
                value["note"] = json!(BALL_NOTE);
            }
            to_json(&value)?
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.m.to_string(),
                        r.lattice_points.to_string(),
                        opt(r.fraction),
                        r.limit.to_string(),
                        opt(r.literal_limit),
                        r.hausdorff.to_string(),
                        r.expected_real.to_string(),
                        r.bkk.to_string(),
                        opt(r.mc_fraction),
                        opt(r.mc_std_error),
                    ]
                })
                .collect();
            let mut text = to_csv(
                &[
                    "m",
                    "lattice_points",
                    "fraction",
                    "limit",
                    "literal_limit",
                    "hausdorff",
                    "expected_real",
                    "bkk",
                    "mc_fraction",
                    "mc_std_error",
                ],
                &rows,
            )?;
            if let Some(v) = &report.verdict {
                text.push_str(&format!("# verdict: {}\n", v.message));
            }
            if is_ball {
                text.push_str(&format!("# note: {BALL_NOTE}\n"));
            }
            text
        }
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct BetaRow {
    n: usize,
    beta_closed_form: f64,
    beta_quadrature: f64,
    sigma: f64,
    /// `(β_n/σ_n)^{n/2}`.
    literal_fraction: f64,
    /// `(σ_{n−1}β_n/σ_n)^{n/2}`.
    limit_fraction: f64,
}

pub fn beta_table(n_max: usize, format: Format) -> Result<Output> {
    ensure!((1..=BETA_N_MAX).contains(&n_max), "--n-max must lie in 1..={BETA_N_MAX}, got {n_max}");
    let rows = (1..=n_max)
        .map(|n| {
            let beta = beta_n(n)?;
            let c = ball_constants(n)?;
            Ok(BetaRow {
                n,
                beta_closed_form: beta.closed_form,
                beta_quadrature: beta.quadrature,
                sigma: c.sigma,
                literal_fraction: c.literal_fraction,
                limit_fraction: c.sliced_second_moment.powf(n as f64 / 2.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match format {
        Format::Json => to_json(&json!({ "rows": rows }))?,
        Format::Csv => to_csv(
            &["n", "beta_closed_form", "beta_quadrature", "sigma", "literal_fraction", "limit_fraction"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.beta_closed_form.to_string(),
                        r.beta_quadrature.to_string(),
                        r.sigma.to_string(),
                        r.literal_fraction.to_string(),
                        r.limit_fraction.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    Ok(Output::ok(text))
}

#[derive(Default, Serialize)]
struct Tally {
    checked: usize,
    failed: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) -> bool {
        self.checked += 1;
        self.failed += usize::from(!ok);
        ok
    }
}

#[derive(Default, Serialize)]
struct InequalityReport {
    cases: usize,
    /// `ell Λ ⊂ conv Λ` for full-dimensional supports.
    containment: Tally,
    /// `vol(ell Λ) <= vol(conv Λ)`.
    volume_bound: Tally,
    /// Expected real roots never exceed the BKK count.
    real_below_bkk: Tally,
    /// Both Alexandrov–Fenchel consequences, for `n >= 2`.
    alexandrov_fenchel: Tally,
    failures: Vec<Value>,
    pass: bool,
}

/// Random centrally symmetric support in `[-reach, reach]^dim` containing `±e_k`.
fn random_support(rng: &mut impl Rng, dim: usize, reach: i64) -> Result<SupportSet> {
    let extra = rng.random_range(0..=4);
    let mut points = Vec::new();
    for k in 0..dim {
        let mut e = vec![0; dim];
        e[k] = 1;
        points.push(e);
    }
    for _ in 0..extra {
        points.push((0..dim).map(|_| rng.random_range(-reach..=reach)).collect());
    }
    let mirrored: Vec<Vec<i64>> = points.iter().map(|p| p.iter().map(|x| -x).collect()).collect();
    points.extend(mirrored);
    Ok(validate_support(points)?)
}

fn supports_json(supports: &[SupportSet]) -> Value {
    json!(supports.iter().map(|s| s.points().iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn check_case(report: &mut InequalityReport, supports: &[SupportSet]) -> Result<()> {
    report.cases += 1;
    let mut failed = Vec::new();
    for s in supports {
        let p = s.newton_polytope()?;
        let e = moment_matrix(s);
        if p.is_full_dimensional() && !report.containment.record(ellipsoid_in_polytope(&e, &p)?) {
            failed.push("containment");
        }
        if !report.volume_bound.record(ellipsoid_volume(&e) <= p.volume_f64() * (1.0 + 1e-12) + 1e-12) {
            failed.push("volume_bound");
        }
    }
    let bkk = bkk_count(supports)?;
    let real = expected_real_roots_deterministic(supports)?;
    if !report.real_below_bkk.record(real <= bkk as f64 * (1.0 + 1e-9) + 1e-9) {
        failed.push("real_below_bkk");
    }
    if supports.len() >= 2 && !report.alexandrov_fenchel.record(af_inequality_gap(supports)?.holds()) {
        failed.push("alexandrov_fenchel");
    }
    if !failed.is_empty() {
        report.failures.push(json!({ "supports": supports_json(supports), "failed": failed }));
    }
    Ok(())
}

pub fn inequalities(given: Vec<SupportSet>, count: usize, dim: usize, reach: i64, seed: u64, format: Format) -> Result<Output> {
    let mut report = InequalityReport::default();
    if given.is_empty() {
        ensure!((1..=3).contains(&dim), "--dim must lie in 1..=3, got {dim}");
        ensure!(reach >= 1, "--max-frequency must be positive, got {reach}");
        let mut rng = worker_rng(seed, 0);
        for _ in 0..count {
            let tuple = (0..dim).map(|_| random_support(&mut rng, dim, reach)).collect::<Result<Vec<_>>>()?;
            check_case(&mut report, &tuple).context("checking a random support tuple")?;
        }
    } else {
        check_supports(&given, 3)?;
        check_case(&mut report, &given)?;
    }
    report.pass = report.failures.is_empty();
    let passed = report.pass;
    let text = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let tallies = [
                ("containment", &report.containment),
                ("volume_bound", &report.volume_bound),
                ("real_below_bkk", &report.real_below_bkk),
                ("alexandrov_fenchel", &report.alexandrov_fenchel),
            ];
            to_csv(
                &["check", "checked", "failed"],
                &tallies.iter().map(|(name, t)| vec![name.to_string(), t.checked.to_string(), t.failed.to_string()]).collect::<Vec<_>>(),
            )?
        }
    };
    Ok(Output { text, passed })
}
