//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use hcb_entropy::arith::binary_entropy;
use hcb_entropy::cli::{log_grid, ratio_grid, T_HIGH, T_LOW};
use hcb_entropy::finite::{
    finite_free_energy_density, verify_sum_rules, ThermalBlockModel, ThermalMode,
};
use hcb_entropy::oracle::{certify_theorem, spectrum_check, EIGENVALUE_TOLERANCE};
use hcb_entropy::thermo::{
    critical_temperature, entanglement_scaling, free_energy_density,
    ground_state_entropy_asymptotic, limit_block_entropy, limit_block_entropy_eta, mu_star,
    weight_profile,
};
use hcb_entropy::{Backend, Result, SystemShape};
use rayon::prelude::*;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

/// Brute-force partial traces match the analytic tables for L <= 10.
fn theorem_certification() -> Result<Outcome> {
    let shapes: Vec<(usize, usize, usize)> = (2..=10usize)
        .flat_map(|l| (0..=l).flat_map(move |np| (1..l).map(move |n| (l, np, n))))
        .collect();
    let cases = shapes
        .par_iter()
        .map(|&(l, np, n)| certify_theorem(l, np, n))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    let failed: Vec<_> = cases.iter().filter(|c| !c.pass).collect();
    let boundary = cases.iter().filter(|c| c.boundary).count();
    let worst = cases.iter().map(|c| c.max_abs_error).fold(0.0, f64::max);
    let mut detail = format!(
        "{} cases ({} at the boundary sector), max |error| {:.1e} <= {:.0e}",
        cases.len(),
        boundary,
        worst,
        EIGENVALUE_TOLERANCE
    );
    if let Some(c) = failed.first() {
        detail += &format!(
            "; first failure L={} N={} n={} r={}",
            c.sites, c.particles, c.block, c.sector
        );
    }
    outcome(failed.is_empty(), detail)
}

/// Both sum rules hold in exact arithmetic for L <= 12, N <= L/2.
fn sum_rules() -> Result<Outcome> {
    let cases: Vec<(usize, usize, usize, usize)> = (1..=12usize)
        .flat_map(|l| {
            (0..=l / 2)
                .flat_map(move |np| (0..=l).flat_map(move |n| (0..=np).map(move |r| (l, np, n, r))))
        })
        .collect();
    let results = cases
        .par_iter()
        .map(|&(l, np, n, r)| Ok(verify_sum_rules(&SystemShape::new(l, np, n)?, r)?.passed()))
        .collect::<Result<Vec<_>>>()?;
    let failed = results.iter().filter(|p| !**p).count();
    outcome(
        failed == 0,
        format!("{} (L, N, n, r) cases, {failed} failed", cases.len()),
    )
}

/// Dense eigenvalues of H cluster into (E_r, d_r) for L <= 10.
fn hamiltonian_spectrum() -> Result<Outcome> {
    let sizes: Vec<(usize, usize)> = (1..=10usize)
        .flat_map(|l| (0..=l).map(move |np| (l, np)))
        .collect();
    let reports = sizes
        .par_iter()
        .map(|&(l, np)| spectrum_check(l, np))
        .collect::<Result<Vec<_>>>()?;
    let failed: Vec<_> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| (r.sites, r.particles))
        .collect();
    outcome(
        failed.is_empty(),
        format!("{} (L, N) spectra, failures {failed:?}", reports.len()),
    )
}

/// Finite-L thermal entropies approach the limit curve; above T_c the limit
/// curve is n h2(p).
fn figure_1a() -> Result<Outcome> {
    let n = 6;
    let mut worst_ratio: f64 = 0.0;
    let mut above_tc: f64 = 0.0;
    let mut pass = true;
    for p in [0.1, 0.2, 0.5] {
        let tc = critical_temperature(p)?;
        let grid = log_grid(T_LOW * tc, T_HIGH * tc, 60)?;
        let limit: Vec<f64> = grid
            .par_iter()
            .map(|t| limit_block_entropy(p, mu_star(1.0 / t, p)?, n))
            .collect::<Result<_>>()?;
        let extensive = n as f64 * binary_entropy(p)?;
        for (t, s) in grid.iter().zip(&limit) {
            if *t >= tc {
                above_tc = above_tc.max((s - extensive).abs());
            }
        }
        for mode in [ThermalMode::EntropyOfMean, ThermalMode::MeanOfEntropies] {
            let curve = |l: usize| -> Result<Vec<f64>> {
                let shape = SystemShape::new(l, (p * l as f64).round() as usize, n)?;
                let model = ThermalBlockModel::new(shape, Backend::default_for(l))?;
                grid.par_iter()
                    .map(|t| model.entropy(1.0 / t, mode))
                    .collect()
            };
            let (small, large) = (curve(50)?, curve(700)?);
            for i in 0..grid.len() {
                let (near, far) = ((limit[i] - large[i]).abs(), (limit[i] - small[i]).abs());
                pass &= near < far;
                worst_ratio = worst_ratio.max(near / far);
            }
        }
    }
    let anchors = (n as f64 - 6.0 * binary_entropy(0.5)?).abs() < 1e-12
        && (6.0 * binary_entropy(0.2)? - 4.3316).abs() < 5e-5;
    pass &= above_tc < 1e-9 && anchors;
    outcome(
        pass,
        format!(
            "max |S_lim - S_700| / |S_lim - S_50| = {worst_ratio:.3} (< 1 required); \
             max |S_lim - n h2(p)| above T_c = {above_tc:.1e}"
        ),
    )
}

/// Q(k, s)/Q_max approaches the Gaussian as n grows.
fn figure_1b() -> Result<Outcome> {
    let devs = [100usize, 200, 800]
        .iter()
        .map(|&n| {
            Ok(weight_profile(0.4, 0.2, n)?
                .iter()
                .map(|pt| (pt.exact - pt.gaussian).abs())
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?;
    let pass = devs[0] > devs[1] && devs[1] > devs[2] && devs[2] <= 0.03;
    outcome(
        pass,
        format!(
            "max deviation n=100: {:.4}, n=200: {:.4}, n=800: {:.4} (<= 0.03)",
            devs[0], devs[1], devs[2]
        ),
    )
}

/// S/n lies above h2(mu*) and the gap shrinks like (1/2 log2 n + R)/n.
fn figure_2a() -> Result<Outcome> {
    let p = 0.2;
    let sizes = [5usize, 10, 50, 100, 150, 200, 300, 400];
    let xs = ratio_grid(50)?;
    let gaps = xs
        .par_iter()
        .map(|&x| {
            let h = binary_entropy(x * p)?;
            sizes
                .iter()
                .map(|&n| Ok(limit_block_entropy(p, x * p, n)? / n as f64 - h))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pass = true;
    let mut min_gap = f64::INFINITY;
    let mut worst_envelope: f64 = 0.0;
    for row in &gaps {
        pass &= row.windows(2).all(|w| w[1] < w[0]);
        for (g, &n) in row.iter().zip(&sizes) {
            min_gap = min_gap.min(*g);
            worst_envelope = worst_envelope.max(g * n as f64 / (n as f64).log2());
        }
    }
    pass &= min_gap > 0.0 && worst_envelope <= 1.0;
    outcome(
        pass,
        format!(
            "{} x values x {} sizes: min gap {min_gap:.2e} > 0, strictly decreasing in n, \
             max n*gap/log2(n) = {worst_envelope:.3} (<= 1)",
            xs.len(),
            sizes.len()
        ),
    )
}

/// Entanglement part grows like 1/2 log2 n - 0.289.
fn figure_2b() -> Result<Outcome> {
    let fit = entanglement_scaling(0.3, 0.18, &[50, 75, 100, 150, 200, 250, 300, 350, 400])?;
    let pass = (fit.slope - 0.5).abs() <= 0.05 && (fit.pinned_intercept + 0.289).abs() <= 0.05;
    outcome(
        pass,
        format!(
            "slope {:.4} (0.50 +- 0.05), pinned intercept {:.4} (-0.289 +- 0.05)",
            fit.slope, fit.pinned_intercept
        ),
    )
}

/// Above T_c the block entropy is purely extensive.
fn vanishing_entanglement() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for p in [0.1, 0.2, 0.3, 0.5, 0.8] {
        let tc = critical_temperature(p)?;
        let h = binary_entropy(p)?;
        for factor in [1.0, 1.5, 4.0, 100.0] {
            let mu = mu_star(1.0 / (factor * tc), p)?;
            let devs = (1..=200usize)
                .into_par_iter()
                .map(|n| Ok((limit_block_entropy(p, mu, n)? - n as f64 * h).abs()))
                .collect::<Result<Vec<f64>>>()?;
            worst = devs.into_iter().fold(worst, f64::max);
        }
    }
    outcome(
        worst < 1e-9,
        format!("max |S - n h2(p)| over n <= 200 = {worst:.1e} (< 1e-9)"),
    )
}

/// Exact ground-state entropy against 1/2 log2(2 pi e p q n).
fn zero_temperature() -> Result<Outcome> {
    let n = 10_000;
    let exact = limit_block_entropy_eta(0.5, 1.0, n)?;
    let asymptotic = ground_state_entropy_asymptotic(0.5, n)?;
    let diff = (exact - asymptotic).abs();
    outcome(
        diff < 0.01,
        format!("n=1e4: exact {exact:.6}, asymptotic {asymptotic:.6}, diff {diff:.1e} (< 0.01)"),
    )
}

/// -ln Z/(beta L) approaches the mean-field free energy monotonically in L.
fn free_energy() -> Result<Outcome> {
    let p = 0.2;
    let tc = critical_temperature(p)?;
    let mut pass = true;
    let mut rows = Vec::new();
    for factor in [0.3, 0.7, 0.95, 1.05, 1.5, 3.0] {
        let beta = 1.0 / (factor * tc);
        let target = free_energy_density(beta, p)?;
        let gaps = [100usize, 200, 400]
            .iter()
            .map(|&l| {
                let np = (p * l as f64).round() as usize;
                Ok((finite_free_energy_density(l, np, beta)? - target).abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        pass &= gaps[0] > gaps[1] && gaps[1] > gaps[2];
        rows.push(format!("{factor}T_c: {:.1e}", gaps[2]));
    }
    outcome(
        pass,
        format!(
            "monotone in L=100,200,400; gap at L=400 {}",
            rows.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("theorem certification (L <= 10)", theorem_certification),
        ("sum rules (L <= 12, exact)", sum_rules),
        ("spectrum of H (L <= 10)", hamiltonian_spectrum),
        ("thermal entropy vs temperature (n=6)", figure_1a),
        ("Gaussian weight profile (p=0.4, mu=0.2)", figure_1b),
        ("entropy density above h2(mu*) (p=0.2)", figure_2a),
        ("logarithmic scaling law (p=0.3, mu*=0.18)", figure_2b),
        ("entanglement vanishes above T_c", vanishing_entanglement),
        ("zero-temperature asymptotic (n=1e4)", zero_temperature),
        ("free energy self-consistency (p=0.2)", free_energy),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!pass);
        println!(
            "[{}] {:>2}. {name}: {detail} ({:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
