//! Thermodynamic-limit (`L -> inf`) quantities at fixed density `p = N/L`:
//! the condensation point, the saturation density `mu*`, the order
//! parameter, the limiting block spectrum and its entropy, and the split of
//! that entropy into an extensive Gibbs part and an entanglement part.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binary_entropy, ln_terminating_2f1, log_binomial, CompensatedSum};
use crate::error::{Error, Result};
use crate::finite::ln_block_degeneracy;

/// Lower end of the `mu*` bisection bracket.
pub const MU_FLOOR: f64 = 1e-15;
/// Absolute tolerance of the `mu*` root; bisection actually runs until the
/// bracket endpoints are adjacent doubles.
pub const MU_TOLERANCE: f64 = 1e-12;
const BISECTION_LIMIT: usize = 200;
/// Slack for `mu` at the `min(p, 1-p)` edge, where `1 - p` carries round-off.
const EDGE_SLACK: f64 = 1e-12;
/// Terms smaller than the running maximum by this factor are dropped.
const LN_DROP: f64 = 690.7755278982137; // ln(1e300)

fn check_density(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("p", p, "(0, 1)"));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::domain("beta", beta, "(0, inf]"));
    }
    Ok(())
}

/// Inverse temperature at which `mu` extremizes the free energy,
/// `ln((1-mu)/mu) / (1-2mu)`, continuous through `mu = 1/2` with value 2.
pub fn beta_star(mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::domain("mu", mu, "(0, 1)"));
    }
    // With x = 1 - 2mu, ln((1-mu)/mu) = 2 artanh(x).
    let x = 1.0 - 2.0 * mu;
    if x == 0.0 {
        return Ok(2.0);
    }
    Ok(2.0 * x.atanh() / x)
}

/// `T_c = 1 / beta*(min(p, 1-p))`.
pub fn critical_temperature(p: f64) -> Result<f64> {
    check_density(p)?;
    Ok(1.0 / beta_star(p.min(1.0 - p))?)
}

/// Saturation density minimizing the free energy at inverse temperature `beta`.
///
/// Below `T_c` this is the root of `beta*(mu) = beta` on `(0, min(p, q))`,
/// found by bisection; at and above `T_c` it is pinned at `min(p, q)`.
/// Roots below [`MU_FLOOR`] (beta beyond ~34.5, and `beta = inf`) return the
/// floor, which is within tolerance of the true root.
pub fn mu_star(beta: f64, p: f64) -> Result<f64> {
    check_beta(beta)?;
    check_density(p)?;
    let edge = p.min(1.0 - p);
    if beta <= beta_star(edge)? {
        return Ok(edge);
    }
    let (mut lo, mut hi) = (MU_FLOOR, edge);
    if beta >= beta_star(lo)? {
        return Ok(lo);
    }
    // beta* is strictly decreasing, so beta*(lo) > beta > beta*(hi).
    for _ in 0..BISECTION_LIMIT {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            debug_assert!(hi - lo <= MU_TOLERANCE);
            return Ok(mid);
        }
        if beta_star(mid)? > beta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        solver: "mu* bisection",
        iterations: BISECTION_LIMIT,
    })
}

/// `beta p^2 + beta mu(1-mu) + mu ln mu + (1-mu) ln(1-mu)`, the function
/// minimized over `mu in [0, min(p, q)]`.
pub fn free_energy_functional(beta: f64, p: f64, mu: f64) -> f64 {
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    beta * p * p + beta * mu * (1.0 - mu) + xlnx(mu) + xlnx(1.0 - mu)
}

/// Free energy per site, `Lambda_min / beta`.
pub fn free_energy_density(beta: f64, p: f64) -> Result<f64> {
    let mu = mu_star(beta, p)?;
    if beta.is_infinite() {
        return Ok(p * p);
    }
    Ok(free_energy_functional(beta, p, mu) / beta)
}

/// `(p - mu)(q - mu) / (pq)`, clipped to `[0, 1]`.
pub fn order_parameter(p: f64, mu: f64) -> Result<f64> {
    check_density(p)?;
    let q = 1.0 - p;
    if !(0.0..=p.min(q) + EDGE_SLACK).contains(&mu) {
        return Err(Error::domain("mu", mu, "[0, min(p, 1-p)]"));
    }
    let mu = mu.min(p.min(q));
    Ok(((p - mu) * (q - mu) / (p * q)).clamp(0.0, 1.0))
}

/// Condensate density `(p - mu*)(q - mu*)` below `T_c`, zero above.
pub fn condensate_density(beta: f64, p: f64) -> Result<f64> {
    let mu = mu_star(beta, p)?;
    let q = 1.0 - p;
    if mu >= p.min(q) {
        return Ok(0.0);
    }
    Ok((p - mu) * (q - mu))
}

/// Extensive entropy per site, `h2(mu*)` in bits.
pub fn gibbs_entropy_density(mu_star: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&mu_star) {
        return Err(Error::domain("mu*", mu_star, "[0, 1/2]"));
    }
    binary_entropy(mu_star)
}

/// Thermodynamic state at density `p` and temperature `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoPoint {
    pub p: f64,
    pub q: f64,
    pub temperature: f64,
    pub beta: f64,
    pub mu_star: f64,
    pub eta: f64,
    pub t_c: f64,
    pub rho_c: f64,
    pub free_energy_density: f64,
    pub gibbs_bits_per_site: f64,
}

impl ThermoPoint {
    /// `temperature = 0` is the ground state.
    pub fn new(p: f64, temperature: f64) -> Result<Self> {
        if temperature.is_nan() || temperature < 0.0 {
            return Err(Error::domain("T", temperature, "[0, inf)"));
        }
        Self::from_beta(p, 1.0 / temperature)
    }

    pub fn from_beta(p: f64, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        check_density(p)?;
        let mu = mu_star(beta, p)?;
        let eta = order_parameter(p, mu)?;
        Ok(ThermoPoint {
            p,
            q: 1.0 - p,
            temperature: 1.0 / beta,
            beta,
            mu_star: mu,
            eta,
            t_c: critical_temperature(p)?,
            rho_c: condensate_density(beta, p)?,
            free_energy_density: free_energy_density(beta, p)?,
            gibbs_bits_per_site: gibbs_entropy_density(mu)?,
        })
    }
}

fn check_limit_labels(n: usize, k: usize, s: usize) -> Result<()> {
    if k > n || s > k.min(n - k) {
        return Err(Error::BlockLabel { k, s, block: n });
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain("eta", eta, "[0, 1]"));
    }
    Ok(())
}

/// `ln lambda_ks` in the thermodynamic limit (`-inf` for a zero eigenvalue).
pub fn ln_limit_eigenvalue(p: f64, eta: f64, n: usize, k: usize, s: usize) -> Result<f64> {
    check_density(p)?;
    check_eta(eta)?;
    check_limit_labels(n, k, s)?;
    Ok(ln_limit_unchecked(p.ln(), (1.0 - p).ln(), eta, n, k, s))
}

fn ln_limit_unchecked(ln_p: f64, ln_q: f64, eta: f64, n: usize, k: usize, s: usize) -> f64 {
    if s > 0 && eta == 1.0 {
        return f64::NEG_INFINITY;
    }
    let ln_one_minus_eta = if s == 0 {
        0.0
    } else {
        (1.0 - eta).ln() * s as f64
    };
    let f =
        ln_terminating_2f1((k - s) as u64, (n - k - s) as u64, eta).expect("eta checked by caller");
    (n - k) as f64 * ln_p + k as f64 * ln_q + ln_one_minus_eta + f
}

/// `p^{n-k} q^k (1-eta)^s 2F1(-(k-s), -(n-k-s); 1; eta)`.
pub fn limit_eigenvalue(p: f64, eta: f64, n: usize, k: usize, s: usize) -> Result<f64> {
    Ok(ln_limit_eigenvalue(p, eta, n, k, s)?.exp())
}

/// `Q(k, s) = deg(n, s) lambda_ks`, the weight of label `(k, s)`.
pub fn limit_weight(p: f64, eta: f64, n: usize, k: usize, s: usize) -> Result<f64> {
    Ok((ln_limit_eigenvalue(p, eta, n, k, s)? + ln_block_degeneracy(n, s)).exp())
}

/// Entropy in bits of the limiting block spectrum with order parameter `eta`.
pub fn limit_block_entropy_eta(p: f64, eta: f64, n: usize) -> Result<f64> {
    check_density(p)?;
    check_eta(eta)?;
    let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
    if eta == 1.0 {
        // Only s = 0 survives, with lambda_k0 = C(n, k) p^{n-k} q^k and
        // degeneracy 1: the Shannon entropy of a binomial distribution.
        let terms: Vec<(f64, f64)> = (0..=n)
            .map(|k| {
                let ln_lambda = (n - k) as f64 * ln_p
                    + k as f64 * ln_q
                    + log_binomial(n as u64, k as i64).ln_abs();
                (ln_lambda, ln_lambda)
            })
            .collect();
        return Ok(entropy_from_terms(&terms));
    }
    let ln_deg: Vec<f64> = (0..=n / 2).map(|s| ln_block_degeneracy(n, s)).collect();
    let terms: Vec<(f64, f64)> = (0..=n)
        .into_par_iter()
        .flat_map_iter(|k| {
            let ln_deg = &ln_deg;
            (0..=k.min(n - k)).map(move |s| {
                let ln_lambda = ln_limit_unchecked(ln_p, ln_q, eta, n, k, s);
                (ln_lambda + ln_deg[s], ln_lambda)
            })
        })
        .collect();
    Ok(entropy_from_terms(&terms))
}

/// `-sum Q ln(lambda) / ln 2` from `(ln Q, ln lambda)` pairs.
fn entropy_from_terms(terms: &[(f64, f64)]) -> f64 {
    let max = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let acc: CompensatedSum = terms
        .iter()
        .filter(|(ln_w, _)| *ln_w > max - LN_DROP)
        .map(|(ln_w, ln_lambda)| -ln_w.exp() * ln_lambda)
        .collect();
    acc.total() / LN_2
}

/// Block entropy in bits at saturation density `mu`.
pub fn limit_block_entropy(p: f64, mu: f64, n: usize) -> Result<f64> {
    limit_block_entropy_eta(p, order_parameter(p, mu)?, n)
}

/// Zero-temperature large-`n` form `1/2 log2(2 pi e p q n)`.
pub fn ground_state_entropy_asymptotic(p: f64, n: usize) -> Result<f64> {
    check_density(p)?;
    Ok(0.5 * (2.0 * PI * std::f64::consts::E * p * (1.0 - p) * n as f64).log2())
}

fn check_gaussian_domain(p: f64, mu: f64) -> Result<()> {
    check_density(p)?;
    if !(mu > 0.0 && mu < p.min(1.0 - p)) {
        return Err(Error::domain("mu", mu, "(0, min(p, 1-p))"));
    }
    Ok(())
}

/// Peak height of the normalized Gaussian approximation to `Q(k, s)`,
/// `(1-2mu) / (2 pi n sqrt(mu(1-mu)(p-mu)(q-mu)))`.
pub fn gaussian_q_max(p: f64, mu: f64, n: usize) -> Result<f64> {
    check_gaussian_domain(p, mu)?;
    let q = 1.0 - p;
    let root = (mu * (1.0 - mu) * (p - mu) * (q - mu)).sqrt();
    Ok((1.0 - 2.0 * mu) / (2.0 * PI * n as f64 * root))
}

/// Gaussian approximation of `Q(k, s)` centred at `(k, s) = (nq, n mu)`.
pub fn gaussian_q(p: f64, mu: f64, n: usize, k: usize, s: usize) -> Result<f64> {
    Ok(gaussian_q_max(p, mu, n)? * gaussian_shape(p, mu, n, k as f64, s as f64))
}

/// `Q / Q_max` of the Gaussian approximation.
fn gaussian_shape(p: f64, mu: f64, n: usize, k: f64, s: f64) -> f64 {
    let q = 1.0 - p;
    let nf = n as f64;
    let pm = nf * (p - mu) * (q - mu);
    let c_inv = 1.0 / (nf * mu * (1.0 - mu)) + (p - q).powi(2) / pm;
    let d_inv = (1.0 - 2.0 * mu).powi(2) / pm;
    let b_inv = (1.0 - 2.0 * mu) * (p - q) / pm;
    let x = s - nf * mu;
    let y = k - nf * q;
    (-(0.5 * x * x * c_inv + 0.5 * y * y * d_inv + x * y * b_inv)).exp()
}

/// One point of the `Q(k, s) / Q_max` profile at fixed `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub k: usize,
    pub k_over_n: f64,
    pub exact: f64,
    pub gaussian: f64,
}

/// Exact and Gaussian `Q / Q_max` for `s = round(n mu)` and every admissible `k`.
pub fn weight_profile(p: f64, mu: f64, n: usize) -> Result<Vec<ProfilePoint>> {
    let q_max = gaussian_q_max(p, mu, n)?;
    let eta = order_parameter(p, mu)?;
    let s = (n as f64 * mu).round() as usize;
    (s..=n - s)
        .map(|k| {
            Ok(ProfilePoint {
                k,
                k_over_n: k as f64 / n as f64,
                exact: limit_weight(p, eta, n, k, s)? / q_max,
                gaussian: gaussian_shape(p, mu, n, k as f64, s as f64),
            })
        })
        .collect()
}

/// Block entropy split into its extensive and entanglement parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyDecomposition {
    pub n: usize,
    pub total_bits: f64,
    pub gibbs_bits: f64,
    pub entanglement_bits: f64,
    /// Intercept of `entanglement - 1/2 log2 n` fitted over an `n` grid.
    pub fitted_r: Option<f64>,
}

pub fn entropy_decomposition(p: f64, mu: f64, n: usize) -> Result<EntropyDecomposition> {
    let total = limit_block_entropy(p, mu, n)?;
    let gibbs = n as f64 * gibbs_entropy_density(mu)?;
    Ok(EntropyDecomposition {
        n,
        total_bits: total,
        gibbs_bits: gibbs,
        entanglement_bits: total - gibbs,
        fitted_r: None,
    })
}

/// Least-squares fit of the entanglement part against `log2 n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub points: Vec<EntropyDecomposition>,
    /// Free fit `entanglement = slope log2 n + intercept`.
    pub slope: f64,
    pub intercept: f64,
    /// Intercept with the slope pinned at 1/2.
    pub pinned_intercept: f64,
}

pub fn entanglement_scaling(p: f64, mu: f64, ns: &[usize]) -> Result<ScalingFit> {
    if ns.len() < 2 || ns.windows(2).any(|w| w[0] >= w[1]) || ns[0] == 0 {
        return Err(Error::Argument(
            "the n grid needs at least two strictly increasing positive sizes".into(),
        ));
    }
    let mut points = ns
        .par_iter()
        .map(|&n| entropy_decomposition(p, mu, n))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).log2()).collect();
    let ys: Vec<f64> = points.iter().map(|d| d.entanglement_bits).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let pinned_intercept = my - 0.5 * mx;
    for d in &mut points {
        d.fitted_r = Some(pinned_intercept);
    }
    Ok(ScalingFit {
        points,
        slope,
        intercept,
        pinned_intercept,
    })
}
