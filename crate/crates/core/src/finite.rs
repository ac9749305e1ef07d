//! Exact finite-size quantities for the complete-graph hard-core boson
//! Hamiltonian: the sector spectrum of `H`, the eigenvalues of the reduced
//! density matrix of an `n`-site block for every Young-tableau sector, and
//! the thermal block entropy.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    binomial, binomial_int, ln_biguint, log_binomial, log_sum_exp, xlog2x, Backend, CompensatedSum,
    ExactRational,
};
use crate::error::{Error, Result};

/// Lattice size `L`, particle number `N` and block size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SystemShape {
    sites: usize,
    particles: usize,
    block: usize,
}

impl SystemShape {
    pub fn new(sites: usize, particles: usize, block: usize) -> Result<Self> {
        let shape = SystemShape {
            sites,
            particles,
            block,
        };
        if sites == 0 {
            return Err(shape.invalid("L must be positive"));
        }
        if particles > sites {
            return Err(shape.invalid("N must not exceed L"));
        }
        if block > sites {
            return Err(shape.invalid("n must not exceed L"));
        }
        Ok(shape)
    }

    fn invalid(&self, reason: &'static str) -> Error {
        Error::Shape {
            l: self.sites,
            particles: self.particles,
            block: self.block,
            reason,
        }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn block(&self) -> usize {
        self.block
    }

    /// Largest sector label present in the `N`-particle space, `min(N, L-N)`.
    pub fn max_sector(&self) -> usize {
        max_sector(self.sites, self.particles)
    }

    pub fn check_sector(&self, r: usize) -> Result<()> {
        check_sector(self.sites, self.particles, r)
    }

    /// Admissible block labels `(k, s)` in table order.
    pub fn block_labels(&self) -> impl Iterator<Item = (usize, usize)> {
        block_labels(self.block)
    }
}

/// `min(N, L-N)`; equals `min(N, floor(L/2))` whenever `N <= L/2`.
pub fn max_sector(sites: usize, particles: usize) -> usize {
    particles.min(sites - particles)
}

fn check_sector(sites: usize, particles: usize, r: usize) -> Result<()> {
    let max = max_sector(sites, particles);
    if r > max {
        Err(Error::Sector { r, max })
    } else {
        Ok(())
    }
}

/// `(k, s)` for `k = 0..=n`, `s = 0..=min(k, n-k)`.
pub fn block_labels(block: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=block).flat_map(move |k| (0..=k.min(block - k)).map(move |s| (k, s)))
}

/// Number of `(k, s)` labels for a block of `n` sites.
pub fn block_label_count(block: usize) -> usize {
    (0..=block).map(|k| k.min(block - k) + 1).sum()
}

/// Energy of the `{L-r, r}` sector: `r + (N(N-1) - r(r-1)) / L`.
pub fn sector_energy(sites: usize, particles: usize, r: usize) -> Result<f64> {
    SystemShape::new(sites, particles, 0)?.check_sector(r)?;
    let (l, n, r) = (sites as f64, particles as f64, r as f64);
    Ok(r + (n * (n - 1.0) - r * (r - 1.0)) / l)
}

/// Degeneracy `d_r = C(L, r) - C(L, r-1)` of the `{L-r, r}` sector.
pub fn sector_degeneracy(sites: usize, r: usize) -> Result<BigUint> {
    if r > sites / 2 {
        return Err(Error::Sector { r, max: sites / 2 });
    }
    Ok(binomial(sites as u64, r as i64) - binomial(sites as u64, r as i64 - 1))
}

/// `ln d_r` without forming the big integer.
pub fn ln_sector_degeneracy(sites: usize, r: usize) -> Result<f64> {
    if r > sites / 2 {
        return Err(Error::Sector { r, max: sites / 2 });
    }
    // d_r = C(L, r) (L - 2r + 1) / (L - r + 1)
    let ratio = (sites - 2 * r + 1) as f64 / (sites - r + 1) as f64;
    Ok(log_binomial(sites as u64, r as i64).ln_abs() + ratio.ln())
}

/// Dimension of the `{n-s, s}` irrep of `S_n`: `C(n,s) - C(n,s-1)`.
pub fn block_degeneracy(block: usize, s: usize) -> BigUint {
    binomial(block as u64, s as i64) - binomial(block as u64, s as i64 - 1)
}

pub fn ln_block_degeneracy(block: usize, s: usize) -> f64 {
    let ratio = (block - 2 * s + 1) as f64 / (block - s + 1) as f64;
    log_binomial(block as u64, s as i64).ln_abs() + ratio.ln()
}

/// An eigenvalue of the reduced density matrix under either backend.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum EigenValue {
    Exact(ExactRational),
    Float(f64),
}

impl EigenValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            EigenValue::Exact(q) => q.to_f64(),
            EigenValue::Float(x) => *x,
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            EigenValue::Exact(q) => q.ln_abs(),
            EigenValue::Float(x) => x.ln(),
        }
    }

    pub fn exact(&self) -> Option<&ExactRational> {
        match self {
            EigenValue::Exact(q) => Some(q),
            EigenValue::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            EigenValue::Exact(q) => q.is_zero(),
            EigenValue::Float(x) => *x == 0.0,
        }
    }
}

/// One `(k, s)` eigenvalue with its multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedEigenvalue {
    pub k: usize,
    pub s: usize,
    pub value: EigenValue,
    #[serde(serialize_with = "serialize_biguint")]
    pub degeneracy: BigUint,
}

fn serialize_biguint<S: serde::Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl ReducedEigenvalue {
    pub fn degeneracy_f64(&self) -> f64 {
        self.degeneracy.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `value * degeneracy` as a double.
    pub fn weight(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        (self.value.ln() + ln_biguint(&self.degeneracy)).exp()
    }

    /// This entry's contribution `-deg * lambda * log2(lambda)`.
    pub fn entropy_bits(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        let ln_v = self.value.ln();
        -self.weight() * ln_v / std::f64::consts::LN_2
    }
}

/// All reduced-density-matrix eigenvalues of one sector.
#[derive(Debug, Clone, Serialize)]
pub struct SectorSpectrum {
    pub shape: SystemShape,
    pub sector: usize,
    pub backend: Backend,
    pub entries: Vec<ReducedEigenvalue>,
}

impl SectorSpectrum {
    /// `sum value * degeneracy`, exact under the rational backend.
    pub fn trace_exact(&self) -> Option<ExactRational> {
        self.entries
            .iter()
            .map(|e| {
                e.value.exact().map(|q| {
                    q * &ExactRational::new(BigInt::from(e.degeneracy.clone()), BigInt::from(1))
                })
            })
            .sum::<Option<ExactRational>>()
    }

    pub fn trace(&self) -> f64 {
        self.entries
            .iter()
            .map(ReducedEigenvalue::weight)
            .collect::<CompensatedSum>()
            .total()
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.entries
            .iter()
            .map(ReducedEigenvalue::entropy_bits)
            .collect::<CompensatedSum>()
            .total()
    }

    pub fn get(&self, k: usize, s: usize) -> Option<&ReducedEigenvalue> {
        self.entries.iter().find(|e| e.k == k && e.s == s)
    }

    /// Every eigenvalue repeated by its degeneracy, as doubles.
    ///
    /// Meant for small blocks; panics if a degeneracy does not fit `usize`.
    pub fn multiset(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for e in &self.entries {
            let d = e.degeneracy.to_usize().expect("degeneracy fits usize");
            out.extend(std::iter::repeat_n(e.value.to_f64(), d));
        }
        out
    }
}

/// Precomputed per-sector data shared by all `(k, s)` of one spectrum.
struct ExactKernel {
    /// `C(L-n, N-k) / C(L, N)` for `k = 0..=n`.
    prefactor: Vec<ExactRational>,
    /// `g_t = M_t / (C(L-N, t) C(N, t))` with
    /// `M_t = sum_m (-1)^m C(L-N-r, t-m) C(N-r, t-m) C(r, m)`.
    inner: Vec<ExactRational>,
}

impl ExactKernel {
    fn new(shape: &SystemShape, r: usize) -> Self {
        let (l, np, n) = (
            shape.sites as u64,
            shape.particles as i64,
            shape.block as u64,
        );
        let holes = l - np as u64;
        let total = binomial_int(l, np);
        let prefactor = (0..=n as i64)
            .map(|k| ExactRational::new(binomial_int(l - n, np - k), total.clone()))
            .collect();
        let r = r as u64;
        let inner = (0..=n)
            .map(|t| {
                let den = binomial_int(holes, t as i64) * binomial_int(np as u64, t as i64);
                if den.is_zero() {
                    // The numerator vanishes as well: t exceeds min(N, L-N).
                    return ExactRational::zero();
                }
                let mut num = BigInt::zero();
                for m in 0..=t.min(r) {
                    let term = binomial_int(holes - r, (t - m) as i64)
                        * binomial_int(np as u64 - r, (t - m) as i64)
                        * binomial_int(r, m as i64);
                    if m % 2 == 0 {
                        num += term;
                    } else {
                        num -= term;
                    }
                }
                ExactRational::new(num, den)
            })
            .collect();
        ExactKernel { prefactor, inner }
    }

    fn eigenvalue(&self, block: usize, k: usize, s: usize) -> ExactRational {
        let mut outer = ExactRational::zero();
        for i in 0..=(k - s) {
            let a = binomial_int((k - s) as u64, i as i64)
                * binomial_int((block - k - s) as u64, i as i64);
            if a.is_zero() {
                continue;
            }
            let mut js = ExactRational::zero();
            for j in 0..=s.min(k - i) {
                let c = ExactRational::new(binomial_int(s as u64, j as i64), BigInt::from(1));
                let term = &c * &self.inner[i + j];
                js = if j % 2 == 0 { &js + &term } else { &js - &term };
            }
            outer = &outer + &(&ExactRational::new(a, BigInt::from(1)) * &js);
        }
        &self.prefactor[k] * &outer
    }
}

fn ln_c(a: usize, b: usize) -> f64 {
    log_binomial(a as u64, b as i64).ln_abs()
}

/// Log-space evaluation of the triple sum with compensated accumulation.
fn float_eigenvalue(shape: &SystemShape, r: usize, k: usize, s: usize) -> f64 {
    let (l, np, n) = (shape.sites, shape.particles, shape.block);
    let holes = l - np;
    if np < k || l - n < np - k {
        return 0.0;
    }
    let ln_pre = ln_c(l - n, np - k) - ln_c(l, np);
    let mut acc = CompensatedSum::new();
    for i in 0..=(k - s) {
        if i > n - k - s {
            break;
        }
        let ln_a = ln_c(k - s, i) + ln_c(n - k - s, i);
        for j in 0..=s.min(k - i) {
            let t = i + j;
            if t > holes.min(np) {
                break;
            }
            let ln_b = ln_c(s, j) - ln_c(holes, t) - ln_c(np, t);
            for m in 0..=t.min(r) {
                if t - m > (holes - r).min(np - r) {
                    continue;
                }
                let ln_term = ln_pre
                    + ln_a
                    + ln_b
                    + ln_c(holes - r, t - m)
                    + ln_c(np - r, t - m)
                    + ln_c(r, m);
                let mag = ln_term.exp();
                if (j + m) % 2 == 0 {
                    acc.add(mag);
                } else {
                    acc.add(-mag);
                }
            }
        }
    }
    acc.total().max(0.0)
}

fn check_labels(shape: &SystemShape, k: usize, s: usize) -> Result<()> {
    if k > shape.block || s > k.min(shape.block - k) {
        return Err(Error::BlockLabel {
            k,
            s,
            block: shape.block,
        });
    }
    Ok(())
}

/// Eigenvalue `lambda(L, N, n, r, k, s)` of the block reduced density matrix
/// of any eigenstate in sector `r`.
pub fn theorem_eigenvalue(
    shape: &SystemShape,
    r: usize,
    k: usize,
    s: usize,
    backend: Backend,
) -> Result<EigenValue> {
    shape.check_sector(r)?;
    check_labels(shape, k, s)?;
    Ok(match backend {
        Backend::Rational => {
            EigenValue::Exact(ExactKernel::new(shape, r).eigenvalue(shape.block, k, s))
        }
        Backend::LogFloat => EigenValue::Float(float_eigenvalue(shape, r, k, s)),
    })
}

/// Full `(k, s)` table for sector `r`.
pub fn sector_spectrum(shape: &SystemShape, r: usize, backend: Backend) -> Result<SectorSpectrum> {
    shape.check_sector(r)?;
    let n = shape.block;
    let entries = match backend {
        Backend::Rational => {
            let kernel = ExactKernel::new(shape, r);
            block_labels(n)
                .map(|(k, s)| ReducedEigenvalue {
                    k,
                    s,
                    value: EigenValue::Exact(kernel.eigenvalue(n, k, s)),
                    degeneracy: block_degeneracy(n, s),
                })
                .collect()
        }
        Backend::LogFloat => block_labels(n)
            .map(|(k, s)| ReducedEigenvalue {
                k,
                s,
                value: EigenValue::Float(float_eigenvalue(shape, r, k, s)),
                degeneracy: block_degeneracy(n, s),
            })
            .collect(),
    };
    Ok(SectorSpectrum {
        shape: *shape,
        sector: r,
        backend,
        entries,
    })
}

/// Closed form of the fully symmetric sector, `C(L-n, N-k) C(n, k) / C(L, N)`.
pub fn symmetric_eigenvalue(shape: &SystemShape, k: usize) -> ExactRational {
    let (l, np, n) = (
        shape.sites as u64,
        shape.particles as i64,
        shape.block as u64,
    );
    ExactRational::new(
        binomial_int(l - n, np - k as i64) * binomial_int(n, k as i64),
        binomial_int(l, np),
    )
}

/// `-sum deg * lambda * log2(lambda)` for sector `r`.
pub fn sector_block_entropy(shape: &SystemShape, r: usize, backend: Backend) -> Result<f64> {
    Ok(sector_spectrum(shape, r, backend)?.entropy_bits())
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleCheck {
    /// `k` for the per-k rule, `s` for the per-s rule.
    pub index: usize,
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    pub pass: bool,
}

/// Outcome of both sum rules for one sector.
#[derive(Debug, Clone, Serialize)]
pub struct SumRuleReport {
    pub shape: SystemShape,
    pub sector: usize,
    /// `sum_s lambda_ks deg(s) = C(L-n, N-k) C(n, k) / C(L, N)`.
    pub per_k: Vec<RuleCheck>,
    /// `sum_k lambda_ks = [C(L-n, r-s) - C(L-n, r+s-n-1)] / d_r`.
    pub per_s: Vec<RuleCheck>,
}

impl SumRuleReport {
    pub fn passed(&self) -> bool {
        self.per_k.iter().chain(&self.per_s).all(|c| c.pass)
    }
}

pub fn verify_sum_rules(shape: &SystemShape, r: usize) -> Result<SumRuleReport> {
    let spec = sector_spectrum(shape, r, Backend::Rational)?;
    let n = shape.block;
    let (l, ln) = (shape.sites as u64, (shape.sites - n) as u64);
    let value = |k: usize, s: usize| -> ExactRational {
        spec.get(k, s)
            .and_then(|e| e.value.exact().cloned())
            .expect("rational entry")
    };

    let per_k = (0..=n)
        .map(|k| {
            let lhs: ExactRational = (0..=k.min(n - k))
                .map(|s| {
                    let deg = ExactRational::new(BigInt::from(block_degeneracy(n, s)), 1.into());
                    &value(k, s) * &deg
                })
                .sum();
            let rhs = symmetric_eigenvalue(shape, k);
            RuleCheck {
                index: k,
                pass: lhs == rhs,
                lhs,
                rhs,
            }
        })
        .collect();

    let ri = r as i64;
    let d_r = binomial_int(l, ri) - binomial_int(l, ri - 1);
    let per_s = (0..=n / 2)
        .map(|s| {
            let lhs: ExactRational = (s..=n - s).map(|k| value(k, s)).sum();
            let si = s as i64;
            let num = binomial_int(ln, ri - si) - binomial_int(ln, ri + si - n as i64 - 1);
            let rhs = ExactRational::new(num, d_r.clone());
            RuleCheck {
                index: s,
                pass: lhs == rhs,
                lhs,
                rhs,
            }
        })
        .collect();

    Ok(SumRuleReport {
        shape: *shape,
        sector: r,
        per_k,
        per_s,
    })
}

/// Normalized Boltzmann weights `w_r = d_r exp(-beta E_r) / Z`.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleWeights {
    pub beta: f64,
    /// Indexed by sector label `r`.
    pub weights: Vec<f64>,
    /// Natural log of the partition function.
    pub log_z: f64,
}

impl EnsembleWeights {
    pub fn weight(&self, r: usize) -> f64 {
        self.weights.get(r).copied().unwrap_or(0.0)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::domain("beta", beta, "[0, inf]"));
    }
    Ok(())
}

/// Sector weights over `r = 0..=min(N, L-N)`. `beta = inf` puts all weight
/// on the ground sector.
pub fn ensemble_weights(sites: usize, particles: usize, beta: f64) -> Result<EnsembleWeights> {
    check_beta(beta)?;
    if sites == 0 || particles > sites {
        return Err(Error::Argument(format!(
            "ensemble needs 0 <= N <= L and L > 0, got L={sites}, N={particles}"
        )));
    }
    let rmax = max_sector(sites, particles);
    if beta.is_infinite() {
        let mut weights = vec![0.0; rmax + 1];
        weights[0] = 1.0;
        return Ok(EnsembleWeights {
            beta,
            weights,
            log_z: f64::NEG_INFINITY,
        });
    }
    let ln_w = (0..=rmax)
        .map(|r| Ok(ln_sector_degeneracy(sites, r)? - beta * sector_energy(sites, particles, r)?))
        .collect::<Result<Vec<f64>>>()?;
    let log_z = log_sum_exp(&ln_w);
    let weights = ln_w.iter().map(|x| (x - log_z).exp()).collect();
    Ok(EnsembleWeights {
        beta,
        weights,
        log_z,
    })
}

/// `-ln Z / (beta L)`.
pub fn finite_free_energy_density(sites: usize, particles: usize, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "(0, inf)"));
    }
    let w = ensemble_weights(sites, particles, beta)?;
    Ok(-w.log_z / (beta * sites as f64))
}

/// Thermodynamic entropy per site, `(beta <E> + ln Z) / L`, in bits.
pub fn finite_entropy_density(sites: usize, particles: usize, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "(0, inf)"));
    }
    let w = ensemble_weights(sites, particles, beta)?;
    let terms = w
        .weights
        .iter()
        .enumerate()
        .map(|(r, wr)| Ok(wr * sector_energy(sites, particles, r)?))
        .collect::<Result<Vec<f64>>>()?;
    let mean_energy = terms.into_iter().collect::<CompensatedSum>().total();
    Ok((beta * mean_energy + w.log_z) / (sites as f64 * std::f64::consts::LN_2))
}

/// How the sector spectra are combined at finite temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThermalMode {
    /// `sum_r w_r S(rho_n(r))`.
    MeanOfEntropies,
    /// `S(sum_r w_r rho_n(r))`; all sector blocks share one eigenbasis.
    EntropyOfMean,
}

/// Cached sector spectra for temperature sweeps at fixed shape.
#[derive(Debug, Clone)]
pub struct ThermalBlockModel {
    shape: SystemShape,
    /// `[r][label]` eigenvalues as doubles, labels in `block_labels` order.
    values: Vec<Vec<f64>>,
    /// Degeneracy per label.
    degeneracy: Vec<f64>,
    sector_entropy: Vec<f64>,
}

impl ThermalBlockModel {
    pub fn new(shape: SystemShape, backend: Backend) -> Result<Self> {
        let spectra = (0..=shape.max_sector())
            .into_par_iter()
            .map(|r| sector_spectrum(&shape, r, backend))
            .collect::<Result<Vec<_>>>()?;
        let degeneracy = block_labels(shape.block)
            .map(|(_, s)| {
                block_degeneracy(shape.block, s)
                    .to_f64()
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        let values = spectra
            .iter()
            .map(|sp| sp.entries.iter().map(|e| e.value.to_f64()).collect())
            .collect();
        let sector_entropy = spectra.iter().map(SectorSpectrum::entropy_bits).collect();
        Ok(ThermalBlockModel {
            shape,
            values,
            degeneracy,
            sector_entropy,
        })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn sector_entropy(&self, r: usize) -> Option<f64> {
        self.sector_entropy.get(r).copied()
    }

    /// Eigenvalue table `(k, s) -> sum_r w_r lambda_ks(r)` of the thermal block state.
    pub fn mixed_spectrum(&self, weights: &EnsembleWeights) -> Vec<f64> {
        (0..self.degeneracy.len())
            .map(|i| {
                self.values
                    .iter()
                    .zip(&weights.weights)
                    .map(|(v, w)| w * v[i])
                    .collect::<CompensatedSum>()
                    .total()
            })
            .collect()
    }

    pub fn entropy(&self, beta: f64, mode: ThermalMode) -> Result<f64> {
        let weights = ensemble_weights(self.shape.sites, self.shape.particles, beta)?;
        Ok(match mode {
            ThermalMode::MeanOfEntropies => self
                .sector_entropy
                .iter()
                .zip(&weights.weights)
                .map(|(s, w)| w * s)
                .collect::<CompensatedSum>()
                .total(),
            ThermalMode::EntropyOfMean => self
                .mixed_spectrum(&weights)
                .iter()
                .zip(&self.degeneracy)
                .map(|(v, d)| -d * xlog2x(*v))
                .collect::<CompensatedSum>()
                .total(),
        })
    }
}

/// Thermal von Neumann entropy of an `n`-site block in bits.
pub fn thermal_block_entropy(
    shape: &SystemShape,
    beta: f64,
    mode: ThermalMode,
    backend: Backend,
) -> Result<f64> {
    check_beta(beta)?;
    ThermalBlockModel::new(*shape, backend)?.entropy(beta, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n.into(), d.into())
    }

    fn shape(l: usize, np: usize, n: usize) -> SystemShape {
        SystemShape::new(l, np, n).unwrap()
    }

    #[test]
    fn shape_validation() {
        assert!(SystemShape::new(0, 0, 0).is_err());
        assert!(SystemShape::new(4, 5, 2).is_err());
        assert!(SystemShape::new(4, 2, 5).is_err());
        assert_eq!(shape(4, 2, 2).max_sector(), 2);
        assert_eq!(shape(4, 3, 2).max_sector(), 1);
        assert!(matches!(
            shape(4, 2, 2).check_sector(3),
            Err(Error::Sector { r: 3, max: 2 })
        ));
    }

    #[test]
    fn energies() {
        assert_eq!(sector_energy(4, 2, 0).unwrap(), 0.5);
        assert_eq!(sector_energy(4, 2, 1).unwrap(), 1.5);
        assert_eq!(sector_energy(4, 2, 2).unwrap(), 2.0);
        for (l, np) in [(7usize, 3usize), (10, 10), (13, 0)] {
            let want = (np * np.saturating_sub(1)) as f64 / l as f64;
            assert_eq!(sector_energy(l, np, 0).unwrap(), want);
        }
        assert!(sector_energy(4, 2, 3).is_err());
        assert!(sector_energy(4, 5, 0).is_err());
    }

    #[test]
    fn degeneracies() {
        let d: Vec<u32> = (0..=2)
            .map(|r| sector_degeneracy(4, r).unwrap().to_u32().unwrap())
            .collect();
        assert_eq!(d, vec![1, 3, 2]);
        assert_eq!(d.iter().sum::<u32>(), 6);
        assert!(sector_degeneracy(4, 3).is_err());
        for r in 0..=5 {
            let exact = sector_degeneracy(11, r).unwrap().to_f64().unwrap().ln();
            assert!((ln_sector_degeneracy(11, r).unwrap() - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn sector_dimensions_fill_the_particle_space() {
        for l in 1..=16usize {
            for np in 0..=l / 2 {
                let total: BigUint = (0..=np).map(|r| sector_degeneracy(l, r).unwrap()).sum();
                assert_eq!(total, binomial(l as u64, np as i64), "L={l} N={np}");
            }
        }
    }

    #[test]
    fn four_site_spectra() {
        let sh = shape(4, 2, 2);
        let v = |r, k, s| theorem_eigenvalue(&sh, r, k, s, Backend::Rational).unwrap();
        assert_eq!(v(1, 1, 0), EigenValue::Exact(q(1, 3)));
        assert_eq!(v(0, 1, 0), EigenValue::Exact(q(2, 3)));

        let r1 = sector_spectrum(&sh, 1, Backend::Rational).unwrap();
        let table: Vec<_> = r1
            .entries
            .iter()
            .map(|e| {
                (
                    e.k,
                    e.s,
                    e.value.exact().unwrap().clone(),
                    e.degeneracy.clone(),
                )
            })
            .collect();
        let one = BigUint::from(1u32);
        assert_eq!(
            table,
            vec![
                (0, 0, q(1, 6), one.clone()),
                (1, 0, q(1, 3), one.clone()),
                (1, 1, q(1, 3), one.clone()),
                (2, 0, q(1, 6), one.clone()),
            ]
        );
        assert_eq!(r1.trace_exact().unwrap(), ExactRational::one());

        let r0 = sector_spectrum(&sh, 0, Backend::Rational).unwrap();
        assert_eq!(r0.get(0, 0).unwrap().value, EigenValue::Exact(q(1, 6)));
        assert_eq!(r0.get(1, 0).unwrap().value, EigenValue::Exact(q(2, 3)));
        assert!(r0.get(1, 1).unwrap().value.is_zero());
        assert_eq!(r0.get(2, 0).unwrap().value, EigenValue::Exact(q(1, 6)));
    }

    #[test]
    fn whole_system_block_is_pure() {
        for (l, np) in [(5, 2), (6, 3), (7, 0), (3, 3)] {
            let sh = shape(l, np, l);
            let v = theorem_eigenvalue(&sh, 0, np, 0, Backend::Rational).unwrap();
            assert_eq!(v, EigenValue::Exact(ExactRational::one()));
            assert!(
                sector_block_entropy(&sh, 0, Backend::Rational)
                    .unwrap()
                    .abs()
                    < 1e-15
            );
        }
    }

    #[test]
    fn label_errors() {
        let sh = shape(4, 2, 2);
        assert!(theorem_eigenvalue(&sh, 0, 3, 0, Backend::Rational).is_err());
        assert!(theorem_eigenvalue(&sh, 0, 1, 2, Backend::Rational).is_err());
        assert!(theorem_eigenvalue(&sh, 3, 1, 0, Backend::Rational).is_err());
        assert_eq!(block_label_count(2), 4);
        assert_eq!(block_labels(6).count(), block_label_count(6));
    }

    #[test]
    fn sum_rule_examples() {
        let rep = verify_sum_rules(&shape(4, 2, 2), 1).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.per_k[1].rhs, q(2, 3));
        assert_eq!(rep.per_s[0].lhs, q(2, 3));
        assert_eq!(rep.per_s[0].rhs, q(2, 3));
    }

    #[test]
    fn entropies_of_small_sectors() {
        let sh = shape(4, 2, 2);
        let s0 = sector_block_entropy(&sh, 0, Backend::Rational).unwrap();
        let want0 =
            -2.0 * (1.0 / 6.0) * (1.0f64 / 6.0).log2() - (2.0 / 3.0) * (2.0f64 / 3.0).log2();
        assert!((s0 - want0).abs() < 1e-14);
        assert!((s0 - 1.251629).abs() < 1e-6);
        let s1 = sector_block_entropy(&sh, 1, Backend::Rational).unwrap();
        let want1 =
            2.0 * (-(1.0 / 6.0) * (1.0f64 / 6.0).log2() - (1.0 / 3.0) * (1.0f64 / 3.0).log2());
        assert!((s1 - want1).abs() < 1e-14);
        assert!((s1 - 1.918296).abs() < 1e-6);
    }

    #[test]
    fn exhaustive_small_grid() {
        // Trace, sum rules, nonnegativity and the symmetric closed form.
        for l in 1..=12usize {
            for np in 0..=l / 2 {
                for n in 0..l {
                    let sh = shape(l, np, n);
                    for r in 0..=sh.max_sector() {
                        let sp = sector_spectrum(&sh, r, Backend::Rational).unwrap();
                        assert_eq!(sp.trace_exact().unwrap(), ExactRational::one());
                        assert!(sp
                            .entries
                            .iter()
                            .all(|e| !e.value.exact().unwrap().is_negative()));
                        assert_eq!(sp.entries.len(), block_label_count(n));
                        assert!(
                            verify_sum_rules(&sh, r).unwrap().passed(),
                            "L={l} N={np} n={n} r={r}"
                        );
                        if r == 0 {
                            for e in &sp.entries {
                                let want = if e.s == 0 {
                                    symmetric_eigenvalue(&sh, e.k)
                                } else {
                                    ExactRational::zero()
                                };
                                assert_eq!(e.value.exact().unwrap(), &want);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn float_backend_tracks_rational() {
        let mut worst: f64 = 0.0;
        for l in [10usize, 20, 40, 60] {
            for np in (0..=l).step_by((l / 10).max(1)) {
                for n in [2usize, 4, 6, 8] {
                    let sh = shape(l, np, n);
                    for r in 0..=sh.max_sector() {
                        let exact = sector_spectrum(&sh, r, Backend::Rational).unwrap();
                        let float = sector_spectrum(&sh, r, Backend::LogFloat).unwrap();
                        for (a, b) in exact.entries.iter().zip(&float.entries) {
                            let want = a.value.to_f64();
                            if want > 1e-200 {
                                worst = worst.max(((b.value.to_f64() - want) / want).abs());
                            }
                        }
                    }
                }
            }
        }
        assert!(worst <= 1e-9, "worst relative deviation {worst}");
    }

    #[test]
    fn ensemble_examples() {
        let w = ensemble_weights(4, 2, 0.0).unwrap();
        for (got, want) in w.weights.iter().zip([1.0 / 6.0, 0.5, 1.0 / 3.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((w.log_z - 6f64.ln()).abs() < 1e-14);
        let cold = ensemble_weights(4, 2, 200.0).unwrap();
        assert!(cold.weights[0] > 1.0 - 1e-12);
        assert!(ensemble_weights(4, 2, -1.0).is_err());
        let frozen = ensemble_weights(4, 2, f64::INFINITY).unwrap();
        assert_eq!(frozen.weights, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn ensemble_matches_direct_summation() {
        let (l, np, beta) = (50usize, 10usize, 1.0);
        let w = ensemble_weights(l, np, beta).unwrap();
        let direct: Vec<f64> = (0..=np)
            .map(|r| {
                let d = (binomial(l as u64, r as i64) - binomial(l as u64, r as i64 - 1))
                    .to_f64()
                    .unwrap();
                let e = r as f64 + ((np * (np - 1)) as f64 - (r * r) as f64 + r as f64) / l as f64;
                d * (-beta * e).exp()
            })
            .collect();
        let z: f64 = direct.iter().sum();
        assert!((w.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (got, d) in w.weights.iter().zip(&direct) {
            assert!((got - d / z).abs() < 1e-10);
        }
        assert!((w.log_z - z.ln()).abs() < 1e-10);
    }

    #[test]
    fn thermal_limits() {
        let sh = shape(4, 2, 2);
        let ground = sector_block_entropy(&sh, 0, Backend::Rational).unwrap();
        for mode in [ThermalMode::MeanOfEntropies, ThermalMode::EntropyOfMean] {
            let cold = thermal_block_entropy(&sh, f64::INFINITY, mode, Backend::Rational).unwrap();
            assert!((cold - ground).abs() < 1e-14);
            let frozen = thermal_block_entropy(&sh, 100.0, mode, Backend::Rational).unwrap();
            assert!((frozen - 1.251629).abs() < 1e-6);
        }
        for l in 4..=12usize {
            for np in 1..=l / 2 {
                let sh = shape(l, np, l / 2);
                let model = ThermalBlockModel::new(sh, Backend::Rational).unwrap();
                let ground = model.sector_entropy(0).unwrap();
                for mode in [ThermalMode::MeanOfEntropies, ThermalMode::EntropyOfMean] {
                    assert!((model.entropy(50.0, mode).unwrap() - ground).abs() < 1e-6);
                }
                // beta = 0 weights sectors by their dimension.
                let w0 = ensemble_weights(l, np, 0.0).unwrap();
                let total = binomial(l as u64, np as i64).to_f64().unwrap();
                for (r, w) in w0.weights.iter().enumerate() {
                    let d = sector_degeneracy(l, r).unwrap().to_f64().unwrap();
                    assert!((w - d / total).abs() < 1e-14);
                }
                let hot = model.entropy(0.0, ThermalMode::MeanOfEntropies).unwrap();
                let direct: f64 = w0
                    .weights
                    .iter()
                    .enumerate()
                    .map(|(r, w)| w * model.sector_entropy(r).unwrap())
                    .sum();
                assert!((hot - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn entropy_of_mean_dominates() {
        for (l, np, n) in [(8usize, 3usize, 3usize), (12, 6, 4), (50, 10, 6)] {
            let model = ThermalBlockModel::new(shape(l, np, n), Backend::Rational).unwrap();
            for beta in [0.0, 0.3, 1.0, 3.0, 10.0] {
                let mix = model.entropy(beta, ThermalMode::EntropyOfMean).unwrap();
                let avg = model.entropy(beta, ThermalMode::MeanOfEntropies).unwrap();
                assert!(mix >= avg - 1e-12, "L={l} beta={beta}");
            }
        }
    }

    #[test]
    fn finite_thermodynamics_are_consistent() {
        // At beta -> 0 the entropy density is ln C(L,N) / L.
        let (l, np) = (40usize, 12usize);
        let s = finite_entropy_density(l, np, 1e-9).unwrap();
        let want = ln_biguint(&binomial(l as u64, np as i64)) / (l as f64 * std::f64::consts::LN_2);
        assert!((s - want).abs() < 1e-6);
        assert!(finite_free_energy_density(l, np, 0.0).is_err());
    }
}
