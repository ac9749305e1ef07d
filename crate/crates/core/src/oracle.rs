//! Brute-force exact diagonalization for desk-scale systems.
//!
//! Builds the Hamiltonian in the occupation basis of a fixed particle
//! number, splits its spectrum into degenerate eigenspaces, traces out the
//! environment of an `n`-site block and compares the resulting eigenvalues
//! with the analytic tables of [`crate::finite`].

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, Backend, CompensatedSum};
use crate::error::{Error, Result};
use crate::finite::{
    ensemble_weights, sector_degeneracy, sector_energy, sector_spectrum, verify_sum_rules,
    SystemShape, ThermalMode,
};

/// Largest lattice handled by dense matrices.
pub const MAX_SITES: usize = 14;
/// Eigenvalues closer than this belong to one cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-9;
/// Minimum gap between neighbouring clusters.
pub const CLUSTER_GUARD: f64 = 100.0 * CLUSTER_TOLERANCE;
/// Eigenvalues below this are treated as structural zeros.
pub const ZERO_THRESHOLD: f64 = 1e-10;
/// Per-eigenvalue tolerance when certifying the analytic tables.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-9;

fn check_size(sites: usize) -> Result<()> {
    if sites > MAX_SITES {
        return Err(Error::TooLarge {
            l: sites,
            max: MAX_SITES,
        });
    }
    Ok(())
}

/// Occupation bitstrings of `L` sites holding exactly `N` particles, sorted.
/// Bit `i` is the occupation of site `i`.
#[derive(Debug, Clone)]
pub struct FockBasis {
    sites: usize,
    particles: usize,
    states: Vec<u32>,
    index: HashMap<u32, usize>,
}

impl FockBasis {
    pub fn new(sites: usize, particles: usize) -> Result<Self> {
        check_size(sites)?;
        if particles > sites {
            return Err(Error::Argument(format!("N={particles} exceeds L={sites}")));
        }
        let states: Vec<u32> = (0u32..1 << sites)
            .filter(|c| c.count_ones() as usize == particles)
            .collect();
        let index = states.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Ok(FockBasis {
            sites,
            particles,
            states,
            index,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn index_of(&self, config: u32) -> Option<usize> {
        self.index.get(&config).copied()
    }
}

/// A dense real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator(pub DMatrix<f64>);

impl DenseOperator {
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        (&self.0 - self.0.transpose()).amax()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// `H = -(1/L) sum_{i,j} b_i^+ b_j + sum_i b_i^+ b_i` on the `N`-particle sector.
///
/// The `i = j` terms put `N - N/L` on the diagonal; hopping one particle to an
/// empty site gives `-1/L`.
pub fn build_hamiltonian(sites: usize, particles: usize) -> Result<(FockBasis, DenseOperator)> {
    let basis = FockBasis::new(sites, particles)?;
    let dim = basis.dim();
    let l = sites as f64;
    let mut h = DMatrix::zeros(dim, dim);
    for (a, &c) in basis.states.iter().enumerate() {
        h[(a, a)] = particles as f64 - particles as f64 / l;
        for from in (0..sites).filter(|&i| c >> i & 1 == 1) {
            for to in (0..sites).filter(|&j| c >> j & 1 == 0) {
                let moved = c ^ (1 << from) ^ (1 << to);
                let b = basis.index_of(moved).expect("same particle number");
                h[(b, a)] -= 1.0 / l;
            }
        }
    }
    Ok((basis, DenseOperator(h)))
}

/// The same Hamiltonian on the full `2^L` occupation space.
pub fn build_full_hamiltonian(sites: usize) -> Result<DenseOperator> {
    check_size(sites)?;
    let dim = 1usize << sites;
    let l = sites as f64;
    let mut h = DMatrix::zeros(dim, dim);
    for c in 0..dim as u32 {
        let n = c.count_ones() as f64;
        h[(c as usize, c as usize)] = n - n / l;
        for from in (0..sites).filter(|&i| c >> i & 1 == 1) {
            for to in (0..sites).filter(|&j| c >> j & 1 == 0) {
                let moved = c ^ (1 << from) ^ (1 << to);
                h[(moved as usize, c as usize)] -= 1.0 / l;
            }
        }
    }
    Ok(DenseOperator(h))
}

/// Total particle number on the full occupation space.
pub fn number_operator(sites: usize) -> Result<DenseOperator> {
    check_size(sites)?;
    let diag: Vec<f64> = (0u32..1 << sites).map(|c| c.count_ones() as f64).collect();
    Ok(DenseOperator(DMatrix::from_diagonal(&diag.into())))
}

/// Permutation matrix exchanging sites `i` and `j` within a basis.
pub fn transposition_operator(basis: &FockBasis, i: usize, j: usize) -> DenseOperator {
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for (a, &c) in basis.states.iter().enumerate() {
        let bi = c >> i & 1;
        let bj = c >> j & 1;
        let swapped = if bi == bj { c } else { c ^ (1 << i) ^ (1 << j) };
        m[(basis.index_of(swapped).expect("same particle number"), a)] = 1.0;
    }
    DenseOperator(m)
}

/// Largest absolute entry of `[A, B]`.
pub fn commutator_norm(a: &DenseOperator, b: &DenseOperator) -> f64 {
    (&a.0 * &b.0 - &b.0 * &a.0).amax()
}

/// A group of numerically equal eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
    #[serde(skip)]
    pub members: Vec<usize>,
}

/// Groups sorted eigenvalues into clusters and rejects near-collisions.
pub fn cluster_eigenvalues(sorted: &[f64]) -> Result<Vec<Cluster>> {
    let mut clusters: Vec<Cluster> = Vec::new();
    for (i, &v) in sorted.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if (v - sorted[c.members[0]]).abs() <= CLUSTER_TOLERANCE => {
                c.members.push(i);
            }
            Some(c) if v - sorted[*c.members.last().expect("nonempty")] < CLUSTER_GUARD => {
                return Err(Error::ClusterAmbiguity { a: c.value, b: v });
            }
            _ => clusters.push(Cluster {
                value: v,
                multiplicity: 0,
                members: vec![i],
            }),
        }
    }
    for c in &mut clusters {
        c.multiplicity = c.members.len();
        c.value = c.members.iter().map(|&i| sorted[i]).sum::<f64>() / c.multiplicity as f64;
    }
    Ok(clusters)
}

/// Eigendecomposition of `H` with eigenspaces labelled by sector.
#[derive(Debug, Clone)]
pub struct SectorDecomposition {
    pub basis: FockBasis,
    pub hamiltonian: DenseOperator,
    /// Ascending eigenvalues.
    pub energies: Vec<f64>,
    /// Matching eigenvectors as columns.
    pub vectors: DMatrix<f64>,
    pub clusters: Vec<Cluster>,
}

impl SectorDecomposition {
    pub fn new(sites: usize, particles: usize) -> Result<Self> {
        let (basis, hamiltonian) = build_hamiltonian(sites, particles)?;
        let eig = SymmetricEigen::new(hamiltonian.0.clone());
        let mut order: Vec<usize> = (0..basis.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(basis.dim(), basis.dim(), |row, col| {
            eig.eigenvectors[(row, order[col])]
        });
        let clusters = cluster_eigenvalues(&energies)?;
        Ok(SectorDecomposition {
            basis,
            hamiltonian,
            energies,
            vectors,
            clusters,
        })
    }

    /// Cluster whose energy matches `E_r`.
    pub fn sector_cluster(&self, r: usize) -> Result<&Cluster> {
        let (l, np) = (self.basis.sites, self.basis.particles);
        SystemShape::new(l, np, 0)?.check_sector(r)?;
        let e = sector_energy(l, np, r)?;
        self.clusters
            .iter()
            .find(|c| (c.value - e).abs() <= CLUSTER_TOLERANCE)
            .ok_or_else(|| Error::Argument(format!("no eigenvalue cluster at E_{r} = {e}")))
    }

    /// Orthogonal projector onto the `E_r` eigenspace.
    pub fn projector(&self, r: usize) -> Result<DenseOperator> {
        let c = self.sector_cluster(r)?;
        let cols = self.vectors.select_columns(&c.members);
        Ok(DenseOperator(&cols * cols.transpose()))
    }

    /// The sector state `P_r / d_r`.
    pub fn sector_state(&self, r: usize) -> Result<DenseOperator> {
        let c = self.sector_cluster(r)?;
        let p = self.projector(r)?;
        Ok(DenseOperator(p.0 / c.multiplicity as f64))
    }

    /// Gibbs state `exp(-beta H) / Z`; `beta = inf` gives the ground projector
    /// normalized to unit trace.
    pub fn gibbs_state(&self, beta: f64) -> DenseOperator {
        let e0 = self.energies[0];
        let w: Vec<f64> = self
            .energies
            .iter()
            .map(|e| {
                if beta.is_infinite() {
                    if (e - e0).abs() <= CLUSTER_TOLERANCE {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    (-beta * (e - e0)).exp()
                }
            })
            .collect();
        let z: f64 = w.iter().sum();
        let scaled = DMatrix::from_fn(self.vectors.nrows(), self.vectors.ncols(), |i, j| {
            self.vectors[(i, j)] * w[j] / z
        });
        DenseOperator(scaled * self.vectors.transpose())
    }
}

/// Comparison of the numerical spectrum of `H` with `(E_r, d_r)`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub sites: usize,
    pub particles: usize,
    pub clusters: Vec<Cluster>,
    /// `(E_r, d_r)` for every admissible `r`.
    pub expected: Vec<(f64, usize)>,
    pub pass: bool,
    pub detail: Option<String>,
}

pub fn spectrum_check(sites: usize, particles: usize) -> Result<SpectrumReport> {
    let shape = SystemShape::new(sites, particles, 0)?;
    check_size(sites)?;
    let expected = (0..=shape.max_sector())
        .map(|r| {
            Ok((
                sector_energy(sites, particles, r)?,
                sector_degeneracy(sites, r)?.to_usize().expect("small"),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let (clusters, detail) = match SectorDecomposition::new(sites, particles) {
        Ok(d) => (d.clusters, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let pass = detail.is_none()
        && clusters.len() == expected.len()
        && clusters
            .iter()
            .zip(&expected)
            .all(|(c, (e, d))| (c.value - e).abs() <= CLUSTER_TOLERANCE && c.multiplicity == *d);
    Ok(SpectrumReport {
        sites,
        particles,
        clusters,
        expected,
        pass,
        detail,
    })
}

/// Traces out every site not in `keep`. Bit `j` of the reduced index is the
/// occupation of `keep[j]`.
pub fn partial_trace_sites(
    rho: &DenseOperator,
    basis: &FockBasis,
    keep: &[usize],
) -> DenseOperator {
    let kept_mask: u32 = keep.iter().map(|&s| 1u32 << s).sum();
    let mut groups: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for (idx, &c) in basis.states.iter().enumerate() {
        let block = keep
            .iter()
            .enumerate()
            .map(|(j, &s)| ((c >> s & 1) as usize) << j)
            .sum();
        groups.entry(c & !kept_mask).or_default().push((idx, block));
    }
    let dim = 1usize << keep.len();
    let mut out = DMatrix::zeros(dim, dim);
    for members in groups.values() {
        for &(x, a) in members {
            for &(y, b) in members {
                out[(a, b)] += rho.0[(x, y)];
            }
        }
    }
    DenseOperator(out)
}

/// Reduced density matrix of the first `n` sites (`L - n` last sites traced out).
pub fn partial_trace(rho: &DenseOperator, basis: &FockBasis, n: usize) -> DenseOperator {
    let keep: Vec<usize> = (0..n).collect();
    partial_trace_sites(rho, basis, &keep)
}

/// Eigenvalues of a reduced density matrix of `n` sites, diagonalized one
/// block-particle-number sector at a time. Also returns the largest entry
/// coupling different particle numbers, which must vanish.
pub fn reduced_eigenvalues(rho: &DenseOperator, n: usize) -> (Vec<f64>, f64) {
    let mut by_k: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for c in 0..1usize << n {
        by_k[c.count_ones() as usize].push(c);
    }
    let mut leak: f64 = 0.0;
    for a in 0..rho.dim() {
        for b in 0..rho.dim() {
            if a.count_ones() != b.count_ones() {
                leak = leak.max(rho.0[(a, b)].abs());
            }
        }
    }
    let mut eigs: Vec<f64> = by_k
        .par_iter()
        .flat_map_iter(|idx| {
            let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| rho.0[(idx[i], idx[j])]);
            SymmetricEigen::new(sub)
                .eigenvalues
                .iter()
                .copied()
                .collect::<Vec<_>>()
        })
        .collect();
    eigs.sort_by(f64::total_cmp);
    (eigs, leak)
}

/// `-sum lambda log2 lambda` over positive eigenvalues.
pub fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .collect::<CompensatedSum>()
        .total()
}

/// Outcome of one `(L, N, n, r)` comparison.
#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub sites: usize,
    pub particles: usize,
    pub block: usize,
    pub sector: usize,
    /// `r = min(N, floor(L/2))`, the edge of the range stated for the formula.
    pub boundary: bool,
    pub pass: bool,
    pub max_abs_error: f64,
    pub numeric_count: usize,
    pub analytic_count: usize,
    pub detail: Option<String>,
}

/// Options for [`certify_theorem_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CertifyOptions {
    /// Added to the largest analytic eigenvalue; used to exercise the
    /// failure path.
    pub perturbation: f64,
}

fn nonzero_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.retain(|&x| x.abs() >= ZERO_THRESHOLD);
    v.sort_by(f64::total_cmp);
    v
}

fn compare_case(
    decomposition: &SectorDecomposition,
    block: usize,
    r: usize,
    options: CertifyOptions,
) -> Result<CaseResult> {
    let (l, np) = (decomposition.basis.sites, decomposition.basis.particles);
    let shape = SystemShape::new(l, np, block)?;
    let rho = decomposition.sector_state(r)?;
    let reduced = partial_trace(&rho, &decomposition.basis, block);
    let (numeric, leak) = reduced_eigenvalues(&reduced, block);
    let numeric = nonzero_sorted(numeric);

    let mut analytic = sector_spectrum(&shape, r, Backend::Rational)?.multiset();
    if options.perturbation != 0.0 {
        if let Some(max) = analytic.iter_mut().max_by(|a, b| a.total_cmp(b)) {
            *max += options.perturbation;
        }
    }
    let analytic = nonzero_sorted(analytic);

    let mut detail = None;
    let mut max_abs_error: f64 = 0.0;
    if numeric.len() != analytic.len() {
        detail = Some(format!(
            "{} nonzero numeric eigenvalues vs {} analytic",
            numeric.len(),
            analytic.len()
        ));
        max_abs_error = f64::INFINITY;
    } else {
        for (a, b) in numeric.iter().zip(&analytic) {
            max_abs_error = max_abs_error.max((a - b).abs());
        }
    }
    if leak > ZERO_THRESHOLD {
        detail = Some(format!(
            "reduced matrix mixes block particle numbers ({leak:e})"
        ));
    }
    let pass = detail.is_none() && max_abs_error <= EIGENVALUE_TOLERANCE;
    if !pass && detail.is_none() {
        detail = Some(format!("max eigenvalue deviation {max_abs_error:e}"));
    }
    Ok(CaseResult {
        sites: l,
        particles: np,
        block,
        sector: r,
        boundary: r == np.min(l / 2),
        pass,
        max_abs_error,
        numeric_count: numeric.len(),
        analytic_count: analytic.len(),
        detail,
    })
}

/// Brute-force check of every admissible sector for one `(L, N, n)`.
pub fn certify_theorem(sites: usize, particles: usize, block: usize) -> Result<Vec<CaseResult>> {
    certify_theorem_with(sites, particles, block, CertifyOptions::default())
}

pub fn certify_theorem_with(
    sites: usize,
    particles: usize,
    block: usize,
    options: CertifyOptions,
) -> Result<Vec<CaseResult>> {
    let shape = SystemShape::new(sites, particles, block)?;
    let decomposition = SectorDecomposition::new(sites, particles)?;
    (0..=shape.max_sector())
        .map(|r| compare_case(&decomposition, block, r, options))
        .collect()
}

/// Block entropy of the thermal state computed from dense matrices.
pub fn thermal_oracle(
    sites: usize,
    particles: usize,
    block: usize,
    beta: f64,
    mode: ThermalMode,
) -> Result<f64> {
    SystemShape::new(sites, particles, block)?;
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::domain("beta", beta, "[0, inf]"));
    }
    let d = SectorDecomposition::new(sites, particles)?;
    match mode {
        ThermalMode::EntropyOfMean => {
            let rho = d.gibbs_state(beta);
            let (eigs, _) = reduced_eigenvalues(&partial_trace(&rho, &d.basis, block), block);
            Ok(entropy_bits(&eigs))
        }
        ThermalMode::MeanOfEntropies => {
            // Weights from the numerical cluster energies and multiplicities.
            let e0 = d.clusters[0].value;
            let raw: Vec<f64> = d
                .clusters
                .iter()
                .map(|c| {
                    if beta.is_infinite() {
                        if c.value == e0 {
                            1.0
                        } else {
                            0.0
                        }
                    } else {
                        c.multiplicity as f64 * (-beta * (c.value - e0)).exp()
                    }
                })
                .collect();
            let z: f64 = raw.iter().sum();
            let mut total = CompensatedSum::new();
            for (c, w) in d.clusters.iter().zip(&raw) {
                if *w == 0.0 {
                    continue;
                }
                let cols = d.vectors.select_columns(&c.members);
                let rho = DenseOperator((&cols * cols.transpose()) / c.multiplicity as f64);
                let (eigs, _) = reduced_eigenvalues(&partial_trace(&rho, &d.basis, block), block);
                total.add(w / z * entropy_bits(&eigs));
            }
            Ok(total.total())
        }
    }
}

/// Status of a single validation case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl From<bool> for Status {
    fn from(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCase {
    pub sites: usize,
    pub particles: usize,
    pub status: Status,
    pub clusters: usize,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SumRuleCase {
    pub sites: usize,
    pub particles: usize,
    pub block: usize,
    pub sector: usize,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremCase {
    #[serde(flatten)]
    pub result: CaseResult,
    pub status: Status,
}

/// Everything `validate` checks up to a maximum lattice size.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub max_sites: usize,
    pub passed: bool,
    pub spectrum: Vec<SpectrumCase>,
    pub sum_rules: Vec<SumRuleCase>,
    pub theorem: Vec<TheoremCase>,
}

impl ValidationReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in self.spectrum.iter().filter(|c| c.status == Status::Fail) {
            out.push(format!("spectrum L={} N={}", c.sites, c.particles));
        }
        for c in self.sum_rules.iter().filter(|c| c.status == Status::Fail) {
            out.push(format!(
                "sum rules L={} N={} n={} r={}",
                c.sites, c.particles, c.block, c.sector
            ));
        }
        for c in self.theorem.iter().filter(|c| c.status == Status::Fail) {
            let r = &c.result;
            out.push(format!(
                "theorem L={} N={} n={} r={}: {}",
                r.sites,
                r.particles,
                r.block,
                r.sector,
                r.detail.as_deref().unwrap_or("mismatch")
            ));
        }
        out
    }
}

/// Spectrum of `H` for every `N <= L/2`, sum rules for every `N <= L/2`,
/// and the brute-force certification for every `N` and `1 <= n <= L-1`.
pub fn validate(max_sites: usize, options: CertifyOptions) -> Result<ValidationReport> {
    check_size(max_sites)?;
    let sizes: Vec<(usize, usize)> = (1..=max_sites)
        .flat_map(|l| (0..=l).map(move |np| (l, np)))
        .collect();

    let spectrum = sizes
        .par_iter()
        .filter(|(l, np)| 2 * np <= *l)
        .map(|&(l, np)| {
            let rep = spectrum_check(l, np)?;
            Ok(SpectrumCase {
                sites: l,
                particles: np,
                status: rep.pass.into(),
                clusters: rep.clusters.len(),
                detail: rep.detail,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let rule_cases: Vec<(usize, usize, usize, usize)> = sizes
        .iter()
        .filter(|(l, np)| 2 * np <= *l)
        .flat_map(|&(l, np)| {
            (0..l).flat_map(move |n| (0..=np.min(l - np)).map(move |r| (l, np, n, r)))
        })
        .collect();
    let sum_rules = rule_cases
        .par_iter()
        .map(|&(l, np, n, r)| {
            let rep = verify_sum_rules(&SystemShape::new(l, np, n)?, r)?;
            Ok(SumRuleCase {
                sites: l,
                particles: np,
                block: n,
                sector: r,
                status: rep.passed().into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let theorem_sizes: Vec<(usize, usize, usize)> = sizes
        .iter()
        .flat_map(|&(l, np)| (1..l).map(move |n| (l, np, n)))
        .collect();
    let theorem = theorem_sizes
        .par_iter()
        .map(|&(l, np, n)| certify_theorem_with(l, np, n, options))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .map(|result| TheoremCase {
            status: result.pass.into(),
            result,
        })
        .collect::<Vec<_>>();

    let passed = spectrum.iter().all(|c| c.status == Status::Pass)
        && sum_rules.iter().all(|c| c.status == Status::Pass)
        && theorem.iter().all(|c| c.status == Status::Pass);
    Ok(ValidationReport {
        max_sites,
        passed,
        spectrum,
        sum_rules,
        theorem,
    })
}

/// `C(L, N)`, the dimension of the `N`-particle space, as a double.
pub fn sector_space_dimension(sites: usize, particles: usize) -> f64 {
    binomial(sites as u64, particles as i64)
        .to_f64()
        .unwrap_or(f64::INFINITY)
}

/// Weighted ensemble consistent with [`ensemble_weights`], for cross-checks.
pub fn analytic_weights(sites: usize, particles: usize, beta: f64) -> Result<Vec<f64>> {
    Ok(ensemble_weights(sites, particles, beta)?.weights)
}
