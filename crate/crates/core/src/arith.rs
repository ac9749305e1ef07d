//! Exact and log-space combinatorial arithmetic.
//!
//! Finite-size eigenvalues are alternating sums of binomial ratios, so they
//! are evaluated exactly in [`ExactRational`]. Large-L sweeps and the
//! thermodynamic-limit sums work with [`LogWeight`] and natural-log
//! magnitudes instead.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Arithmetic used to evaluate finite-size eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Exact big-rational evaluation; immune to cancellation.
    Rational,
    /// Log-magnitude terms with compensated summation.
    LogFloat,
}

impl Backend {
    /// Rational up to `L = 200`, log-float above.
    pub fn default_for(l: usize) -> Self {
        if l <= 200 {
            Backend::Rational
        } else {
            Backend::LogFloat
        }
    }
}

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        // Ratio::new reduces and moves the sign to the numerator.
        ExactRational(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn from_integer(v: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Nearest double. Values below the subnormal range round to zero.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            let l = self.ln_abs();
            self.sign() as f64 * l.exp()
        })
    }

    pub fn sign(&self) -> i8 {
        if self.0.is_zero() {
            0
        } else if self.0.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Natural log of |value|, valid far outside the f64 range.
    pub fn ln_abs(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_biguint(self.0.numer().magnitude()) - ln_biguint(self.0.denom().magnitude())
    }

    pub fn to_log_weight(&self) -> LogWeight {
        LogWeight::from_parts(self.sign(), self.ln_abs())
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl fmt::Display for ExactRational {
    /// Always `num/den`, including integers (`1/1`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::ops::Add for &ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul for &ExactRational {
    type Output = ExactRational;
    fn mul(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 * &rhs.0)
    }
}

impl std::ops::Div for &ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: Self) -> ExactRational {
        ExactRational(&self.0 / &rhs.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        ExactRational(iter.fold(BigRational::zero(), |acc, x| acc + x.0))
    }
}

/// A signed quantity stored as `sign · exp(ln_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogWeight {
    sign: i8,
    ln_abs: f64,
}

impl LogWeight {
    /// Magnitude carried by zero.
    pub const LN_ZERO: f64 = f64::NEG_INFINITY;

    pub const ZERO: LogWeight = LogWeight {
        sign: 0,
        ln_abs: Self::LN_ZERO,
    };

    pub const ONE: LogWeight = LogWeight {
        sign: 1,
        ln_abs: 0.0,
    };

    /// A positive weight with the given natural-log magnitude.
    pub fn from_ln(ln_abs: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogWeight { sign: 1, ln_abs }
        }
    }

    pub fn from_parts(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogWeight {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LogWeight {
                sign: if v < 0.0 { -1 } else { 1 },
                ln_abs: v.abs().ln(),
            }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn ln_abs(&self) -> f64 {
        self.ln_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.sign as f64 * self.ln_abs.exp()
        }
    }
}

impl std::ops::Mul for LogWeight {
    type Output = LogWeight;
    fn mul(self, rhs: LogWeight) -> LogWeight {
        LogWeight::from_parts(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl std::ops::Div for LogWeight {
    type Output = LogWeight;
    fn div(self, rhs: LogWeight) -> LogWeight {
        assert!(!rhs.is_zero(), "division by a zero LogWeight");
        LogWeight::from_parts(self.sign * rhs.sign, self.ln_abs - rhs.ln_abs)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Natural log of a nonnegative big integer (`-inf` for zero).
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `C(a, b)`, zero when `b < 0` or `b > a`.
pub fn binomial(a: u64, b: i64) -> BigUint {
    if b < 0 || b as u64 > a {
        return BigUint::zero();
    }
    let b = (b as u64).min(a - b as u64);
    let mut acc = BigUint::one();
    for i in 1..=b {
        acc *= a - b + i;
        acc /= i;
    }
    acc
}

/// Signed variant of [`binomial`] for use in rational expressions.
pub fn binomial_int(a: u64, b: i64) -> BigInt {
    BigInt::from(binomial(a, b))
}

const LN_FACTORIAL_TABLE: usize = 4096;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut acc = CompensatedSum::new();
        table.push(0.0);
        for i in 1..LN_FACTORIAL_TABLE {
            acc.add((i as f64).ln());
            table.push(acc.total());
        }
        table
    })
}

/// `ln(a!)`.
pub fn ln_factorial(a: u64) -> f64 {
    if (a as usize) < LN_FACTORIAL_TABLE {
        ln_factorial_table()[a as usize]
    } else {
        statrs::function::gamma::ln_gamma(a as f64 + 1.0)
    }
}

/// Natural log of `C(a, b)` as a [`LogWeight`]; zero outside `0..=a`.
pub fn log_binomial(a: u64, b: i64) -> LogWeight {
    if b < 0 || b as u64 > a {
        return LogWeight::ZERO;
    }
    let b = b as u64;
    if b == 0 || b == a {
        return LogWeight::ONE;
    }
    let short = b.min(a - b);
    if a as usize >= LN_FACTORIAL_TABLE && short <= 64 {
        // Subtracting two huge log-factorials would cancel.
        let s: CompensatedSum = (1..=short)
            .map(|i| ((a - short + i) as f64 / i as f64).ln())
            .collect();
        return LogWeight::from_ln(s.total());
    }
    LogWeight::from_ln(ln_factorial(a) - ln_factorial(b) - ln_factorial(a - b))
}

/// Shannon entropy of a Bernoulli(x) variable in bits, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("x", x, "[0, 1]"));
    }
    Ok(-xlog2x(x) - xlog2x(1.0 - x))
}

pub(crate) fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `2F1(-a, -b; 1; eta) = sum_i C(a,i) C(b,i) eta^i`.
pub fn terminating_2f1(a: u64, b: u64, eta: f64) -> Result<f64> {
    Ok(ln_terminating_2f1(a, b, eta)?.exp())
}

/// Natural log of [`terminating_2f1`]; usable when the sum overflows f64.
///
/// All terms are positive so the sum is assembled by log-sum-exp over
/// terms generated with the ratio recurrence
/// `t_{i+1}/t_i = (a-i)(b-i) eta / (i+1)^2`.
pub fn ln_terminating_2f1(a: u64, b: u64, eta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain("eta", eta, "[0, 1]"));
    }
    let m = a.min(b);
    if eta == 0.0 || m == 0 {
        return Ok(0.0);
    }
    if eta == 1.0 {
        // Vandermonde.
        return Ok(log_binomial(a + b, a as i64).ln_abs());
    }
    let ln_eta = eta.ln();
    let mut ln_terms = Vec::with_capacity(m as usize + 1);
    let mut lt = 0.0;
    ln_terms.push(lt);
    for i in 0..m {
        let num = ((a - i) as f64) * ((b - i) as f64);
        let den = ((i + 1) as f64) * ((i + 1) as f64);
        lt += (num / den).ln() + ln_eta;
        ln_terms.push(lt);
    }
    Ok(log_sum_exp(&ln_terms))
}

/// `ln(sum_i exp(x_i))`; `-inf` for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    let s: CompensatedSum = xs.iter().map(|x| (x - max).exp()).collect();
    max + s.total().ln()
}
