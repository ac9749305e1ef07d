//! Reference values from an independent 50-digit evaluation.

use hcb_entropy::finite::{thermal_block_entropy, ThermalMode};
use hcb_entropy::thermo::{critical_temperature, limit_block_entropy, mu_star};
use hcb_entropy::{Backend, SystemShape};

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol * b.abs().max(1.0), "{a} vs {b}");
}

#[test]
fn thermodynamics() {
    close(
        critical_temperature(0.2).unwrap(),
        0.432_808_512_266_689,
        1e-14,
    );
    close(critical_temperature(0.5).unwrap(), 0.5, 1e-15);
    let beta = 1.0 / (0.5 * critical_temperature(0.3).unwrap());
    close(
        mu_star(beta, 0.3).unwrap(),
        0.016_332_994_079_770_875,
        1e-12,
    );
}

#[test]
fn limit_entropies() {
    close(
        limit_block_entropy(0.3, 0.18, 50).unwrap(),
        36.516_114_004_740_054,
        1e-12,
    );
    close(
        limit_block_entropy(0.4, 0.2, 20).unwrap(),
        16.427_300_331_148_04,
        1e-12,
    );
    close(
        limit_block_entropy(0.2, 0.0, 30).unwrap(),
        3.168_150_472_120_730_8,
        1e-12,
    );
}

#[test]
fn finite_thermal_entropies() {
    let mode = ThermalMode::EntropyOfMean;
    for backend in [Backend::Rational, Backend::LogFloat] {
        let s = thermal_block_entropy(&SystemShape::new(50, 10, 6).unwrap(), 1.0, mode, backend);
        close(s.unwrap(), 4.322_398_770_696_55, 1e-12);
        let s = thermal_block_entropy(&SystemShape::new(20, 7, 4).unwrap(), 0.5, mode, backend);
        close(s.unwrap(), 3.721_141_244_535_113, 1e-12);
    }
}
