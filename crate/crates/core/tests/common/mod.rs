//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thindex::arcs::Exponent;
use thindex::multiplier::PcMultiplier;
use thindex::oracle::BandedSpec;

/// Jumps are drawn from multiples of `pi / GRID_DIV`.
pub const GRID_DIV: usize = 63;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn exp(p: f64) -> Exponent {
    Exponent::new(p).unwrap()
}

pub fn unit_box(r: &mut impl Rng) -> Complex64 {
    Complex64::new(r.gen_range(-1.0..=1.0), r.gen_range(-1.0..=1.0))
}

/// Modulus in `[0.5, 2]`, any argument.
pub fn nonzero(r: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(r.gen_range(0.5..=2.0), r.gen_range(-PI..PI))
}

pub fn grid_angle(j: usize) -> f64 {
    PI * j as f64 / GRID_DIV as f64
}

/// `k` distinct grid angles from `pool`, sorted.
pub fn pick_angles(r: &mut impl Rng, pool: &[usize], k: usize) -> Vec<f64> {
    let mut js: Vec<usize> = pool.choose_multiple(r, k).copied().collect();
    js.sort_unstable();
    js.into_iter().map(grid_angle).collect()
}

/// All grid indices on the circle.
pub fn full_pool() -> Vec<usize> {
    (0..2 * GRID_DIV).collect()
}

/// Grid indices away from `+-1`.
pub fn interior_pool() -> Vec<usize> {
    (0..2 * GRID_DIV).filter(|&j| j % GRID_DIV != 0).collect()
}

/// Step function with values from `value` on `k` pieces cut at `angles`.
pub fn steps_at(angles: &[f64], mut value: impl FnMut() -> Complex64) -> PcMultiplier {
    let steps: Vec<(f64, Complex64)> = angles.iter().map(|&a| (a, value())).collect();
    PcMultiplier::steps(&steps).unwrap()
}

/// Piecewise constant with at most `max_jumps` jumps on the grid.
pub fn random_steps(
    r: &mut ChaCha8Rng,
    max_jumps: usize,
    pool: &[usize],
    small: bool,
) -> PcMultiplier {
    let k = r.gen_range(1..=max_jumps.max(1));
    let angles = pick_angles(r, pool, k);
    let mut vals = Vec::with_capacity(k);
    for _ in 0..k {
        vals.push(if small { unit_box(r) * 0.5 } else { nonzero(r) });
    }
    let mut it = vals.into_iter();
    steps_at(&angles, || it.next().unwrap())
}

/// Laurent polynomial with span at most `max_degree` and coefficients in
/// the unit box.
pub fn random_laurent(r: &mut ChaCha8Rng, max_degree: usize) -> BandedSpec {
    let d = r.gen_range(0..=max_degree);
    let lowest = -(r.gen_range(0..=d) as i32);
    let coeffs = (0..=d).map(|_| unit_box(r)).collect();
    BandedSpec::new(lowest, coeffs).unwrap()
}

/// Smallest `|a|` on a fine circle grid relative to the coefficient sum.
/// Small values mean a root close to the circle.
pub fn min_circle_modulus(spec: &BandedSpec) -> f64 {
    let c: Vec<Complex64> = (spec.lowest()..=spec.highest())
        .map(|k| spec.coeff(k))
        .collect();
    if c.len() < 2 {
        return f64::INFINITY;
    }
    let n = 4096;
    let scale: f64 = c.iter().map(|x| x.norm()).sum();
    (0..n)
        .map(|j| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
            c.iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, ci| acc * z + ci)
                .norm()
                / scale
        })
        .fold(f64::INFINITY, f64::min)
}

/// Total change of argument along the closed polyline, in turns.
pub fn turns(values: &[Complex64]) -> f64 {
    let n = values.len();
    let mut total = 0.0;
    for k in 0..n {
        total += (values[(k + 1) % n] / values[k]).arg();
    }
    total / (2.0 * PI)
}
