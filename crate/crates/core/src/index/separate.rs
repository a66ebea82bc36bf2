//! Splitting `T(a) + H(b)` into a factor with jumps only at `+-1` and a
//! factor with jumps only away from `+-1`.
//!
//! With `U` a symmetric neighbourhood of `{1, -1}` free of the remaining jumps:
//!
//! * `a0 = a` on `U`, and outside `U` a continuous polygon `c` that runs from
//!   the boundary values of `a` to 1 along `exp(s Log v)` and stays 1 in
//!   between, so `c` never vanishes;
//! * `a1 = a0^{-1} a`;
//! * `b0 = b phi0`, `b1 = b (1 - phi0)` with `phi0` a symmetric trapezoid equal
//!   to 1 near `+-1` and 0 outside `U`.
//!
//! Near every jump one of the two factors is locally the identity, so the
//! symbols multiply exactly and the indices add.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::arcs::Exponent;
use crate::error::{Error, Result};
use crate::multiplier::{angle_dist, CircPoint, PcMultiplier, MERGE_TOL};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Pieces of the ramp from a boundary value to 1.
const RAMP_PIECES: usize = 4;
/// Jumps this close to the boundary of `U` are rejected.
const BOUNDARY_GAP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub a0: PcMultiplier,
    pub b0: PcMultiplier,
    pub a1: PcMultiplier,
    pub b1: PcMultiplier,
    /// Half-width of the arcs of `U` around `1` and `-1`.
    pub half_width: f64,
    pub phi0: PcMultiplier,
}

fn near_ends(t: CircPoint) -> bool {
    angle_dist(t.theta(), 0.0) < MERGE_TOL || angle_dist(t.theta(), PI) < MERGE_TOL
}

/// Waypoints `v^{1 - j/n}`, `j = 0..=n`, from `v` to 1 along the principal log.
fn log_path(v: Complex64, n: usize) -> Vec<Complex64> {
    let lv = v.ln();
    (0..=n)
        .map(|j| (lv * (1.0 - j as f64 / n as f64)).exp())
        .collect()
}

pub fn separate_jumps(a: &PcMultiplier, b: &PcMultiplier, _exp: Exponent) -> Result<Separation> {
    let interior: Vec<CircPoint> = a
        .jump_set()
        .into_iter()
        .chain(b.jump_set())
        .filter(|&t| !near_ends(t))
        .collect();
    if interior.is_empty() {
        return Ok(Separation {
            a0: a.clone(),
            b0: b.clone(),
            a1: PcMultiplier::one(),
            b1: PcMultiplier::zero(),
            half_width: PI / 8.0,
            phi0: PcMultiplier::one(),
        });
    }
    let dist = interior
        .iter()
        .map(|t| angle_dist(t.theta(), 0.0).min(angle_dist(t.theta(), PI)))
        .fold(f64::INFINITY, f64::min);
    let w = (PI / 8.0).min(dist / 2.0);
    if dist - w < BOUNDARY_GAP {
        return Err(Error::Separation(format!(
            "jump at distance {dist:.3e} from +-1 is too close to the separating arcs"
        )));
    }

    let phi0 = PcMultiplier::piecewise_linear(&[
        (-2.0 * w / 3.0, Complex64::new(0.0, 0.0)),
        (-w / 3.0, ONE),
        (w / 3.0, ONE),
        (2.0 * w / 3.0, Complex64::new(0.0, 0.0)),
        (PI - 2.0 * w / 3.0, Complex64::new(0.0, 0.0)),
        (PI - w / 3.0, ONE),
        (PI + w / 3.0, ONE),
        (PI + 2.0 * w / 3.0, Complex64::new(0.0, 0.0)),
    ])?;

    // c on the two arcs of T \ U: ramps of length w/2 at each end
    let ramp = w / 2.0;
    let mut nodes = Vec::new();
    for (lo, hi) in [(w, PI - w), (PI + w, TAU - w)] {
        let start = log_path(a.eval(CircPoint::new(lo)), RAMP_PIECES);
        let end = log_path(a.eval_minus(CircPoint::new(hi)), RAMP_PIECES);
        for (j, z) in start.iter().enumerate() {
            nodes.push((lo + ramp * j as f64 / RAMP_PIECES as f64, *z));
        }
        for (j, z) in end.iter().enumerate().rev() {
            nodes.push((hi - ramp * j as f64 / RAMP_PIECES as f64, *z));
        }
    }
    for pair in nodes.windows(2) {
        // a chord through the origin would make c vanish
        let (z0, z1) = (pair[0].1, pair[1].1);
        if z0.norm() == 0.0 || z1.norm() == 0.0 || (z1 / z0).arg().abs() >= PI - 1e-12 {
            return Err(Error::Separation(format!(
                "interpolant vanishes on the arc near angle {:.6}",
                pair[0].0
            )));
        }
    }
    let c = PcMultiplier::piecewise_linear(&nodes)?;

    let in_u = PcMultiplier::indicator(-w, w)?.add(&PcMultiplier::indicator(PI - w, PI + w)?)?;
    let out_u = PcMultiplier::one().sub(&in_u)?;
    let a0 = a.mul(&in_u)?.add(&c.mul(&out_u)?)?;
    let a1 = a0.inverse()?.mul(a)?;
    let b0 = b.mul(&phi0)?;
    let b1 = b.mul(&PcMultiplier::one().sub(&phi0)?)?;
    Ok(Separation {
        a0,
        b0,
        a1,
        b1,
        half_width: w,
        phi0,
    })
}
