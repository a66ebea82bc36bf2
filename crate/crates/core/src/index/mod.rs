//! Index formulas through winding numbers of normalized symbol curves.
//!
//! On the half-cylinder the curve function is
//!
//! ```text
//! W(t, l) = det smb(t, l) / (det a22(t, +inf) det a22(t, -inf))    t in T+ \ {+-1}
//! W(+-1, l) = det smb(+-1, l) / det smb(+-1, -+inf)
//! ```
//!
//! traversed as: `lambda` sweep at 1, the upper half-circle counter-clockwise
//! with a `lambda` sweep at every jump (or conjugate of a jump), then the
//! `lambda` sweep at -1. The curve starts and ends at 1 and the index is minus
//! its winding number.

mod separate;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{
    full_circle_plan, half_circle_plan, is_fredholm, scan_plan, sided_pair, ArcValues,
    FredholmVerdict, Fredholmness, Generator, MatrixGenerator, OperatorExpr, Resolution, Site,
    Sweep, SymbolSource,
};
use crate::arcs::{CompactReal, Exponent};
use crate::error::{Error, Result};
use crate::multiplier::{CircPoint, PcMultiplier, Probe};

pub use separate::{separate_jumps, Separation};

/// Steps with a larger argument change are bisected.
pub const MAX_ARG_STEP: f64 = PI / 3.0;
pub const MAX_REFINE_DEPTH: usize = 40;
/// `min |W| < NEAR_ZERO_REL * max |W|` counts as passing through the origin.
pub const NEAR_ZERO_REL: f64 = 1e-8;
pub const INTEGER_TOL: f64 = 1e-6;
pub const JUNCTION_TOL: f64 = 1e-6;
pub const CLOSURE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    LambdaSweep,
    TSweep,
}

impl SegmentKind {
    pub fn label(self) -> &'static str {
        match self {
            SegmentKind::LambdaSweep => "lambda",
            SegmentKind::TSweep => "t",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub theta: f64,
    /// `None` on `t` sweeps, where `W` does not depend on `lambda`.
    pub lambda: Option<CompactReal>,
    pub w: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSegment {
    pub kind: SegmentKind,
    pub samples: Vec<CurveSample>,
}

/// Samples of `W` in traversal order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedCurve {
    pub segments: Vec<CurveSegment>,
    /// Largest gap between the end of a segment and the start of the next.
    pub max_junction_gap: f64,
    pub closed: bool,
}

impl OrientedCurve {
    /// A synthetic curve from bare values, as one `t` segment.
    pub fn from_values(values: &[Complex64]) -> OrientedCurve {
        let samples = values
            .iter()
            .enumerate()
            .map(|(i, &w)| CurveSample {
                theta: i as f64,
                lambda: None,
                w,
            })
            .collect();
        let closed = match (values.first(), values.last()) {
            (Some(a), Some(b)) => (a - b).norm() <= CLOSURE_TOL * a.norm().max(1.0),
            _ => true,
        };
        OrientedCurve {
            segments: vec![CurveSegment {
                kind: SegmentKind::TSweep,
                samples,
            }],
            max_junction_gap: 0.0,
            closed,
        }
    }

    pub fn values(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.segments
            .iter()
            .flat_map(|s| s.samples.iter().map(|p| p.w))
    }

    pub fn len(&self) -> usize {
        self.segments.iter().map(|s| s.samples.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first(&self) -> Option<Complex64> {
        self.values().next()
    }

    pub fn last(&self) -> Option<Complex64> {
        self.segments
            .last()
            .and_then(|s| s.samples.last())
            .map(|p| p.w)
    }

    pub fn min_modulus(&self) -> f64 {
        self.values()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Winding number of a closed polyline around the origin.
pub fn winding(curve: &OrientedCurve) -> Result<i64> {
    let values: Vec<Complex64> = curve.values().collect();
    winding_of_values(&values)
}

/// Winding number of the closed polyline through `values`.
pub fn winding_of_values(values: &[Complex64]) -> Result<i64> {
    if values.is_empty() {
        return Ok(0);
    }
    let max = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min = values
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() || !max.is_finite() || min <= NEAR_ZERO_REL * max {
        return Err(Error::CurveNearOrigin(min));
    }
    let mut total = 0.0;
    for pair in values.windows(2) {
        total += (pair[1] / pair[0]).arg();
    }
    // close the polyline
    total += (values[0] / values[values.len() - 1]).arg();
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > INTEGER_TOL {
        return Err(Error::NonIntegerWinding(turns));
    }
    Ok(rounded as i64)
}

/// Result of an index computation.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexReport {
    pub fredholm: bool,
    pub verdict: FredholmVerdict,
    pub winding: Option<i64>,
    pub index: Option<i64>,
    pub min_modulus: f64,
    pub samples: usize,
}

impl IndexReport {
    fn not_fredholm(verdict: FredholmVerdict) -> IndexReport {
        IndexReport {
            fredholm: false,
            verdict,
            winding: None,
            index: None,
            min_modulus: verdict.min_abs_det,
            samples: 0,
        }
    }

    fn from_curve(verdict: FredholmVerdict, curve: &OrientedCurve) -> Result<IndexReport> {
        let w = winding(curve)?;
        Ok(IndexReport {
            fredholm: true,
            verdict,
            winding: Some(w),
            index: Some(-w),
            min_modulus: curve.min_modulus(),
            samples: curve.len(),
        })
    }
}

fn arg_step(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg().abs()
}

fn refine<F: Fn(f64) -> Complex64>(
    f: &F,
    a: (f64, Complex64),
    b: (f64, Complex64),
    depth: usize,
    out: &mut Vec<(f64, Complex64)>,
) {
    let bad = !(a.1.norm() > 0.0 && b.1.norm() > 0.0) || arg_step(a.1, b.1) >= MAX_ARG_STEP;
    if depth < MAX_REFINE_DEPTH && bad {
        let m = 0.5 * (a.0 + b.0);
        let mid = (m, f(m));
        refine(f, a, mid, depth + 1, out);
        refine(f, mid, b, depth + 1, out);
    } else {
        out.push(b);
    }
}

fn trace_sweep<F>(sweep: &Sweep, res: Resolution, w: &F) -> CurveSegment
where
    F: Fn(Site, CompactReal) -> Complex64,
{
    let eval = |u: f64| {
        let (site, l) = sweep.locate(u);
        w(site, l)
    };
    let grid = sweep.grid(res);
    let mut pts = Vec::with_capacity(grid.len());
    let mut prev = (grid[0], eval(grid[0]));
    pts.push(prev);
    for &u in &grid[1..] {
        let next = (u, eval(u));
        refine(&eval, prev, next, 0, &mut pts);
        prev = next;
    }
    let (kind, samples) = match sweep {
        Sweep::Lambda { site } => (
            SegmentKind::LambdaSweep,
            pts.into_iter()
                .map(|(u, w)| CurveSample {
                    theta: site.theta(),
                    lambda: Some(CompactReal::from_unit(u)),
                    w,
                })
                .collect(),
        ),
        Sweep::Arc { .. } => (
            SegmentKind::TSweep,
            pts.into_iter()
                .map(|(th, w)| CurveSample {
                    theta: th,
                    lambda: None,
                    w,
                })
                .collect(),
        ),
    };
    CurveSegment { kind, samples }
}

/// Traces every sweep of the plan and checks the junctions and closure.
pub fn trace_plan<F>(plan: &[Sweep], res: Resolution, w: F) -> Result<OrientedCurve>
where
    F: Fn(Site, CompactReal) -> Complex64,
{
    let segments: Vec<CurveSegment> = plan.iter().map(|s| trace_sweep(s, res, &w)).collect();
    let mut gap = 0.0f64;
    for (i, pair) in segments.windows(2).enumerate() {
        let end = pair[0].samples.last().expect("nonempty segment");
        let start = pair[1].samples[0];
        let d = (end.w - start.w).norm() / end.w.norm().max(1.0);
        // NaN counts as a mismatch
        if d.is_nan() || d > JUNCTION_TOL {
            return Err(Error::JunctionMismatch {
                location: format!(
                    "between segments {i} and {} near angle {:.6}",
                    i + 1,
                    start.theta
                ),
                gap: d,
            });
        }
        gap = gap.max(d);
    }
    let curve = OrientedCurve {
        segments,
        max_junction_gap: gap,
        closed: true,
    };
    let (first, last) = (
        curve.first().unwrap_or(Complex64::new(1.0, 0.0)),
        curve.last().unwrap_or(Complex64::new(1.0, 0.0)),
    );
    let one = Complex64::new(1.0, 0.0);
    if !((first - one).norm() <= CLOSURE_TOL && (last - one).norm() <= CLOSURE_TOL) {
        return Err(Error::JunctionMismatch {
            location: "curve ends (expected 1 at both)".into(),
            gap: (first - one).norm().max((last - one).norm()),
        });
    }
    Ok(curve)
}

/// `W` of a half-cylinder symbol at an arbitrary site.
pub struct HalfCurveFunction<'a, S: SymbolSource + ?Sized> {
    src: &'a S,
    exp: Exponent,
    at_plus_one: Complex64,
    at_minus_one: Complex64,
}

impl<'a, S: SymbolSource + ?Sized> HalfCurveFunction<'a, S> {
    pub fn new(src: &'a S, exp: Exponent) -> Self {
        HalfCurveFunction {
            src,
            exp,
            at_plus_one: src.symbol_det(exp, Site::Endpoint(CircPoint::ONE), CompactReal::NegInf),
            at_minus_one: src.symbol_det(
                exp,
                Site::Endpoint(CircPoint::MINUS_ONE),
                CompactReal::PosInf,
            ),
        }
    }

    pub fn eval(&self, site: Site, lambda: CompactReal) -> Complex64 {
        let det = self.src.symbol_det(self.exp, site, lambda);
        match site {
            Site::Endpoint(t) if t.is_minus_one() => det / self.at_minus_one,
            Site::Endpoint(_) => det / self.at_plus_one,
            Site::Interior(probe) => {
                let hi = self
                    .src
                    .lower_block_det(self.exp, probe, CompactReal::PosInf);
                let lo = self
                    .src
                    .lower_block_det(self.exp, probe, CompactReal::NegInf);
                det / (hi * lo)
            }
        }
    }
}

/// `W(t, lambda)` for `t` on the closed upper half-circle.
pub fn w_value<S: SymbolSource + ?Sized>(
    src: &S,
    exp: Exponent,
    t: CircPoint,
    lambda: CompactReal,
) -> Result<Complex64> {
    let site = crate::algebra::site_of(t)?;
    Ok(HalfCurveFunction::new(src, exp).eval(site, lambda))
}

fn not_fredholm_error(v: &FredholmVerdict) -> Error {
    Error::NotFredholm {
        theta: v.witness.0,
        lambda: v.witness.1.to_string(),
    }
}

/// The curve `W` over the half-cylinder. Fails unless the symbol is
/// invertible.
pub fn build_w<S: SymbolSource + ?Sized>(
    src: &S,
    exp: Exponent,
    res: Resolution,
) -> Result<OrientedCurve> {
    let v = is_fredholm(src, exp, res);
    if v.status != Fredholmness::Yes {
        return Err(not_fredholm_error(&v));
    }
    trace_half(src, exp, res)
}

fn trace_half<S: SymbolSource + ?Sized>(
    src: &S,
    exp: Exponent,
    res: Resolution,
) -> Result<OrientedCurve> {
    let plan = half_circle_plan(&src.jump_points());
    let f = HalfCurveFunction::new(src, exp);
    trace_plan(&plan, res, |site, l| f.eval(site, l))
}

/// Index and curve of any half-cylinder symbol source.
pub fn index_with_curve<S: SymbolSource + ?Sized>(
    src: &S,
    exp: Exponent,
    res: Resolution,
) -> Result<(IndexReport, Option<OrientedCurve>)> {
    let v = is_fredholm(src, exp, res);
    if v.status != Fredholmness::Yes {
        return Ok((IndexReport::not_fredholm(v), None));
    }
    let curve = trace_half(src, exp, res)?;
    Ok((IndexReport::from_curve(v, &curve)?, Some(curve)))
}

/// `ind A = -wind W(A)` over the upper half-circle.
pub fn index_th(e: &OperatorExpr, exp: Exponent, res: Resolution) -> Result<IndexReport> {
    index_with_curve(e, exp, res).map(|r| r.0)
}

/// Same as [`index_th`] for any block system, e.g. a linear extension.
pub fn index_system<S: SymbolSource + ?Sized>(
    src: &S,
    exp: Exponent,
    res: Resolution,
) -> Result<IndexReport> {
    index_with_curve(src, exp, res).map(|r| r.0)
}

/// Traces a full-circle function, normalized to start at 1.
fn full_circle_index<F>(
    jumps: &[CircPoint],
    res: Resolution,
    det: F,
    w: F,
) -> Result<(IndexReport, Option<OrientedCurve>)>
where
    F: Fn(Site, CompactReal) -> Complex64,
{
    let plan = full_circle_plan(jumps);
    let v = scan_plan(&plan, res, &det);
    if v.status != Fredholmness::Yes {
        return Ok((IndexReport::not_fredholm(v), None));
    }
    let (site, l) = plan[0].locate(plan[0].bounds().0);
    let start = w(site, l);
    let curve = trace_plan(&plan, res, |site, l| w(site, l) / start)?;
    Ok((IndexReport::from_curve(v, &curve)?, Some(curve)))
}

fn probe_of(site: Site) -> Probe {
    match site {
        Site::Interior(p) => p,
        Site::Endpoint(t) => Probe {
            point: t,
            side: crate::multiplier::Side::Exact,
        },
    }
}

/// Index of `T(a)` from the full-circle curve
/// `a(t-) (1 - mu_q) + a(t+) mu_q` with arcs filled in at the jumps.
pub fn index_toeplitz_circle(
    a: &PcMultiplier,
    exp: Exponent,
    res: Resolution,
) -> Result<IndexReport> {
    toeplitz_circle_with_curve(a, exp, res).map(|r| r.0)
}

pub fn toeplitz_circle_with_curve(
    a: &PcMultiplier,
    exp: Exponent,
    res: Resolution,
) -> Result<(IndexReport, Option<OrientedCurve>)> {
    let gamma = |site: Site, l: CompactReal| {
        let ArcValues { mu, .. } = ArcValues::new(exp, l);
        let (plus, minus) = sided_pair(a, probe_of(site));
        minus * (Complex64::new(1.0, 0.0) - mu) + plus * mu
    };
    full_circle_index(&a.jump_set(), res, gamma, gamma)
}

/// Index of `L(a) diag P + L(b) diag Q` from
/// `det smb / (det a22(t, +inf) det a22(t, -inf))` over the full circle.
pub fn index_matrix_op(g: &MatrixGenerator, exp: Exponent, res: Resolution) -> Result<IndexReport> {
    matrix_op_with_curve(g, exp, res).map(|r| r.0)
}

pub fn matrix_op_with_curve(
    g: &MatrixGenerator,
    exp: Exponent,
    res: Resolution,
) -> Result<(IndexReport, Option<OrientedCurve>)> {
    let k = g.size();
    let lower = |m: &DMatrix<Complex64>| m.view((k, k), (k, k)).determinant();
    let det = |site: Site, l: CompactReal| g.symbol(exp, probe_of(site), l).determinant();
    let w = |site: Site, l: CompactReal| {
        let p = probe_of(site);
        let full = g.symbol(exp, p, l).determinant();
        let hi = lower(&g.symbol(exp, p, CompactReal::PosInf));
        let lo = lower(&g.symbol(exp, p, CompactReal::NegInf));
        full / (hi * lo)
    };
    // the two closures have distinct types; box them behind one signature
    let det: Box<dyn Fn(Site, CompactReal) -> Complex64> = Box::new(det);
    let w: Box<dyn Fn(Site, CompactReal) -> Complex64> = Box::new(w);
    full_circle_index(&g.jump_points(), res, det, w)
}

/// The 2x2 matrix operator whose index is twice that of `T(a) + H(b)`:
/// `alpha = [[a, 0], [b~, 1]]`, `beta = [[1, b], [0, a~]]`.
pub fn doubled_matrix_of(g: &Generator) -> MatrixGenerator {
    let one = PcMultiplier::one;
    let zero = PcMultiplier::zero;
    MatrixGenerator::new(
        2,
        vec![g.a.clone(), zero(), g.b.reflect_tilde(), one()],
        vec![one(), g.b.clone(), zero(), g.a.reflect_tilde()],
    )
    .expect("2x2 by construction")
}
