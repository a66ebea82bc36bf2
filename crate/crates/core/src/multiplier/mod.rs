//! Piecewise continuous multipliers on the unit circle.
//!
//! A multiplier is either a trigonometric polynomial, or a cover of the circle
//! by half-open arcs `[start, start + len)` carrying rational expressions
//! `num / den` in `exp(i theta)` and the local variable `s = theta - start`.
//! Every function in this class has bounded variation on each arc, so by the
//! Stechkin inequality it is a multiplier on every `l^p`.
//!
//! One-sided limits are read off the representation: `a(t+)` is the value of
//! the arc starting at `t` (or containing it), `a(t-)` the limit at the end of
//! the arc ending at `t`.

mod poly;
mod quad;

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;

pub use poly::{Poly, TermList};

use crate::error::{Error, Result};

/// Breakpoints closer than this are the same point.
pub const MERGE_TOL: f64 = 1e-9;
/// Relative size of a one-sided limit difference that counts as a jump.
pub const JUMP_TOL: f64 = 1e-12;
pub const DEGREE_CAP: usize = 16;
pub const TERM_CAP: usize = 64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if TAU - r < 1e-12 {
        0.0
    } else {
        r
    }
}

/// Distance between two angles along the circle.
pub fn angle_dist(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

/// A point `exp(i theta)` of the unit circle, `theta` in `[0, 2pi)`.
#[derive(Debug, Clone, Copy)]
pub struct CircPoint {
    theta: f64,
}

impl CircPoint {
    pub const ONE: CircPoint = CircPoint { theta: 0.0 };
    pub const MINUS_ONE: CircPoint = CircPoint { theta: PI };

    pub fn new(theta: f64) -> CircPoint {
        CircPoint {
            theta: normalize_angle(theta),
        }
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn value(self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// Complex conjugate `1/t`.
    pub fn conj(self) -> CircPoint {
        CircPoint::new(-self.theta)
    }

    /// `-t`.
    pub fn rotate_half(self) -> CircPoint {
        CircPoint::new(self.theta + PI)
    }

    /// Closed upper half-circle, including `+-1`.
    pub fn in_upper_half(self) -> bool {
        self.theta <= PI + 1e-12 || TAU - self.theta < 1e-12
    }

    pub fn is_plus_one(self) -> bool {
        angle_dist(self.theta, 0.0) < 1e-12
    }

    pub fn is_minus_one(self) -> bool {
        angle_dist(self.theta, PI) < 1e-12
    }
}

impl PartialEq for CircPoint {
    fn eq(&self, other: &Self) -> bool {
        angle_dist(self.theta, other.theta) < 1e-12
    }
}

impl fmt::Display for CircPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(i*{:.6})", self.theta)
    }
}

/// How a point is approached when reading a multiplier there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The point itself; only meaningful at continuity points.
    Exact,
    /// Limit from below, i.e. counter-clockwise towards the point: `a(t-)`.
    Below,
    /// Limit from above: `a(t+)`.
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub point: CircPoint,
    pub side: Side,
}

impl Probe {
    pub fn exact(theta: f64) -> Probe {
        Probe {
            point: CircPoint::new(theta),
            side: Side::Exact,
        }
    }

    pub fn below(theta: f64) -> Probe {
        Probe {
            point: CircPoint::new(theta),
            side: Side::Below,
        }
    }

    pub fn above(theta: f64) -> Probe {
        Probe {
            point: CircPoint::new(theta),
            side: Side::Above,
        }
    }

    /// The mirrored approach to `1/t`: conjugation reverses orientation.
    pub fn conj(self) -> Probe {
        let side = match self.side {
            Side::Exact => Side::Exact,
            Side::Below => Side::Above,
            Side::Above => Side::Below,
        };
        Probe {
            point: self.point.conj(),
            side,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm {
    pub k: i32,
    pub c: Complex64,
}

/// One arc of a piecewise multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    start: f64,
    len: f64,
    num: TermList,
    den: TermList,
}

impl Piece {
    pub fn new(start: f64, len: f64, num: TermList) -> Piece {
        Piece::rational(start, len, num, TermList::one())
    }

    pub fn rational(start: f64, len: f64, num: TermList, den: TermList) -> Piece {
        Piece {
            start: normalize_angle(start),
            len,
            num,
            den,
        }
        .normalized()
    }

    pub fn constant(start: f64, len: f64, c: Complex64) -> Piece {
        Piece::new(start, len, TermList::constant(c))
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn len(&self) -> f64 {
        self.len
    }

    pub fn end(&self) -> f64 {
        normalize_angle(self.start + self.len)
    }

    pub fn numerator(&self) -> &TermList {
        &self.num
    }

    pub fn denominator(&self) -> &TermList {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Value at local parameter `s` in `[0, len]`.
    pub fn at(&self, s: f64) -> Complex64 {
        let theta = self.start + s;
        let n = self.num.eval(theta, s);
        if self.den.is_one() {
            n
        } else {
            n / self.den.eval(theta, s)
        }
    }

    fn contains(&self, theta: f64) -> bool {
        normalize_angle(theta - self.start) < self.len
    }

    /// Restriction to `[start + offset, start + offset + len)`.
    fn sub(&self, offset: f64, len: f64) -> Piece {
        Piece {
            start: normalize_angle(self.start + offset),
            len,
            num: self.num.shift(offset),
            den: self.den.shift(offset),
        }
    }

    /// Folds a monomial denominator into the numerator.
    fn normalized(mut self) -> Piece {
        if !self.den.is_one() {
            if let Some((k, c)) = self.den.as_monomial() {
                if c != ZERO {
                    self.num = self.num.shift_frequency(-k).scale(ONE / c);
                    self.den = TermList::one();
                }
            }
        }
        self
    }

    fn check_caps(&self) -> Result<()> {
        for tl in [&self.num, &self.den] {
            if tl.len() > TERM_CAP {
                return Err(Error::CapExceeded {
                    what: "term",
                    cap: TERM_CAP,
                    got: tl.len(),
                });
            }
            if tl.max_degree() > DEGREE_CAP {
                return Err(Error::CapExceeded {
                    what: "degree",
                    cap: DEGREE_CAP,
                    got: tl.max_degree(),
                });
            }
        }
        Ok(())
    }
}

/// A piecewise continuous multiplier. Either pure trigonometric (no pieces)
/// or piecewise with the trigonometric part folded into the pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct PcMultiplier {
    trig: Vec<TrigTerm>,
    pieces: Vec<Piece>,
}

impl Default for PcMultiplier {
    fn default() -> Self {
        PcMultiplier::zero()
    }
}

impl PcMultiplier {
    pub fn zero() -> PcMultiplier {
        PcMultiplier {
            trig: Vec::new(),
            pieces: Vec::new(),
        }
    }

    pub fn one() -> PcMultiplier {
        PcMultiplier::constant(ONE)
    }

    pub fn constant(c: Complex64) -> PcMultiplier {
        PcMultiplier::trig(&[(0, c)])
    }

    /// `t^k`.
    pub fn monomial(k: i32) -> PcMultiplier {
        PcMultiplier::trig(&[(k, ONE)])
    }

    /// `sum c_k t^k`.
    pub fn trig(terms: &[(i32, Complex64)]) -> PcMultiplier {
        let tl = TermList::new(terms.iter().map(|&(k, c)| (k, Poly::constant(c))).collect());
        PcMultiplier {
            trig: tl
                .terms()
                .iter()
                .map(|(k, p)| TrigTerm {
                    k: *k,
                    c: p.as_constant().unwrap_or(ZERO),
                })
                .collect(),
            pieces: Vec::new(),
        }
    }

    /// Piecewise constant: `values[i].1` on `[values[i].0, values[i+1].0)`,
    /// cyclically. Angles need not be sorted.
    pub fn steps(values: &[(f64, Complex64)]) -> Result<PcMultiplier> {
        if values.is_empty() {
            return Err(Error::MalformedMultiplier(
                "step function without steps".into(),
            ));
        }
        let mut v: Vec<(f64, Complex64)> = values
            .iter()
            .map(|&(a, c)| (normalize_angle(a), c))
            .collect();
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        let n = v.len();
        let mut pieces = Vec::with_capacity(n);
        for i in 0..n {
            let len = if n == 1 {
                TAU
            } else {
                normalize_angle(v[(i + 1) % n].0 - v[i].0)
            };
            pieces.push(Piece::constant(v[i].0, len, v[i].1));
        }
        PcMultiplier::from_pieces(pieces)
    }

    /// Indicator of the counter-clockwise arc `[from, to)`.
    pub fn indicator(from: f64, to: f64) -> Result<PcMultiplier> {
        if angle_dist(from, to) < MERGE_TOL {
            return Ok(PcMultiplier::one());
        }
        PcMultiplier::steps(&[(from, ONE), (to, ZERO)])
    }

    /// Continuous piecewise linear interpolation (in the angle) of the nodes,
    /// closed cyclically.
    pub fn piecewise_linear(nodes: &[(f64, Complex64)]) -> Result<PcMultiplier> {
        if nodes.len() < 2 {
            return Err(Error::MalformedMultiplier("need at least two nodes".into()));
        }
        let mut v: Vec<(f64, Complex64)> = nodes
            .iter()
            .map(|&(a, c)| (normalize_angle(a), c))
            .collect();
        v.sort_by(|x, y| x.0.total_cmp(&y.0));
        let n = v.len();
        let mut pieces = Vec::with_capacity(n);
        for i in 0..n {
            let (a0, c0) = v[i];
            let (a1, c1) = v[(i + 1) % n];
            let len = normalize_angle(a1 - a0);
            let slope = (c1 - c0) / len;
            pieces.push(Piece::new(
                a0,
                len,
                TermList::new(vec![(0, Poly::linear(c0, slope))]),
            ));
        }
        PcMultiplier::from_pieces(pieces)
    }

    /// `exp(i s) -> 1 - s/pi` for `s` in `[0, 2pi)`: one jump, at 1.
    pub fn sawtooth() -> PcMultiplier {
        let p = Poly::linear(ONE, Complex64::new(-1.0 / PI, 0.0));
        PcMultiplier {
            trig: Vec::new(),
            pieces: vec![Piece::new(0.0, TAU, TermList::new(vec![(0, p)]))],
        }
    }

    /// Validates that the arcs tile the circle.
    pub fn from_pieces(mut pieces: Vec<Piece>) -> Result<PcMultiplier> {
        if pieces.is_empty() {
            return Ok(PcMultiplier::zero());
        }
        for p in &mut pieces {
            p.start = normalize_angle(p.start);
            if !(p.len > 0.0 && p.len <= TAU + 1e-12) || !p.len.is_finite() {
                return Err(Error::MalformedMultiplier(format!(
                    "arc length {} outside (0, 2pi]",
                    p.len
                )));
            }
            p.check_caps()?;
        }
        pieces.sort_by(|x, y| x.start.total_cmp(&y.start));
        let total: f64 = pieces.iter().map(|p| p.len).sum();
        if (total - TAU).abs() > 1e-9 {
            return Err(Error::MalformedMultiplier(format!(
                "arcs cover {total} instead of 2pi"
            )));
        }
        let n = pieces.len();
        for i in 0..n {
            let next = pieces[(i + 1) % n].start;
            if n > 1 && angle_dist(pieces[i].end(), next) > 1e-9 {
                return Err(Error::MalformedMultiplier(format!(
                    "arc ending at {} is followed by an arc starting at {next}",
                    pieces[i].end()
                )));
            }
        }
        Ok(PcMultiplier {
            trig: Vec::new(),
            pieces,
        })
    }

    pub fn trig_terms(&self) -> &[TrigTerm] {
        &self.trig
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_trig(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Frequency range `(min k, max k)` of a trigonometric multiplier.
    pub fn frequency_range(&self) -> Option<(i32, i32)> {
        if !self.is_trig() {
            return None;
        }
        match (self.trig.first(), self.trig.last()) {
            (Some(lo), Some(hi)) => Some((lo.k, hi.k)),
            _ => Some((0, 0)),
        }
    }

    /// `max |k|` over the trigonometric terms, `None` for piecewise multipliers.
    pub fn bandwidth(&self) -> Option<usize> {
        self.frequency_range()
            .map(|(lo, hi)| lo.unsigned_abs().max(hi.unsigned_abs()) as usize)
    }

    pub fn breakpoints(&self) -> Vec<CircPoint> {
        self.pieces
            .iter()
            .map(|p| CircPoint::new(p.start))
            .collect()
    }

    fn trig_at(&self, theta: f64) -> Complex64 {
        self.trig
            .iter()
            .map(|t| t.c * Complex64::from_polar(1.0, t.k as f64 * theta))
            .sum()
    }

    /// Index of the arc starting within `MERGE_TOL` of `theta`.
    fn piece_starting_at(&self, theta: f64) -> Option<usize> {
        self.pieces
            .iter()
            .position(|p| angle_dist(p.start, theta) < MERGE_TOL)
    }

    fn piece_containing(&self, theta: f64) -> usize {
        let theta = normalize_angle(theta);
        self.pieces
            .iter()
            .position(|p| p.contains(theta))
            .unwrap_or_else(|| {
                // rounding at a wrap: the closest start wins
                (0..self.pieces.len())
                    .min_by(|&i, &j| {
                        angle_dist(self.pieces[i].start, theta)
                            .total_cmp(&angle_dist(self.pieces[j].start, theta))
                    })
                    .unwrap_or(0)
            })
    }

    /// `a(t+)`.
    pub fn eval_plus(&self, t: CircPoint) -> Complex64 {
        if self.is_trig() {
            return self.trig_at(t.theta);
        }
        if let Some(i) = self.piece_starting_at(t.theta) {
            return self.pieces[i].at(0.0);
        }
        self.value_inside(t.theta)
    }

    /// `a(t-)`.
    pub fn eval_minus(&self, t: CircPoint) -> Complex64 {
        if self.is_trig() {
            return self.trig_at(t.theta);
        }
        if let Some(i) = self.piece_starting_at(t.theta) {
            let n = self.pieces.len();
            let prev = &self.pieces[(i + n - 1) % n];
            return prev.at(prev.len);
        }
        self.value_inside(t.theta)
    }

    fn value_inside(&self, theta: f64) -> Complex64 {
        let p = &self.pieces[self.piece_containing(theta)];
        p.at(normalize_angle(theta - p.start))
    }

    /// Value at the point itself; at a breakpoint this is `a(t+)` by the
    /// half-open convention.
    pub fn eval(&self, t: CircPoint) -> Complex64 {
        self.eval_plus(t)
    }

    pub fn sided(&self, probe: Probe) -> Complex64 {
        match probe.side {
            Side::Exact | Side::Above => self.eval_plus(probe.point),
            Side::Below => self.eval_minus(probe.point),
        }
    }

    pub fn is_continuous_at(&self, t: CircPoint) -> bool {
        let (p, m) = (self.eval_plus(t), self.eval_minus(t));
        (p - m).norm() <= JUMP_TOL * 1f64.max(p.norm()).max(m.norm())
    }

    /// Sorted points where the one-sided limits differ.
    pub fn jump_set(&self) -> Vec<CircPoint> {
        let mut out: Vec<CircPoint> = self
            .breakpoints()
            .into_iter()
            .filter(|&t| !self.is_continuous_at(t))
            .collect();
        out.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        out
    }

    /// `a~(t) = a(1/t)`.
    pub fn reflect_tilde(&self) -> PcMultiplier {
        PcMultiplier {
            trig: self
                .trig
                .iter()
                .rev()
                .map(|t| TrigTerm { k: -t.k, c: t.c })
                .collect(),
            pieces: sorted(
                self.pieces
                    .iter()
                    .map(|p| Piece {
                        start: normalize_angle(-p.start - p.len),
                        len: p.len,
                        num: p.num.reflect(p.len),
                        den: p.den.reflect(p.len),
                    })
                    .collect(),
            ),
        }
    }

    /// `a^(t) = a(-t)`.
    pub fn reflect_hat(&self) -> PcMultiplier {
        PcMultiplier {
            trig: self
                .trig
                .iter()
                .map(|t| TrigTerm {
                    k: t.k,
                    c: if t.k.rem_euclid(2) == 1 { -t.c } else { t.c },
                })
                .collect(),
            pieces: sorted(
                self.pieces
                    .iter()
                    .map(|p| Piece {
                        start: normalize_angle(p.start - PI),
                        len: p.len,
                        num: p.num.rotate_half_turn(),
                        den: p.den.rotate_half_turn(),
                    })
                    .collect(),
            ),
        }
    }

    fn trig_list(&self) -> TermList {
        TermList::new(
            self.trig
                .iter()
                .map(|t| (t.k, Poly::constant(t.c)))
                .collect(),
        )
    }

    fn as_pieces(&self) -> Vec<Piece> {
        if self.is_trig() {
            vec![Piece::new(0.0, TAU, self.trig_list())]
        } else {
            self.pieces.clone()
        }
    }

    /// Both operands cut along the union of their breakpoints.
    fn common_partition(&self, other: &PcMultiplier) -> (Vec<Piece>, Vec<Piece>) {
        let mut cuts: Vec<f64> = self
            .pieces
            .iter()
            .chain(other.pieces.iter())
            .map(|p| p.start)
            .collect();
        cuts.sort_by(f64::total_cmp);
        let mut merged: Vec<f64> = Vec::with_capacity(cuts.len());
        for c in cuts {
            if merged.last().is_none_or(|&l| angle_dist(l, c) >= MERGE_TOL) {
                merged.push(c);
            }
        }
        if merged.len() > 1 && angle_dist(merged[0], *merged.last().unwrap()) < MERGE_TOL {
            merged.pop();
        }
        if merged.is_empty() {
            merged.push(0.0);
        }
        let a = self.as_pieces();
        let b = other.as_pieces();
        let n = merged.len();
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for i in 0..n {
            let lo = merged[i];
            let len = if n == 1 {
                TAU
            } else {
                normalize_angle(merged[(i + 1) % n] - lo)
            };
            let mid = lo + 0.5 * len;
            for (src, dst) in [(&a, &mut left), (&b, &mut right)] {
                let p = src.iter().find(|p| p.contains(mid)).unwrap_or(&src[0]);
                let offset = normalize_angle(mid - p.start) - 0.5 * len;
                dst.push(p.sub(offset, len));
            }
        }
        (left, right)
    }

    pub fn add(&self, other: &PcMultiplier) -> Result<PcMultiplier> {
        if self.is_trig() && other.is_trig() {
            return Ok(PcMultiplier::from_trig_list(
                &self.trig_list().add(&other.trig_list()),
            ));
        }
        let (l, r) = self.common_partition(other);
        let pieces = l
            .into_iter()
            .zip(r)
            .map(|(x, y)| {
                if x.den == y.den {
                    Piece::rational(x.start, x.len, x.num.add(&y.num), x.den)
                } else {
                    Piece::rational(
                        x.start,
                        x.len,
                        x.num.mul(&y.den).add(&y.num.mul(&x.den)),
                        x.den.mul(&y.den),
                    )
                }
            })
            .collect();
        PcMultiplier::from_pieces(pieces)
    }

    pub fn mul(&self, other: &PcMultiplier) -> Result<PcMultiplier> {
        if self.is_trig() && other.is_trig() {
            let tl = self.trig_list().mul(&other.trig_list());
            if tl.len() > TERM_CAP {
                return Err(Error::CapExceeded {
                    what: "term",
                    cap: TERM_CAP,
                    got: tl.len(),
                });
            }
            return Ok(PcMultiplier::from_trig_list(&tl));
        }
        let (l, r) = self.common_partition(other);
        let pieces = l
            .into_iter()
            .zip(r)
            .map(|(x, y)| {
                let den = if x.den.is_one() {
                    y.den
                } else if y.den.is_one() {
                    x.den
                } else {
                    x.den.mul(&y.den)
                };
                Piece::rational(x.start, x.len, x.num.mul(&y.num), den)
            })
            .collect();
        PcMultiplier::from_pieces(pieces)
    }

    pub fn scale(&self, c: Complex64) -> PcMultiplier {
        PcMultiplier {
            trig: if c == ZERO {
                Vec::new()
            } else {
                self.trig
                    .iter()
                    .map(|t| TrigTerm { k: t.k, c: t.c * c })
                    .collect()
            },
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    num: p.num.scale(c),
                    ..p.clone()
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> PcMultiplier {
        self.scale(-ONE)
    }

    pub fn sub(&self, other: &PcMultiplier) -> Result<PcMultiplier> {
        self.add(&other.neg())
    }

    /// Pointwise inverse. Fails when the multiplier comes within `1e-12`
    /// (relative) of zero on a sampled grid of every arc.
    pub fn inverse(&self) -> Result<PcMultiplier> {
        if self.is_trig() && self.trig.len() == 1 {
            let t = self.trig[0];
            if t.c == ZERO {
                return Err(Error::NotInvertible("zero multiplier".into()));
            }
            return Ok(PcMultiplier::trig(&[(-t.k, ONE / t.c)]));
        }
        let pieces = self.as_pieces();
        let scale = self.sup_estimate(64).max(f64::MIN_POSITIVE);
        for p in &pieces {
            for j in 0..=64 {
                let s = p.len * j as f64 / 64.0;
                let v = p.at(s);
                if v.norm() < 1e-12 * scale || !v.norm().is_finite() {
                    return Err(Error::NotInvertible(format!(
                        "vanishes near exp(i*{:.6})",
                        normalize_angle(p.start + s)
                    )));
                }
            }
        }
        PcMultiplier::from_pieces(
            pieces
                .into_iter()
                .map(|p| Piece::rational(p.start, p.len, p.den, p.num))
                .collect(),
        )
    }

    fn from_trig_list(tl: &TermList) -> PcMultiplier {
        PcMultiplier {
            trig: tl
                .terms()
                .iter()
                .map(|(k, p)| TrigTerm {
                    k: *k,
                    c: p.as_constant().unwrap_or(ZERO),
                })
                .collect(),
            pieces: Vec::new(),
        }
    }

    /// Max modulus over `n + 1` samples per arc.
    pub fn sup_estimate(&self, n: usize) -> f64 {
        self.as_pieces()
            .iter()
            .flat_map(|p| (0..=n).map(move |j| p.at(p.len * j as f64 / n as f64).norm()))
            .fold(0.0, f64::max)
    }

    /// Total variation, from `n` samples per arc plus the jumps.
    pub fn total_variation(&self, n: usize) -> f64 {
        let pieces = self.as_pieces();
        let mut tv = 0.0;
        for p in &pieces {
            let mut prev = p.at(0.0);
            for j in 1..=n {
                let v = p.at(p.len * j as f64 / n as f64);
                tv += (v - prev).norm();
                prev = v;
            }
        }
        tv + self
            .jump_set()
            .iter()
            .map(|&t| (self.eval_plus(t) - self.eval_minus(t)).norm())
            .sum::<f64>()
    }

    /// `a_k = (1/2pi) int a(exp(i theta)) exp(-i k theta) d theta`.
    ///
    /// Closed form for polynomial arcs; rational arcs use composite
    /// Gauss-Legendre quadrature.
    pub fn fourier_coeff(&self, k: i32) -> Complex64 {
        if self.is_trig() {
            return self.trig.iter().find(|t| t.k == k).map_or(ZERO, |t| t.c);
        }
        let mut acc = ZERO;
        for p in &self.pieces {
            if p.den.is_one() {
                for (j, poly) in p.num.terms() {
                    let w = (j - k) as f64;
                    let m = Poly::exp_moments(w, p.len, poly.degree());
                    let s: Complex64 = poly.coeffs().iter().zip(&m).map(|(c, mj)| c * mj).sum();
                    acc += Complex64::from_polar(1.0, w * p.start) * s;
                }
            } else {
                let max_freq = p
                    .num
                    .terms()
                    .iter()
                    .chain(p.den.terms())
                    .map(|(j, _)| j.unsigned_abs())
                    .max()
                    .unwrap_or(0) as f64;
                let panels =
                    4 + (p.len * (k.unsigned_abs() as f64 + max_freq + 4.0)).ceil() as usize;
                acc += quad::integrate(
                    |s| p.at(s) * Complex64::from_polar(1.0, -(k as f64) * (p.start + s)),
                    p.len,
                    panels,
                );
            }
        }
        acc / TAU
    }
}

fn sorted(mut pieces: Vec<Piece>) -> Vec<Piece> {
    pieces.sort_by(|x, y| x.start.total_cmp(&y.start));
    pieces
}

/// Union of the jump sets, merged within `MERGE_TOL`, sorted by angle.
pub fn merged_jumps<'a, I>(ms: I) -> Vec<CircPoint>
where
    I: IntoIterator<Item = &'a PcMultiplier>,
{
    let mut all: Vec<CircPoint> = ms.into_iter().flat_map(|m| m.jump_set()).collect();
    all.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    let mut out: Vec<CircPoint> = Vec::with_capacity(all.len());
    for t in all {
        if out
            .last()
            .is_none_or(|l| angle_dist(l.theta, t.theta) >= MERGE_TOL)
        {
            out.push(t);
        }
    }
    if out.len() > 1 && angle_dist(out[0].theta, out.last().unwrap().theta) < MERGE_TOL {
        out.pop();
    }
    out
}
