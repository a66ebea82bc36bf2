//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use common::*;
use thindex::algebra::{smb, Factor, Generator, OperatorExpr, Resolution, Term};
use thindex::arcs::{lambda_grid, mu, nu, CompactReal};
use thindex::extension::{
    ext, extension_equivalence_check, outer_factor_det_gap, verify_extension_factorization,
    GeneratorMatrix,
};
use thindex::index::{
    doubled_matrix_of, index_system, index_with_curve, matrix_op_with_curve, separate_jumps,
    toeplitz_circle_with_curve, w_value, OrientedCurve,
};
use thindex::multiplier::{CircPoint, PcMultiplier};
use thindex::oracle::{identity_e7_check, laurent_index_oracle, rank_deficiency, truncate};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const EXPONENTS: [f64; 3] = [1.5, 2.0, 3.0];

type Check = Result<String, String>;

/// Every traced curve of a Fredholm instance, for the well-formedness pass.
#[derive(Default)]
struct Curves(Vec<(String, OrientedCurve)>);

impl Curves {
    fn keep(&mut self, label: String, curve: Option<OrientedCurve>) {
        if let Some(c) = curve {
            self.0.push((label, c));
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration, what: &str) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < budget, || {
        format!("{what} took {took:.2?}, budget {budget:?}")
    })?;
    Ok(took)
}

// ---------------------------------------------------------------------------

fn arc_identities() -> Check {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for p in [1.2, 1.5, 2.0, 3.0, 7.0] {
        let ep = exp(p);
        let eq = ep.conjugate();
        let mut lambdas: Vec<CompactReal> = (0..198)
            .map(|_| CompactReal::Finite(r.gen_range(-12.0..12.0)))
            .collect();
        lambdas.extend([CompactReal::NegInf, CompactReal::PosInf]);
        for l in lambdas {
            let e1 = (mu(ep, -l) + mu(eq, l) - ONE).norm();
            let e2 = (nu(ep, -l) - nu(eq, l)).norm();
            let m = mu(eq, l);
            let e3 = (nu(eq, l) * nu(eq, l) - m * (ONE - m)).norm();
            worst = worst.max(e1).max(e2).max(e3);
        }
        let expected = (ONE - Complex64::new(0.0, 1.0 / (PI / p).tan())) / 2.0;
        worst = worst.max((mu(ep, CompactReal::Finite(0.0)) - expected).norm());
    }
    ensure(worst <= 1e-12, || format!("max identity error {worst:.3e}"))?;
    let took = within_budget(start, Duration::from_secs(1), "arc suite")?;
    Ok(format!(
        "max error {worst:.2e} over 5 x 200 samples in {took:.2?}"
    ))
}

// ---------------------------------------------------------------------------

fn toeplitz_vs_roots(curves: &mut Curves) -> Check {
    let start = Instant::now();
    let mut r = rng(2);
    let res = Resolution::default();
    let (mut done, mut rejected, mut nonzero_idx) = (0, 0, 0);
    while done < 200 {
        let spec = random_laurent(&mut r, 6);
        // keep roots well away from the circle
        if min_circle_modulus(&spec) < 1e-3 {
            rejected += 1;
            continue;
        }
        let expected = match laurent_index_oracle(&spec) {
            Ok(k) => k,
            Err(_) => {
                rejected += 1;
                continue;
            }
        };
        let p = EXPONENTS[done % 3];
        let a = spec.to_multiplier();
        let (report, curve) = toeplitz_circle_with_curve(&a, exp(p), res)
            .map_err(|e| format!("instance {done}: {e}"))?;
        ensure(report.index == Some(expected), || {
            format!(
                "instance {done} (p = {p}): index {:?}, oracle {expected}",
                report.index
            )
        })?;
        nonzero_idx += usize::from(expected != 0);
        curves.keep(format!("laurent #{done}"), curve);
        done += 1;
    }
    let took = within_budget(start, Duration::from_secs(10), "Laurent suite")?;
    Ok(format!(
        "200 agree ({nonzero_idx} nonzero, {rejected} rejected) in {took:.2?}"
    ))
}

// ---------------------------------------------------------------------------

fn shift_family(curves: &mut Curves) -> Check {
    let res = Resolution::default();
    for n in -5i32..=5 {
        let e = OperatorExpr::th(PcMultiplier::monomial(n), PcMultiplier::zero());
        for p in EXPONENTS {
            let (report, curve) = index_with_curve(&e, exp(p), res).map_err(|e| e.to_string())?;
            ensure(report.index == Some(-n as i64), || {
                format!("T(t^{n}), p = {p}: index {:?}", report.index)
            })?;
            curves.keep(format!("shift {n} p={p}"), curve);
        }
        let section = truncate(&e, 32, 8).map_err(|e| e.to_string())?;
        let def = rank_deficiency(&section.matrix, 1e-10);
        ensure(def == n.unsigned_abs() as usize, || {
            format!("T(t^{n}): rank deficiency {def}")
        })?;
    }
    Ok("index -n and rank deficiency |n| for n in -5..=5".into())
}

// ---------------------------------------------------------------------------

/// `mu_q`, `nu_q` straight from the hyperbolic functions.
fn arc_pair(q: f64, l: CompactReal) -> (Complex64, Complex64) {
    match l {
        CompactReal::NegInf => (ZERO, ZERO),
        CompactReal::PosInf => (ONE, ZERO),
        CompactReal::Finite(x) => {
            let z = Complex64::new(PI * x, PI / q);
            (
                (ONE + z.cosh() / z.sinh()) / 2.0,
                ONE / (Complex64::new(0.0, 2.0) * z.sinh()),
            )
        }
    }
}

/// Generator symbol written out from the one-sided limits.
fn generator_reference(g: &Generator, q: f64, t: CircPoint, l: CompactReal) -> DMatrix<Complex64> {
    let (m, v) = arc_pair(q, l);
    let (ap, am, bp, bm) = (
        g.a.eval_plus(t),
        g.a.eval_minus(t),
        g.b.eval_plus(t),
        g.b.eval_minus(t),
    );
    if t.is_plus_one() || t.is_minus_one() {
        let s = if t.is_plus_one() { 1.0 } else { -1.0 };
        return DMatrix::from_element(
            1,
            1,
            ap * m + am * (ONE - m) + Complex64::new(0.0, s) * (bp - bm) * v,
        );
    }
    let c = t.conj();
    let (acp, acm, bcp, bcm) = (
        g.a.eval_plus(c),
        g.a.eval_minus(c),
        g.b.eval_plus(c),
        g.b.eval_minus(c),
    );
    DMatrix::from_row_slice(
        2,
        2,
        &[
            ap * m + am * (ONE - m),
            (bp - bm) * v,
            (bcm - bcp) * v,
            acm * (ONE - m) + acp * m,
        ],
    )
}

fn expression_reference(
    e: &OperatorExpr,
    q: f64,
    t: CircPoint,
    l: CompactReal,
) -> DMatrix<Complex64> {
    let k = if t.is_plus_one() || t.is_minus_one() {
        1
    } else {
        2
    };
    let mut acc = DMatrix::<Complex64>::zeros(k, k);
    for term in e.terms() {
        let mut prod = DMatrix::<Complex64>::identity(k, k);
        for f in &term.factors {
            prod = match f {
                Factor::Identity => prod,
                Factor::Compact => DMatrix::zeros(k, k),
                Factor::Gen(g) => prod * generator_reference(g, q, t, l),
            };
        }
        acc += prod * term.weight;
    }
    acc
}

fn random_expression(r: &mut rand_chacha::ChaCha8Rng) -> OperatorExpr {
    let pool = full_pool();
    let terms = (0..r.gen_range(1..=3))
        .map(|_| Term {
            weight: unit_box(r),
            factors: (0..r.gen_range(1..=3))
                .map(|_| match r.gen_range(0..10) {
                    0 => Factor::Identity,
                    1 => Factor::Compact,
                    _ => Factor::Gen(Generator::new(
                        random_steps(r, 4, &pool, false),
                        random_steps(r, 4, &pool, true),
                    )),
                })
                .collect(),
        })
        .collect();
    OperatorExpr::from_terms(terms).unwrap()
}

fn max_entry_gap(x: &DMatrix<Complex64>, y: &DMatrix<Complex64>) -> f64 {
    (x - y).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn symbol_homomorphism() -> Check {
    let mut r = rng(4);
    let lambdas = lambda_grid(33);
    let mut worst = 0.0f64;
    for inst in 0..50 {
        let p = EXPONENTS[inst % 3];
        let e = exp(p);
        let q = e.q();
        let (x, y) = (random_expression(&mut r), random_expression(&mut r));
        let xy = x.times(&y);
        for j in 0..64 {
            let t = CircPoint::new(grid_angle(j));
            for &l in &lambdas {
                let sx = smb(&x, e, t, l).map_err(|e| e.to_string())?.to_dmatrix();
                let sy = smb(&y, e, t, l).map_err(|e| e.to_string())?.to_dmatrix();
                let sxy = smb(&xy, e, t, l).map_err(|e| e.to_string())?.to_dmatrix();
                let g1 = max_entry_gap(&sxy, &(&sx * &sy));
                let g2 = max_entry_gap(&sx, &expression_reference(&x, q, t, l));
                let g3 = max_entry_gap(&sxy, &expression_reference(&xy, q, t, l));
                let g = g1.max(g2).max(g3);
                ensure(g <= 1e-10, || {
                    format!(
                        "instance {inst}, t = exp(i*{:.6}), lambda = {l}: gap {g:.3e}",
                        t.theta()
                    )
                })?;
                worst = worst.max(g);
            }
        }
    }
    Ok(format!(
        "50 products on 64 x 33 grid, max entry gap {worst:.2e}"
    ))
}

// ---------------------------------------------------------------------------

fn product_identities() -> Check {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for inst in 0..50 {
        let (a, b) = (
            random_laurent(&mut r, 4).to_multiplier(),
            random_laurent(&mut r, 4).to_multiplier(),
        );
        let w = a.bandwidth().unwrap() + b.bandwidth().unwrap();
        let res =
            identity_e7_check(&a, &b, 4 * w + 16).map_err(|e| format!("instance {inst}: {e}"))?;
        let m = res.toeplitz.max(res.hankel);
        ensure(m <= 1e-12, || format!("instance {inst}: residual {m:.3e}"))?;
        worst = worst.max(m);
    }
    Ok(format!("50 banded pairs, max window residual {worst:.2e}"))
}

// ---------------------------------------------------------------------------

/// Piecewise constant pairs with `T(a) + H(b)` and `T(a) - H(b)` both
/// Fredholm, `b` continuous at `+-1`.
fn flip_instances() -> Vec<(f64, PcMultiplier, PcMultiplier)> {
    let mut r = rng(6);
    let (full, inner) = (full_pool(), interior_pool());
    let res = Resolution::default();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < 50 && attempts < 2000 {
        attempts += 1;
        let p = EXPONENTS[out.len() % 3];
        let a = random_steps(&mut r, 4, &full, false);
        let b = random_steps(&mut r, 4, &inner, true);
        let plus = OperatorExpr::th(a.clone(), b.clone());
        let minus = OperatorExpr::th(a.clone(), b.neg());
        let ok = |e: &OperatorExpr| thindex::algebra::is_fredholm(e, exp(p), res).is_fredholm();
        if ok(&plus) && ok(&minus) {
            out.push((p, a, b));
        }
    }
    out
}

fn flip_equality(inst: &[(f64, PcMultiplier, PcMultiplier)], curves: &mut Curves) -> Check {
    ensure(inst.len() == 50, || {
        format!("only {} Fredholm instances found", inst.len())
    })?;
    let res = Resolution::default();
    let mut nonzero_idx = 0;
    for (k, (p, a, b)) in inst.iter().enumerate() {
        let plus = OperatorExpr::th(a.clone(), b.clone());
        let minus = OperatorExpr::th(a.clone(), b.neg());
        let (rp, cp) =
            index_with_curve(&plus, exp(*p), res).map_err(|e| format!("instance {k}: {e}"))?;
        let (rm, cm) =
            index_with_curve(&minus, exp(*p), res).map_err(|e| format!("instance {k}: {e}"))?;
        ensure(rp.index.is_some() && rp.index == rm.index, || {
            format!("instance {k} (p = {p}): {:?} vs {:?}", rp.index, rm.index)
        })?;
        nonzero_idx += usize::from(rp.index != Some(0));
        curves.keep(format!("flip+ #{k}"), cp);
        curves.keep(format!("flip- #{k}"), cm);
    }
    Ok(format!("50 pairs agree ({nonzero_idx} with nonzero index)"))
}

fn doubling(inst: &[(f64, PcMultiplier, PcMultiplier)], curves: &mut Curves) -> Check {
    ensure(inst.len() == 50, || {
        format!("only {} Fredholm instances found", inst.len())
    })?;
    let res = Resolution::default();
    for (k, (p, a, b)) in inst.iter().enumerate() {
        let g = Generator::new(a.clone(), b.clone());
        let (half, half_curve) =
            index_with_curve(&OperatorExpr::generator(g.clone()), exp(*p), res)
                .map_err(|e| format!("instance {k}: {e}"))?;
        let (full, full_curve) = matrix_op_with_curve(&doubled_matrix_of(&g), exp(*p), res)
            .map_err(|e| format!("instance {k}: {e}"))?;
        let (hi, fi) = (
            half.index.ok_or("half index missing")?,
            full.index
                .ok_or_else(|| format!("instance {k}: doubled operator not Fredholm"))?,
        );
        ensure(fi == 2 * hi, || {
            format!("instance {k} (p = {p}): doubled {fi}, scalar {hi}")
        })?;
        // windings straight from the sampled curves
        let wh = turns(&half_curve.as_ref().unwrap().values().collect::<Vec<_>>());
        let wf = turns(&full_curve.as_ref().unwrap().values().collect::<Vec<_>>());
        ensure((wh - wf / 2.0).abs() < 1e-6, || {
            format!("instance {k}: half winding {wh}, full {wf}")
        })?;
        curves.keep(format!("doubled #{k}"), full_curve);
    }
    Ok("50 instances: doubled index = 2 x index, half winding = full winding / 2".into())
}

// ---------------------------------------------------------------------------

fn linear_extension(curves: &mut Curves) -> Check {
    let start = Instant::now();
    let mut r = rng(8);
    let (full, small_pool) = (full_pool(), full_pool());
    let res = Resolution::default();
    let (mut fredholm, mut singular_seen, mut worst) = (0, 0, 0.0f64);
    for inst in 0..100 {
        let p = EXPONENTS[inst % 3];
        // every fourth array is a single product with a factor vanishing on
        // an arc, so both symbols must be found singular
        let singular = inst % 4 == 3;
        let (h, cols) = (
            if singular { 1 } else { r.gen_range(1..=3) },
            r.gen_range(1..=3),
        );
        let mut entries: Vec<Generator> = (0..h * cols)
            .map(|_| {
                Generator::new(
                    random_steps(&mut r, 2, &full, false),
                    random_steps(&mut r, 2, &small_pool, true),
                )
            })
            .collect();
        if singular {
            let cuts = pick_angles(&mut r, &full, 2);
            let v = nonzero(&mut r);
            let mut vals = [v, ZERO].into_iter();
            entries[0].a = steps_at(&cuts, || vals.next().unwrap());
        }
        let beta = GeneratorMatrix::new(h, cols, entries).map_err(|e| e.to_string())?;
        let resid = verify_extension_factorization(&beta, exp(p), res);
        ensure(resid <= 1e-9, || {
            format!("instance {inst}: factorization residual {resid:.3e}")
        })?;
        worst = worst.max(resid);
        // outer factors must be invertible; a coarse grid is enough for that
        let coarse = Resolution {
            t_points: 32,
            lambda_points: 9,
        };
        let gap = outer_factor_det_gap(&beta, exp(p), coarse);
        ensure(gap <= 1e-9, || {
            format!("instance {inst}: outer factor determinant off by {gap:.3e}")
        })?;
        let eq = extension_equivalence_check(&beta, exp(p), res);
        ensure(eq.agrees(), || {
            format!(
                "instance {inst} ({h}x{cols}): {} disagreements, el {} ext {}",
                eq.disagreements.len(),
                eq.el_fredholm,
                eq.ext_fredholm
            )
        })?;
        if singular {
            ensure(!eq.el_fredholm, || {
                format!("instance {inst}: vanishing factor not detected")
            })?;
            singular_seen += 1;
        }
        if eq.el_fredholm {
            fredholm += 1;
            let el = thindex::extension::el(&beta);
            let (a, curve) =
                index_with_curve(&el, exp(p), res).map_err(|e| format!("instance {inst}: {e}"))?;
            let b = index_system(&ext(&beta), exp(p), res)
                .map_err(|e| format!("instance {inst}: {e}"))?;
            ensure(a.index == b.index, || {
                format!("instance {inst}: el {:?} vs ext {:?}", a.index, b.index)
            })?;
            curves.keep(format!("el #{inst}"), curve);
        }
    }
    let took = within_budget(start, Duration::from_secs(60), "extension suite")?;
    Ok(format!("100 arrays ({singular_seen} built singular), {fredholm} Fredholm, max residual {worst:.2e}, in {took:.2?}"))
}

// ---------------------------------------------------------------------------

fn jump_separation(curves: &mut Curves) -> Check {
    let mut r = rng(9);
    let res = Resolution::default();
    // interior jumps stay clear of +-1
    let upper: Vec<usize> = (6..=GRID_DIV - 6).collect();
    let lambdas = lambda_grid(33);
    let (mut done, mut attempts) = (0, 0);
    let (mut worst_smb, mut worst_w) = (0.0f64, 0.0f64);
    while done < 25 {
        attempts += 1;
        if attempts > 500 {
            return Err(format!("only {done} Fredholm instances in 500 attempts"));
        }
        let p = EXPONENTS[done % 3];
        let e = exp(p);
        let cut = |r: &mut rand_chacha::ChaCha8Rng| {
            let th = pick_angles(r, &upper, 2);
            let mut angles = vec![0.0, th[0], th[1], PI, 2.0 * PI - th[1], 2.0 * PI - th[0]];
            angles.sort_by(f64::total_cmp);
            angles
        };
        let a_cuts = cut(&mut r);
        let b_cuts = cut(&mut r);
        let a = steps_at(&a_cuts, || nonzero(&mut r));
        let mut r2 = rng(10_000 + attempts);
        let b = steps_at(&b_cuts, || unit_box(&mut r2) * 0.5);
        let g = OperatorExpr::th(a.clone(), b.clone());
        let (rep, curve) = index_with_curve(&g, e, res).map_err(|e| e.to_string())?;
        if !rep.fredholm {
            continue;
        }
        let s = separate_jumps(&a, &b, e).map_err(|e| format!("instance {done}: {e}"))?;
        let g0 = OperatorExpr::th(s.a0.clone(), s.b0.clone());
        let g1 = OperatorExpr::th(s.a1.clone(), s.b1.clone());
        for j in 0..=64 {
            let t = CircPoint::new(PI * j as f64 / 64.0);
            for &l in &lambdas {
                let prod = smb(&g0, e, t, l).unwrap().to_dmatrix()
                    * smb(&g1, e, t, l).unwrap().to_dmatrix();
                let gap = max_entry_gap(&prod, &smb(&g, e, t, l).unwrap().to_dmatrix());
                let w = w_value(&g, e, t, l).map_err(|e| e.to_string())?;
                let w01 = w_value(&g0, e, t, l).map_err(|e| e.to_string())?
                    * w_value(&g1, e, t, l).map_err(|e| e.to_string())?;
                let wgap = (w - w01).norm();
                ensure(gap <= 1e-9 && wgap <= 1e-9, || {
                    format!("instance {done}, t = exp(i*{:.6}), lambda = {l}: smb gap {gap:.3e}, W gap {wgap:.3e}", t.theta())
                })?;
                worst_smb = worst_smb.max(gap);
                worst_w = worst_w.max(wgap);
            }
        }
        let (r0, c0) = index_with_curve(&g0, e, res).map_err(|e| e.to_string())?;
        let (r1, c1) = index_with_curve(&g1, e, res).map_err(|e| e.to_string())?;
        let (i, i0, i1) = (
            rep.index.unwrap(),
            r0.index.ok_or("G0 not Fredholm")?,
            r1.index.ok_or("G1 not Fredholm")?,
        );
        ensure(i == i0 + i1, || {
            format!("instance {done}: {i} != {i0} + {i1}")
        })?;
        curves.keep(format!("separation #{done}"), curve);
        curves.keep(format!("separation G0 #{done}"), c0);
        curves.keep(format!("separation G1 #{done}"), c1);
        done += 1;
    }
    Ok(format!(
        "25 instances, max smb gap {worst_smb:.2e}, max W gap {worst_w:.2e}"
    ))
}

// ---------------------------------------------------------------------------

fn negative_detection(curves: &mut Curves) -> Check {
    let e = exp(2.0);
    let res = Resolution::default();
    let two_values = |lo: Complex64, hi: Complex64| {
        PcMultiplier::steps(&[(PI / 2.0, lo), (1.5 * PI, hi)]).unwrap()
    };
    let chord = OperatorExpr::th(two_values(ONE, -ONE), PcMultiplier::zero());
    let v = thindex::algebra::is_fredholm(&chord, e, res);
    ensure(
        !v.is_fredholm() && v.status == thindex::algebra::Fredholmness::No,
        || format!("chord verdict {:?}", v.status),
    )?;
    let (theta, l) = v.witness;
    let lambda = match l {
        CompactReal::Finite(x) => x,
        other => return Err(format!("witness lambda {other}")),
    };
    ensure(
        (theta - PI / 2.0).abs() <= 1e-2 && lambda.abs() <= 1e-2,
        || format!("witness ({theta:.4}, {lambda:.4}) is not near (i, 0)"),
    )?;
    let rot = Complex64::from_polar(1.0, PI / 4.0);
    let i = Complex64::new(0.0, 1.0);
    for (name, lo, hi) in [
        ("e^{+-i pi/4}", rot, rot.conj()),
        ("e^{i pi/4}{1, i}", rot, rot * i),
    ] {
        let perturbed = OperatorExpr::th(two_values(lo, hi), PcMultiplier::zero());
        let (rep, curve) = index_with_curve(&perturbed, e, res).map_err(|e| e.to_string())?;
        ensure(rep.fredholm, || {
            format!(
                "perturbed {name} not declared Fredholm ({:?})",
                rep.verdict.status
            )
        })?;
        curves.keep(format!("perturbed {name}"), curve);
    }
    Ok(format!(
        "chord rejected with witness ({theta:.4}, {lambda:.1e}); both perturbations Fredholm"
    ))
}

// ---------------------------------------------------------------------------

fn curve_well_formed(curves: &Curves) -> Check {
    ensure(!curves.0.is_empty(), || "no curves collected".into())?;
    let mut worst_gap = 0.0f64;
    let mut worst_int = 0.0f64;
    for (label, c) in &curves.0 {
        ensure(c.closed, || format!("{label}: curve not closed"))?;
        ensure(c.max_junction_gap <= 1e-6, || {
            format!("{label}: junction gap {:.3e}", c.max_junction_gap)
        })?;
        let (first, last) = (c.first().unwrap(), c.last().unwrap());
        ensure(
            (first - ONE).norm() <= 1e-8 && (last - ONE).norm() <= 1e-8,
            || format!("{label}: starts at {first}, ends at {last}"),
        )?;
        let w = turns(&c.values().collect::<Vec<_>>());
        let off = (w - w.round()).abs();
        ensure(off <= 1e-6, || {
            format!("{label}: winding {w} is not an integer")
        })?;
        worst_gap = worst_gap.max(c.max_junction_gap);
        worst_int = worst_int.max(off);
    }
    Ok(format!(
        "{} curves closed, max junction gap {worst_gap:.2e}, max distance to integer winding {worst_int:.2e}",
        curves.0.len()
    ))
}

// ---------------------------------------------------------------------------

fn main() {
    let mut curves = Curves::default();
    let mut lines: Vec<(u32, &str, Check, Duration)> = Vec::new();
    let mut run = |id: u32, title: &'static str, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let out = f();
        lines.push((id, title, out, start.elapsed()));
    };
    run(1, "arc function identities", &mut arc_identities);
    run(2, "Toeplitz index vs root counting", &mut || {
        toeplitz_vs_roots(&mut curves)
    });
    run(3, "shift family", &mut || shift_family(&mut curves));
    run(4, "symbol homomorphism", &mut symbol_homomorphism);
    run(5, "product identities on sections", &mut product_identities);
    let inst = flip_instances();
    run(6, "flip index equality", &mut || {
        flip_equality(&inst, &mut curves)
    });
    run(7, "doubling identity", &mut || doubling(&inst, &mut curves));
    run(8, "linear extension", &mut || linear_extension(&mut curves));
    run(9, "jump separation", &mut || jump_separation(&mut curves));
    run(10, "negative detection", &mut || {
        negative_detection(&mut curves)
    });
    run(11, "curve well-formedness", &mut || {
        curve_well_formed(&curves)
    });

    let mut failed = 0;
    for (id, title, out, took) in &lines {
        match out {
            Ok(detail) => println!("PASS criterion {id:>2} {title}: {detail} [{took:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} {title}: {why} [{took:.2?}]");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        lines.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
