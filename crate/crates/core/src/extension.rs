//! Linear extension of a sum of products.
//!
//! For `el = sum_j b_j1 ... b_jr` (an `h x r` array of generators) the
//! `s x s` block matrix, `s = h(r+1) + 1`,
//!
//! ```text
//! ext = [ Z  X ]  =  [ I  0 ] [ I  0  ] [ Z  X ]
//!       [ Y  0 ]     [ M  1 ] [ 0  el ] [ 0  1 ]
//! ```
//!
//! with `Z = I - superdiag(B_1, ..., B_r)`, `B_j = diag(b_1j, ..., b_hj)`,
//! `X = -(0, ..., 0, 1, ..., 1)^T` (`hr` zeros), `Y = (1, ..., 1, 0, ..., 0)`
//! (`h` ones) and the row `M = (M_0, ..., M_r)` of partial products
//! `M_j = (b_11 ... b_1j, ..., b_h1 ... b_hj)`. The outer factors are
//! unipotent, so `el` and `ext` are invertible together and have the same
//! index.
//!
//! Symbols of block systems are laid out de-interleaved: the 2x2 symbol of
//! block `(i, j)` lands in rows `i, s + i` and columns `j, s + j`, so the
//! lower right `s x s` block collects the `t~` parts.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{
    generator_symbol, half_circle_plan, is_fredholm, ArcValues, Generator, OperatorExpr,
    Resolution, Site, SymbolSource, SymbolValue,
};
use crate::arcs::{CompactReal, Exponent};
use crate::error::{Error, Result};
use crate::multiplier::{merged_jumps, CircPoint, Probe};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// An `h x r` array of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorMatrix {
    h: usize,
    r: usize,
    entries: Vec<Generator>,
}

impl GeneratorMatrix {
    /// Entries in row-major order.
    pub fn new(h: usize, r: usize, entries: Vec<Generator>) -> Result<GeneratorMatrix> {
        if h == 0 || r == 0 || entries.len() != h * r {
            return Err(Error::DimensionMismatch(format!(
                "{h}x{r} generator array with {} entries",
                entries.len()
            )));
        }
        Ok(GeneratorMatrix { h, r, entries })
    }

    pub fn rows(&self) -> usize {
        self.h
    }

    pub fn cols(&self) -> usize {
        self.r
    }

    pub fn get(&self, j: usize, l: usize) -> &Generator {
        &self.entries[j * self.r + l]
    }

    pub fn extension_size(&self) -> usize {
        self.h * (self.r + 1) + 1
    }

    pub fn jump_points(&self) -> Vec<CircPoint> {
        merged_jumps(self.entries.iter().flat_map(|g| [&g.a, &g.b]))
    }
}

/// `sum_j b_j1 ... b_jr`.
pub fn el(beta: &GeneratorMatrix) -> OperatorExpr {
    let mut out = OperatorExpr::zero();
    for j in 0..beta.h {
        let mut row = OperatorExpr::identity();
        for l in 0..beta.r {
            row = row.times(&OperatorExpr::generator(beta.get(j, l).clone()));
        }
        out = out.plus(&row);
    }
    out
}

/// Entry of a block system over the generators of `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockEntry {
    Zero,
    /// `c` times the unit.
    Scalar(Complex64),
    /// `weight * b_{row, col}`.
    Gen {
        weight: Complex64,
        row: usize,
        col: usize,
    },
    /// `b_{row, 0} ... b_{row, len - 1}`; the unit for `len = 0`.
    Chain {
        row: usize,
        len: usize,
    },
    /// `el(beta)` itself.
    Whole,
}

/// An `s x s` block matrix whose entries refer to a generator array.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSystem {
    beta: GeneratorMatrix,
    s: usize,
    blocks: Vec<BlockEntry>,
}

/// The linear extension; see the module docs for the layout.
pub type ExtensionMatrix = BlockSystem;

impl BlockSystem {
    fn empty(beta: &GeneratorMatrix) -> BlockSystem {
        let s = beta.extension_size();
        BlockSystem {
            beta: beta.clone(),
            s,
            blocks: vec![BlockEntry::Zero; s * s],
        }
    }

    pub fn size(&self) -> usize {
        self.s
    }

    pub fn block(&self, i: usize, j: usize) -> BlockEntry {
        self.blocks[i * self.s + j]
    }

    fn set(&mut self, i: usize, j: usize, e: BlockEntry) {
        self.blocks[i * self.s + j] = e;
    }

    pub fn beta(&self) -> &GeneratorMatrix {
        &self.beta
    }

    /// Symbols of every generator of `beta` at the site.
    fn generator_symbols(
        &self,
        exp: Exponent,
        site: Site,
        lambda: CompactReal,
    ) -> Vec<SymbolValue> {
        let arc = ArcValues::new(exp, lambda);
        self.beta
            .entries
            .iter()
            .map(|g| generator_symbol(g, site, arc))
            .collect()
    }

    /// Block symbol: `s x s` at `+-1`, `2s x 2s` (de-interleaved) elsewhere.
    pub fn symbol(&self, exp: Exponent, site: Site, lambda: CompactReal) -> DMatrix<Complex64> {
        self.assemble(site, &self.generator_symbols(exp, site, lambda))
    }

    /// The block symbol from precomputed generator symbols.
    fn assemble(&self, site: Site, gens: &[SymbolValue]) -> DMatrix<Complex64> {
        let r = self.beta.r;
        let chain = |row: usize, len: usize| {
            (0..len).fold(SymbolValue::identity_at(site), |acc, l| {
                acc * gens[row * r + l]
            })
        };
        let s = self.s;
        let wide = matches!(site, Site::Interior(_));
        let n = if wide { 2 * s } else { s };
        let mut out = DMatrix::zeros(n, n);
        for i in 0..s {
            for j in 0..s {
                let v = match self.block(i, j) {
                    BlockEntry::Zero => continue,
                    BlockEntry::Scalar(c) => SymbolValue::identity_at(site).scale(c),
                    BlockEntry::Gen { weight, row, col } => gens[row * r + col].scale(weight),
                    BlockEntry::Chain { row, len } => chain(row, len),
                    BlockEntry::Whole => (0..self.beta.h)
                        .fold(SymbolValue::zero_at(site), |acc, row| acc + chain(row, r)),
                };
                match v {
                    SymbolValue::Scalar(z) => out[(i, j)] = z,
                    SymbolValue::Matrix2(m) => {
                        for a in 0..2 {
                            for b in 0..2 {
                                out[(a * s + i, b * s + j)] = m[(a, b)];
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl SymbolSource for BlockSystem {
    fn jump_points(&self) -> Vec<CircPoint> {
        self.beta.jump_points()
    }

    fn symbol_det(&self, exp: Exponent, site: Site, lambda: CompactReal) -> Complex64 {
        self.symbol(exp, site, lambda).determinant()
    }

    fn lower_block_det(&self, exp: Exponent, probe: Probe, lambda: CompactReal) -> Complex64 {
        let m = self.symbol(exp, Site::Interior(probe), lambda);
        let s = self.s;
        m.view((s, s), (s, s)).determinant()
    }
}

/// Index of the first block row/column of the `j`-th `h`-block.
fn block_start(h: usize, j: usize) -> usize {
    h * j
}

pub fn ext(beta: &GeneratorMatrix) -> ExtensionMatrix {
    let (h, r) = (beta.h, beta.r);
    let s = beta.extension_size();
    let last = s - 1;
    let mut m = BlockSystem::empty(beta);
    for i in 0..last {
        m.set(i, i, BlockEntry::Scalar(ONE));
    }
    // superdiagonal -B_{l+1}
    for l in 0..r {
        for j in 0..h {
            m.set(
                block_start(h, l) + j,
                block_start(h, l + 1) + j,
                BlockEntry::Gen {
                    weight: -ONE,
                    row: j,
                    col: l,
                },
            );
        }
    }
    for j in 0..h {
        m.set(block_start(h, r) + j, last, BlockEntry::Scalar(-ONE));
        m.set(last, j, BlockEntry::Scalar(ONE));
    }
    m
}

/// The three factors on the right of the defining identity.
pub fn extension_factors(beta: &GeneratorMatrix) -> [BlockSystem; 3] {
    let (h, r) = (beta.h, beta.r);
    let s = beta.extension_size();
    let last = s - 1;

    let mut left = BlockSystem::empty(beta);
    for i in 0..s {
        left.set(i, i, BlockEntry::Scalar(ONE));
    }
    for l in 0..=r {
        for j in 0..h {
            left.set(
                last,
                block_start(h, l) + j,
                BlockEntry::Chain { row: j, len: l },
            );
        }
    }

    let mut middle = BlockSystem::empty(beta);
    for i in 0..last {
        middle.set(i, i, BlockEntry::Scalar(ONE));
    }
    middle.set(last, last, BlockEntry::Whole);

    let mut right = ext(beta);
    right.set(last, last, BlockEntry::Scalar(ONE));
    for j in 0..h {
        right.set(last, j, BlockEntry::Zero);
    }
    [left, middle, right]
}

/// Max entrywise deviation of `left * middle * right` from `ext` over the
/// sampling grid of the half-cylinder.
pub fn verify_extension_factorization(
    beta: &GeneratorMatrix,
    exp: Exponent,
    res: Resolution,
) -> f64 {
    let e = ext(beta);
    let [l, m, r] = extension_factors(beta);
    let mut worst = 0.0f64;
    for (site, lambda) in grid_points(beta, res) {
        let gens = e.generator_symbols(exp, site, lambda);
        let prod = sparse_product(
            &sparse_product(&l.assemble(site, &gens), &m.assemble(site, &gens)),
            &r.assemble(site, &gens),
        );
        let diff = prod - e.assemble(site, &gens);
        worst = worst.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    worst
}

/// Largest `|det - 1|` of the two outer factors over the sampling grid.
/// Both are block unitriangular, so anything but 1 is a layout error.
pub fn outer_factor_det_gap(beta: &GeneratorMatrix, exp: Exponent, res: Resolution) -> f64 {
    let [l, _, r] = extension_factors(beta);
    let mut worst = 0.0f64;
    for (site, lambda) in grid_points(beta, res) {
        let gens = l.generator_symbols(exp, site, lambda);
        for f in [&l, &r] {
            worst = worst
                .max((f.assemble(site, &gens).determinant() - Complex64::new(1.0, 0.0)).norm());
        }
    }
    worst
}

/// `a * b`, skipping the zero entries of `a`; the factors are mostly identity.
fn sparse_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(a.nrows(), b.ncols());
    for k in 0..a.ncols() {
        for i in 0..a.nrows() {
            let x = a[(i, k)];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..b.ncols() {
                out[(i, j)] += x * b[(k, j)];
            }
        }
    }
    out
}

fn grid_points(beta: &GeneratorMatrix, res: Resolution) -> Vec<(Site, CompactReal)> {
    half_circle_plan(&beta.jump_points())
        .iter()
        .flat_map(|sw| sw.grid(res).into_iter().map(move |u| sw.locate(u)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub points: usize,
    /// Grid points where one symbol is singular and the other is not.
    pub disagreements: Vec<(f64, CompactReal)>,
    pub el_fredholm: bool,
    pub ext_fredholm: bool,
    /// Largest `|det ext - det el|` relative to `max |det el|`.
    pub max_det_gap: f64,
}

impl EquivalenceReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty() && self.el_fredholm == self.ext_fredholm
    }
}

/// Compares invertibility of the symbols of `el(beta)` and `ext(beta)` at
/// every grid point, and the two Fredholm verdicts.
pub fn extension_equivalence_check(
    beta: &GeneratorMatrix,
    exp: Exponent,
    res: Resolution,
) -> EquivalenceReport {
    let expr = el(beta);
    let e = ext(beta);
    let pts = grid_points(beta, res);
    let dets: Vec<(Complex64, Complex64)> = pts
        .iter()
        .map(|&(site, l)| (expr.symbol_det(exp, site, l), e.symbol_det(exp, site, l)))
        .collect();
    let scale_el = dets
        .iter()
        .map(|d| d.0.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let scale_ext = dets
        .iter()
        .map(|d| d.1.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut disagreements = Vec::new();
    let mut gap = 0.0f64;
    for (&(site, l), &(d_el, d_ext)) in pts.iter().zip(&dets) {
        let sing_el = d_el.norm() < crate::algebra::SINGULAR_REL * scale_el;
        let sing_ext = d_ext.norm() < crate::algebra::SINGULAR_REL * scale_ext;
        if sing_el != sing_ext {
            disagreements.push((site.theta(), l));
        }
        gap = gap.max((d_el - d_ext).norm() / scale_el);
    }
    EquivalenceReport {
        points: pts.len(),
        disagreements,
        el_fredholm: is_fredholm(&expr, exp, res).is_fredholm(),
        ext_fredholm: is_fredholm(&e, exp, res).is_fredholm(),
        max_det_gap: gap,
    }
}

/// Human-readable layout: `I`, `-I`, `0`, `-g{row}{col}`, `m{row}:{len}`, `el`.
pub fn describe(m: &BlockSystem) -> Vec<Vec<String>> {
    let s = m.size();
    (0..s)
        .map(|i| {
            (0..s)
                .map(|j| match m.block(i, j) {
                    BlockEntry::Zero => "0".to_string(),
                    BlockEntry::Scalar(c) if c == ONE => "I".to_string(),
                    BlockEntry::Scalar(c) if c == -ONE => "-I".to_string(),
                    BlockEntry::Scalar(c) => format!("{c}I"),
                    BlockEntry::Gen { weight, row, col } if weight == -ONE => {
                        format!("-g{row}{col}")
                    }
                    BlockEntry::Gen { weight, row, col } => format!("{weight}g{row}{col}"),
                    BlockEntry::Chain { row, len } => format!("m{row}:{len}"),
                    BlockEntry::Whole => "el".to_string(),
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Fredholmness;
    use crate::multiplier::PcMultiplier;
    use std::f64::consts::PI;

    fn p(x: f64) -> Exponent {
        Exponent::new(x).unwrap()
    }

    fn chord() -> Generator {
        Generator::toeplitz(PcMultiplier::steps(&[(PI / 2.0, ONE), (1.5 * PI, -ONE)]).unwrap())
    }

    fn coarse() -> Resolution {
        Resolution {
            t_points: 16,
            lambda_points: 17,
        }
    }

    #[test]
    fn layout_one_by_one() {
        let beta = GeneratorMatrix::new(1, 1, vec![chord()]).unwrap();
        let e = ext(&beta);
        assert_eq!(e.size(), 3);
        let d = describe(&e);
        assert_eq!(
            d,
            vec![
                vec!["I", "-g00", "0"],
                vec!["0", "I", "-I"],
                vec!["I", "0", "0"]
            ]
        );
    }

    #[test]
    fn layout_two_by_one() {
        let beta = GeneratorMatrix::new(2, 1, vec![chord(), Generator::identity()]).unwrap();
        let e = ext(&beta);
        assert_eq!(e.size(), 5);
        let d = describe(&e);
        assert_eq!(d[4], vec!["I", "I", "0", "0", "0"]);
        let x: Vec<&str> = (0..4).map(|i| d[i][4].as_str()).collect();
        assert_eq!(x, vec!["0", "0", "-I", "-I"]);
    }

    #[test]
    fn el_shapes() {
        let g = chord();
        let one = GeneratorMatrix::new(1, 1, vec![g.clone()]).unwrap();
        assert_eq!(el(&one).terms().len(), 1);
        let sum = GeneratorMatrix::new(2, 1, vec![g.clone(), g.clone()]).unwrap();
        assert_eq!(el(&sum).terms().len(), 2);
        let prod = GeneratorMatrix::new(1, 2, vec![g.clone(), g]).unwrap();
        assert_eq!(el(&prod).terms()[0].factors.len(), 3);
        assert!(GeneratorMatrix::new(2, 2, vec![]).is_err());
    }

    #[test]
    fn factorization_holds() {
        let a = PcMultiplier::steps(&[
            (0.4, Complex64::new(2.0, 1.0)),
            (2.0, Complex64::new(-1.0, 0.5)),
        ])
        .unwrap();
        let b = PcMultiplier::steps(&[(1.0, ONE), (5.0, Complex64::new(0.0, 3.0))]).unwrap();
        let beta = GeneratorMatrix::new(
            2,
            2,
            vec![
                Generator::new(a.clone(), b.clone()),
                Generator::new(b.clone(), a.clone()),
                Generator::toeplitz(a.reflect_hat()),
                Generator::new(PcMultiplier::monomial(1), b.reflect_tilde()),
            ],
        )
        .unwrap();
        assert!(verify_extension_factorization(&beta, p(3.0), coarse()) < 1e-9);
        assert!(outer_factor_det_gap(&beta, p(3.0), coarse()) < 1e-9);
        let id = GeneratorMatrix::new(1, 1, vec![Generator::identity()]).unwrap();
        assert!(verify_extension_factorization(&id, p(2.0), coarse()) < 1e-15);
    }

    #[test]
    fn singular_sets_agree() {
        let beta = GeneratorMatrix::new(1, 1, vec![chord()]).unwrap();
        let r = extension_equivalence_check(&beta, p(2.0), Resolution::default());
        assert!(r.agrees());
        assert!(!r.el_fredholm);
        let v = is_fredholm(&ext(&beta), p(2.0), Resolution::default());
        assert_eq!(v.status, Fredholmness::No);
        assert!((v.witness.0 - PI / 2.0).abs() < 1e-2);

        let id = GeneratorMatrix::new(1, 1, vec![Generator::identity()]).unwrap();
        let r = extension_equivalence_check(&id, p(2.0), coarse());
        assert!(r.agrees() && r.el_fredholm);
    }
}
