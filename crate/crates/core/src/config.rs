//! Problem files: JSON with named multipliers and a sum-of-products
//! expression over them.
//!
//! ```json
//! {
//!   "p": 2.0,
//!   "multipliers": {
//!     "a": { "steps": [["pi:0.5", 1], ["pi:1.5", [-1, 0]]] },
//!     "t": { "trig": [[1, 1]] }
//!   },
//!   "expression": [
//!     { "weight": 1, "factors": [{ "T": "a", "H": "-t" }, "I"] }
//!   ],
//!   "grid": { "t": 256, "lambda": 129 }
//! }
//! ```
//!
//! A multiplier is the sum of whatever it lists: `trig` terms `[k, c]`,
//! `steps` (`c` from the given angle up to the next one), `linear`
//! (continuous interpolation through `[angle, c]` nodes), `pieces` covering
//! the circle (`from`, `to`, and either `value` or `terms` of
//! `{"k": k, "poly": [c0, c1, ...]}` in the local angle `theta - from`, with an
//! optional `den` of the same shape), and `sawtooth` (a multiple of
//! `exp(is) -> 1 - s/pi`). Complex numbers are reals or `[re, im]`; angles are
//! radians or `"pi:x"` for `x * pi`.
//!
//! A factor is `"I"` (identity), `"K"` (a compact operator) or
//! `{"T": name, "H": name}` with either part optional. Names may carry the
//! prefixes `-` (negate), `~` (`a(1/t)`) and `^` (`a(-t)`), applied right to
//! left.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Deserialize;

use crate::algebra::{Factor, Generator, OperatorExpr, Resolution, Term};
use crate::arcs::Exponent;
use crate::error::{Error, Result};
use crate::extension::GeneratorMatrix;
use crate::multiplier::{normalize_angle, PcMultiplier, Piece, Poly, TermList};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawComplex {
    Real(f64),
    Pair([f64; 2]),
}

impl RawComplex {
    fn value(&self) -> Complex64 {
        match *self {
            RawComplex::Real(x) => Complex64::new(x, 0.0),
            RawComplex::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawAngle {
    Radians(f64),
    Text(String),
}

impl RawAngle {
    fn radians(&self) -> Result<f64> {
        match self {
            RawAngle::Radians(x) => Ok(*x),
            RawAngle::Text(s) => parse_angle(s),
        }
    }
}

/// `"pi:x"` is `x * pi`; anything else must be a plain number.
pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("pi:") {
        rest.trim()
            .parse::<f64>()
            .map(|x| x * PI)
            .map_err(|_| Error::Config(format!("bad angle {s:?}")))
    } else if s == "pi" {
        Ok(PI)
    } else {
        s.parse::<f64>()
            .map_err(|_| Error::Config(format!("bad angle {s:?}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    k: i32,
    poly: Vec<RawComplex>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiece {
    from: RawAngle,
    to: RawAngle,
    #[serde(default)]
    value: Option<RawComplex>,
    #[serde(default)]
    terms: Vec<RawTerm>,
    #[serde(default)]
    den: Option<Vec<RawTerm>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMultiplier {
    #[serde(default)]
    trig: Vec<(i32, RawComplex)>,
    #[serde(default)]
    steps: Vec<(RawAngle, RawComplex)>,
    #[serde(default)]
    linear: Vec<(RawAngle, RawComplex)>,
    #[serde(default)]
    pieces: Vec<RawPiece>,
    #[serde(default)]
    sawtooth: Option<RawComplex>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    #[serde(rename = "T", default)]
    t: Option<String>,
    #[serde(rename = "H", default)]
    h: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawFactor {
    Marker(String),
    Gen(RawGenerator),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProduct {
    #[serde(default)]
    weight: Option<RawComplex>,
    factors: Vec<RawFactor>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(default)]
    t: Option<usize>,
    #[serde(default)]
    lambda: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p: f64,
    #[serde(default)]
    multipliers: BTreeMap<String, RawMultiplier>,
    expression: Vec<RawProduct>,
    #[serde(default)]
    grid: RawGrid,
}

/// A parsed problem file.
#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub exp: Exponent,
    pub multipliers: BTreeMap<String, PcMultiplier>,
    pub expr: OperatorExpr,
    pub res: Resolution,
}

impl ProblemConfig {
    pub fn parse(text: &str) -> Result<ProblemConfig> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let exp = Exponent::new(raw.p)?;
        let mut multipliers = BTreeMap::new();
        for (name, m) in &raw.multipliers {
            let built = build_multiplier(m)
                .map_err(|e| Error::Config(format!("multiplier {name:?}: {e}")))?;
            multipliers.insert(name.clone(), built);
        }
        let mut terms = Vec::with_capacity(raw.expression.len());
        for (i, prod) in raw.expression.iter().enumerate() {
            if prod.factors.is_empty() {
                return Err(Error::Config(format!("expression term {i} has no factors")));
            }
            let mut factors = Vec::with_capacity(prod.factors.len());
            for f in &prod.factors {
                factors.push(match f {
                    RawFactor::Marker(m) if m == "I" => Factor::Identity,
                    RawFactor::Marker(m) if m == "K" => Factor::Compact,
                    RawFactor::Marker(m) => {
                        return Err(Error::Config(format!(
                            "unknown factor {m:?} (expected \"I\", \"K\" or an object)"
                        )))
                    }
                    RawFactor::Gen(g) => Factor::Gen(Generator::new(
                        resolve(&multipliers, g.t.as_deref())?,
                        resolve(&multipliers, g.h.as_deref())?,
                    )),
                });
            }
            terms.push(Term {
                weight: prod
                    .weight
                    .as_ref()
                    .map_or(Complex64::new(1.0, 0.0), RawComplex::value),
                factors,
            });
        }
        let defaults = Resolution::default();
        let res = Resolution {
            t_points: raw.grid.t.unwrap_or(defaults.t_points).max(2),
            lambda_points: raw.grid.lambda.unwrap_or(defaults.lambda_points).max(2),
        };
        Ok(ProblemConfig {
            exp,
            multipliers,
            expr: OperatorExpr::from_terms(terms)?,
            res,
        })
    }

    /// The generator, when the expression is exactly one `T(a) + H(b)`.
    pub fn single_generator(&self) -> Option<&Generator> {
        match self.expr.terms() {
            [t] if t.weight == Complex64::new(1.0, 0.0) => match t.factors.as_slice() {
                [Factor::Gen(g)] => Some(g),
                _ => None,
            },
            _ => None,
        }
    }

    /// The generator array, when the expression is a plain sum of products
    /// of generators with unit weights and equal lengths.
    pub fn generator_matrix(&self) -> Option<GeneratorMatrix> {
        let terms = self.expr.terms();
        let r = terms.first()?.factors.len();
        let mut entries = Vec::new();
        for t in terms {
            if t.weight != Complex64::new(1.0, 0.0) || t.factors.len() != r {
                return None;
            }
            for f in &t.factors {
                match f {
                    Factor::Gen(g) => entries.push(g.clone()),
                    _ => return None,
                }
            }
        }
        GeneratorMatrix::new(terms.len(), r, entries).ok()
    }
}

fn resolve(ms: &BTreeMap<String, PcMultiplier>, name: Option<&str>) -> Result<PcMultiplier> {
    let Some(name) = name else {
        return Ok(PcMultiplier::zero());
    };
    let mut ops = Vec::new();
    let mut rest = name.trim();
    while let Some(c) = rest.chars().next().filter(|c| matches!(c, '-' | '~' | '^')) {
        ops.push(c);
        rest = &rest[1..];
    }
    let mut m = match rest {
        "0" => PcMultiplier::zero(),
        "1" => PcMultiplier::one(),
        _ => ms
            .get(rest)
            .cloned()
            .ok_or_else(|| Error::Config(format!("undefined multiplier {rest:?}")))?,
    };
    for op in ops.into_iter().rev() {
        m = match op {
            '-' => m.neg(),
            '~' => m.reflect_tilde(),
            _ => m.reflect_hat(),
        };
    }
    Ok(m)
}

fn term_list(terms: &[RawTerm]) -> TermList {
    TermList::new(
        terms
            .iter()
            .map(|t| {
                (
                    t.k,
                    Poly::new(t.poly.iter().map(RawComplex::value).collect()),
                )
            })
            .collect(),
    )
}

fn build_multiplier(m: &RawMultiplier) -> Result<PcMultiplier> {
    let mut acc = PcMultiplier::trig(
        &m.trig
            .iter()
            .map(|(k, c)| (*k, c.value()))
            .collect::<Vec<_>>(),
    );
    if !m.steps.is_empty() {
        let steps = m
            .steps
            .iter()
            .map(|(a, c)| Ok((a.radians()?, c.value())))
            .collect::<Result<Vec<_>>>()?;
        acc = acc.add(&PcMultiplier::steps(&steps)?)?;
    }
    if !m.linear.is_empty() {
        let nodes = m
            .linear
            .iter()
            .map(|(a, c)| Ok((a.radians()?, c.value())))
            .collect::<Result<Vec<_>>>()?;
        acc = acc.add(&PcMultiplier::piecewise_linear(&nodes)?)?;
    }
    if !m.pieces.is_empty() {
        let mut pieces = Vec::with_capacity(m.pieces.len());
        for p in &m.pieces {
            let from = p.from.radians()?;
            let mut len = normalize_angle(p.to.radians()? - from);
            if len == 0.0 {
                len = TAU;
            }
            let num = match (&p.value, p.terms.is_empty()) {
                (Some(v), true) => TermList::constant(v.value()),
                (None, false) => term_list(&p.terms),
                (None, true) => TermList::default(),
                (Some(_), false) => {
                    return Err(Error::Config(
                        "a piece takes either \"value\" or \"terms\", not both".into(),
                    ))
                }
            };
            let den = p.den.as_deref().map_or_else(TermList::one, term_list);
            pieces.push(Piece::rational(from, len, num, den));
        }
        acc = acc.add(&PcMultiplier::from_pieces(pieces)?)?;
    }
    if let Some(s) = &m.sawtooth {
        acc = acc.add(&PcMultiplier::sawtooth().scale(s.value()))?;
    }
    Ok(acc)
}
