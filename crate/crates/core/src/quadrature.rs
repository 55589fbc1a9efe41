//! Integral representations of branching coefficients and the Riemann-sum
//! view of the closed formula as the level grows.
//!
//! Both integrands are trigonometric polynomials in disguise, so the
//! midpoint rule becomes exact once the number of points exceeds their
//! degree; the doubling loop detects that point.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::affine::{LevelVector, SMatrix};
use crate::algebra::Weight;
use crate::branching::{characters_at_xi, level_bound_of};
use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::weyl::weight_system;

pub const DEFAULT_TOLERANCE: f64 = 1e-4;
pub const MAX_POINTS: usize = 1 << 20;
const START_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub rounded: i64,
    pub residual: f64,
    pub points: usize,
}

fn midpoint(f: &impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    (0..n).map(|m| f(lo + (m as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Midpoint rule on `[lo, hi]`, doubling the point count until two
/// successive values differ by less than `tol / 10`.
pub fn adaptive_midpoint(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    let mut n = START_POINTS;
    let mut prev = midpoint(&f, lo, hi, n);
    loop {
        if 2 * n > MAX_POINTS {
            return Err(Error::NoConvergence {
                points: n,
                last_change: f64::NAN,
            });
        }
        n *= 2;
        let cur = midpoint(&f, lo, hi, n);
        let change = (cur - prev).abs();
        if change < tol / 10.0 {
            let rounded = cur.round();
            let residual = (cur - rounded).abs();
            if residual >= tol {
                return Err(Error::Numerical {
                    residual,
                    tolerance: tol,
                    context: "quadrature value is not close to an integer".into(),
                });
            }
            return Ok(QuadratureResult {
                value: cur,
                rounded: rounded as i64,
                residual,
                points: n,
            });
        }
        if 2 * n > MAX_POINTS {
            return Err(Error::NoConvergence {
                points: n,
                last_change: change,
            });
        }
        prev = cur;
    }
}

fn check_labels(labels: &[i64]) -> Result<()> {
    if labels.iter().any(|&v| v < 0) {
        return Err(Error::NotDominant(Weight(labels.to_vec()).to_string()));
    }
    Ok(())
}

/// `2 int_0^1 sin(pi(a+1)x) sin(pi(a1+1)x) sin(pi(a2+1)x) / sin(pi x) dx`,
/// the multiplicity of `a` in `a1 (x) a2` for `A1`.
pub fn integral_a1_tensor(a1: i64, a2: i64, a: i64, tol: f64) -> Result<QuadratureResult> {
    check_labels(&[a1, a2, a])?;
    let f = |x: f64| {
        let s = (PI * x).sin();
        2.0 * (PI * (a + 1) as f64 * x).sin() * (PI * (a1 + 1) as f64 * x).sin() * (PI * (a2 + 1) as f64 * x).sin()
            / s
    };
    adaptive_midpoint(f, 0.0, 1.0, tol)
}

/// `int_0^{1/2} sin(2pi(a+1)x) (sin 2pi(i1+1)x + sin 2pi(i2+1)x - sin 2pi(i1+i2+2)x) / sin^2(pi x) dx`,
/// the branching coefficient of `(i1, i2)` to `a` along the index-1
/// embedding `A1 -> A2`.
pub fn integral_a1_in_a2(i1: i64, i2: i64, a: i64, tol: f64) -> Result<QuadratureResult> {
    check_labels(&[i1, i2, a])?;
    let t = 2.0 * PI;
    let f = |x: f64| {
        let s = (PI * x).sin();
        (t * (a + 1) as f64 * x).sin()
            * ((t * (i1 + 1) as f64 * x).sin() + (t * (i2 + 1) as f64 * x).sin()
                - (t * (i1 + i2 + 2) as f64 * x).sin())
            / (s * s)
    };
    adaptive_midpoint(f, 0.0, 0.5, tol)
}

/// The closed-formula sum for `b_i^a` at one level, before rounding.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendPoint {
    pub level: LevelVector,
    pub raw: f64,
    pub imaginary: f64,
    pub value: i64,
    pub residual: f64,
}

/// Evaluates `sum_d conj(S_da) S_d0 chi_i(P* xi_d)` at each level of
/// `levels` (each at least [`crate::branching::level_bound`]).
pub fn riemann_trend(emb: &Embedding, i: &Weight, a: &Weight, levels: &[LevelVector]) -> Result<Vec<TrendPoint>> {
    emb.g().check_rank(&i.0)?;
    emb.p().check_rank(&a.0)?;
    if !i.is_dominant() {
        return Err(Error::NotDominant(i.to_string()));
    }
    let ws = weight_system(emb.g(), i)?;
    let bound = level_bound_of(emb, &ws);
    let mut out = Vec::with_capacity(levels.len());
    for k in levels {
        k.check(emb.p())?;
        if !k.dominates(&bound) {
            return Err(Error::LevelTooLow {
                given: k.to_string(),
                required: bound.to_string(),
            });
        }
        let smat = SMatrix::new(emb.p(), k)?;
        let Ok(ai) = smat.index_of(a) else {
            // Beyond the level: the coefficient vanishes identically.
            out.push(TrendPoint {
                level: k.clone(),
                raw: 0.0,
                imaginary: 0.0,
                value: 0,
                residual: 0.0,
            });
            continue;
        };
        let chars = characters_at_xi(emb, &ws, &smat)?;
        let vac = smat.vacuum_index();
        let acc = chars
            .iter()
            .enumerate()
            .fold(Complex64::zero(), |acc, (d, chi)| acc + smat.at(d, ai).conj() * smat.at(d, vac) * chi);
        let value = acc.re.round();
        out.push(TrendPoint {
            level: k.clone(),
            raw: acc.re,
            imaginary: acc.im,
            value: value as i64,
            residual: (acc.re - value).abs().max(acc.im.abs()),
        });
    }
    Ok(out)
}
