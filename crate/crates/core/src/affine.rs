//! Untwisted affine extensions at level `k`: integrable weights, the
//! Kac-Peterson modular S-matrix, characters at the special points
//! `xi_b = -2 pi i (b + rho) / (k + g^vee)` and the Verlinde formula.
//!
//! All phases are reduced exactly in rational arithmetic before `exp` is
//! taken, so entries are accurate to a few ulps regardless of level.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{RationalPoint, SemisimpleAlgebra, SimpleAlgebra, Weight};
use crate::error::{Error, Result};
use crate::linalg::{rat, Rat};
use crate::weyl::{weight_system, weyl_elements, WeightSystem};

/// Largest accepted deviation from an integer for quantities that must be
/// integral (fusion coefficients, branching coefficients, NIM entries).
pub const INTEGER_TOLERANCE: f64 = 1e-6;

/// One non-negative level per simple factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct LevelVector(pub Vec<i64>);

impl LevelVector {
    pub fn uniform(alg: &SemisimpleAlgebra, k: i64) -> LevelVector {
        LevelVector(vec![k; alg.num_factors()])
    }

    pub fn check(&self, alg: &SemisimpleAlgebra) -> Result<()> {
        if self.0.len() != alg.num_factors() {
            return Err(Error::Invalid(format!(
                "level vector {self} has {} entries but {} has {} simple factors",
                self.0.len(),
                alg,
                alg.num_factors()
            )));
        }
        if self.0.iter().any(|&k| k < 0) {
            return Err(Error::Invalid(format!("negative level in {self}")));
        }
        Ok(())
    }

    /// Componentwise `>=`.
    pub fn dominates(&self, other: &LevelVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn plus(&self, d: i64) -> LevelVector {
        LevelVector(self.0.iter().map(|k| k + d).collect())
    }
}

impl fmt::Display for LevelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// `k_s(c) = (theta_s, c_s)` for every simple factor.
pub fn level_of(alg: &SemisimpleAlgebra, c: &Weight) -> Result<Vec<i64>> {
    alg.check_rank(&c.0)?;
    Ok((0..alg.num_factors())
        .map(|s| {
            let v = alg.inner_weights(&alg.theta(s).0, &c.0);
            debug_assert!(v.is_integer());
            v.to_integer()
        })
        .collect())
}

/// Comarks `(theta, omega_i)`.
fn comarks(f: &SimpleAlgebra) -> Vec<i64> {
    f.quadratic_form()
        .mul_int_vec(f.theta())
        .into_iter()
        .map(|v| v.to_integer())
        .collect()
}

fn factor_integrable(f: &SimpleAlgebra, k: i64) -> Vec<Vec<i64>> {
    fn rec(marks: &[i64], pos: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if pos == marks.len() {
            out.push(cur.clone());
            return;
        }
        let mut c = 0;
        while c * marks[pos] <= budget {
            cur.push(c);
            rec(marks, pos + 1, budget - c * marks[pos], cur, out);
            cur.pop();
            c += 1;
        }
    }
    let mut out = Vec::new();
    rec(&comarks(f), 0, k, &mut Vec::new(), &mut out);
    out
}

/// Dominant weights with `(theta_s, c_s) <= k_s` for every factor, in
/// lexicographic order of the concatenated labels.
pub fn integrable_weights(alg: &SemisimpleAlgebra, k: &LevelVector) -> Result<Vec<Weight>> {
    k.check(alg)?;
    let per_factor: Vec<Vec<Vec<i64>>> = alg
        .factors()
        .iter()
        .zip(&k.0)
        .map(|(f, &ks)| factor_integrable(f, ks))
        .collect();
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for list in &per_factor {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for tail in list {
                let mut v = prefix.clone();
                v.extend_from_slice(tail);
                next.push(v);
            }
        }
        out = next;
    }
    Ok(out.into_iter().map(Weight).collect())
}

pub fn is_integrable(alg: &SemisimpleAlgebra, k: &LevelVector, c: &Weight) -> Result<bool> {
    Ok(c.is_dominant() && LevelVector(level_of(alg, c)?).0.iter().zip(&k.0).all(|(a, b)| a <= b))
}

/// `F` scaled to an integer matrix, with the scale.
fn scaled_form(f: &SimpleAlgebra) -> (Vec<Vec<i64>>, i64) {
    let form = f.quadratic_form();
    let n = f.rank();
    let mut denom = 1i64;
    for i in 0..n {
        for j in 0..n {
            denom = denom.lcm(form[(i, j)].denom());
        }
    }
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (form[(i, j)] * rat(denom)).to_integer())
                .collect()
        })
        .collect();
    (m, denom)
}

fn i_power(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Kac-Peterson S-matrix of one simple factor at one level.
struct FactorTable {
    weights: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    data: Vec<Complex64>,
}

impl FactorTable {
    fn build(f: &SimpleAlgebra, k: i64) -> Result<FactorTable> {
        let weights = factor_integrable(f, k);
        let n = weights.len();
        let kernel = KpKernel::new(f, k)?;
        let rows: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let wx = kernel.orbit(&weights[a]);
                (0..n).map(|b| kernel.entry_with_orbit(&wx, &weights[b])).collect()
            })
            .collect();
        let data = rows.into_iter().flatten().collect();
        let index = weights.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        Ok(FactorTable {
            weights,
            index,
            data,
        })
    }

    fn get(&self, a: usize, b: usize) -> Complex64 {
        self.data[a * self.weights.len() + b]
    }
}

/// Shared pieces of the Kac-Peterson sum for one simple factor.
struct KpKernel {
    rank: usize,
    form: Vec<Vec<i64>>,
    modulus: i64,
    phases: Vec<Complex64>,
    prefactor: Complex64,
    elements: std::sync::Arc<Vec<crate::weyl::WeylElement>>,
}

impl KpKernel {
    fn new(f: &SimpleAlgebra, k: i64) -> Result<KpKernel> {
        let elements = weyl_elements(f)?;
        let (form, denom) = scaled_form(f);
        let height = k + f.dual_coxeter();
        let modulus = denom * height;
        let phases = (0..modulus)
            .map(|t| Complex64::from_polar(1.0, -2.0 * PI * t as f64 / modulus as f64))
            .collect();
        let prefactor = i_power(f.num_positive_roots())
            * (f.coroot_index() as f64).powf(-0.5)
            * (height as f64).powf(-(f.rank() as f64) / 2.0);
        Ok(KpKernel {
            rank: f.rank(),
            form,
            modulus,
            phases,
            prefactor,
            elements,
        })
    }

    /// `(w(a+rho), sign(w))` for all `w`.
    fn orbit(&self, a: &[i64]) -> Vec<(Vec<i64>, i64)> {
        let x: Vec<i64> = a.iter().map(|v| v + 1).collect();
        self.elements.iter().map(|e| (e.apply(&x), e.sign)).collect()
    }

    fn entry_with_orbit(&self, orbit: &[(Vec<i64>, i64)], b: &[i64]) -> Complex64 {
        let n = self.rank;
        let y: Vec<i64> = b.iter().map(|v| v + 1).collect();
        let fy: Vec<i64> = (0..n)
            .map(|i| (0..n).map(|j| self.form[i][j] * y[j]).sum())
            .collect();
        let mut sum = Complex64::zero();
        for (wx, sign) in orbit {
            let t: i64 = wx.iter().zip(&fy).map(|(a, b)| a * b).sum();
            let p = self.phases[t.rem_euclid(self.modulus) as usize];
            if *sign > 0 {
                sum += p;
            } else {
                sum -= p;
            }
        }
        self.prefactor * sum
    }
}

fn check_integrable(alg: &SemisimpleAlgebra, k: &LevelVector, c: &Weight) -> Result<()> {
    alg.check_rank(&c.0)?;
    if !is_integrable(alg, k, c)? {
        return Err(Error::NotIntegrable {
            weight: c.to_string(),
            level: k.to_string(),
        });
    }
    Ok(())
}

/// A single S-matrix entry, computed directly (product over simple factors).
pub fn s_entry(alg: &SemisimpleAlgebra, k: &LevelVector, a: &Weight, b: &Weight) -> Result<Complex64> {
    k.check(alg)?;
    check_integrable(alg, k, a)?;
    check_integrable(alg, k, b)?;
    let mut out = Complex64::new(1.0, 0.0);
    for (s, f) in alg.factors().iter().enumerate() {
        let r = alg.factor_range(s);
        let kernel = KpKernel::new(f, k.0[s])?;
        out *= kernel.entry_with_orbit(&kernel.orbit(&a.0[r.clone()]), &b.0[r]);
    }
    Ok(out)
}

/// The full S-matrix of a semi-simple algebra at a level vector, indexed by
/// [`integrable_weights`]. Entries are products of per-factor tables and
/// are computed on access.
pub struct SMatrix {
    alg: SemisimpleAlgebra,
    level: LevelVector,
    weights: Vec<Weight>,
    index: HashMap<Weight, usize>,
    factor_index: Vec<Vec<usize>>,
    tables: Vec<FactorTable>,
    vacuum: usize,
}

impl SMatrix {
    pub fn new(alg: &SemisimpleAlgebra, level: &LevelVector) -> Result<SMatrix> {
        level.check(alg)?;
        let tables = alg
            .factors()
            .iter()
            .zip(&level.0)
            .map(|(f, &k)| FactorTable::build(f, k))
            .collect::<Result<Vec<_>>>()?;
        let weights = integrable_weights(alg, level)?;
        let factor_index = weights
            .iter()
            .map(|w| {
                tables
                    .iter()
                    .enumerate()
                    .map(|(s, t)| t.index[&w.0[alg.factor_range(s)]])
                    .collect()
            })
            .collect();
        let index: HashMap<Weight, usize> =
            weights.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let vacuum = index[&Weight::zero(alg.rank())];
        Ok(SMatrix {
            alg: alg.clone(),
            level: level.clone(),
            weights,
            index,
            factor_index,
            tables,
            vacuum,
        })
    }

    pub fn algebra(&self) -> &SemisimpleAlgebra {
        &self.alg
    }

    pub fn level(&self) -> &LevelVector {
        &self.level
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn index_of(&self, w: &Weight) -> Result<usize> {
        self.index.get(w).copied().ok_or_else(|| Error::NotIntegrable {
            weight: w.to_string(),
            level: self.level.to_string(),
        })
    }

    pub fn vacuum_index(&self) -> usize {
        self.vacuum
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize) -> Complex64 {
        let fa = &self.factor_index[a];
        let fb = &self.factor_index[b];
        let mut v = self.tables[0].get(fa[0], fb[0]);
        for s in 1..self.tables.len() {
            v *= self.tables[s].get(fa[s], fb[s]);
        }
        v
    }

    pub fn get(&self, a: &Weight, b: &Weight) -> Result<Complex64> {
        Ok(self.at(self.index_of(a)?, self.index_of(b)?))
    }

    /// `chi_a(xi_b) = S_ba / S_b0`.
    pub fn character_ratio(&self, a: usize, b: usize) -> Complex64 {
        self.at(b, a) / self.at(b, self.vacuum)
    }

    /// `max |(S^dagger S - 1)_ab|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.len();
        let dense: Vec<Complex64> = (0..n * n).map(|t| self.at(t / n, t % n)).collect();
        (0..n)
            .into_par_iter()
            .map(|a| {
                let mut worst = 0.0f64;
                for b in 0..n {
                    let mut acc = Complex64::zero();
                    for d in 0..n {
                        acc += dense[d * n + a].conj() * dense[d * n + b];
                    }
                    if a == b {
                        acc -= 1.0;
                    }
                    worst = worst.max(acc.norm());
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    /// `max |S_ab - S_ba|`.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.len();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..a {
                worst = worst.max((self.at(a, b) - self.at(b, a)).norm());
            }
        }
        worst
    }

    /// Verlinde formula `N_ij^l = sum_m conj(S_ml) S_mi S_mj / S_m0` for all
    /// `l`, rounded. Zero coefficients are dropped.
    pub fn fusion(&self, i: &Weight, j: &Weight) -> Result<FusionRow> {
        let ii = self.index_of(i)?;
        let jj = self.index_of(j)?;
        let n = self.len();
        let factors: Vec<Complex64> = (0..n)
            .map(|m| self.at(m, ii) * self.at(m, jj) / self.at(m, self.vacuum))
            .collect();
        let mut coefficients = Vec::new();
        let mut residual = 0.0f64;
        for l in 0..n {
            let mut acc = Complex64::zero();
            for (m, fm) in factors.iter().enumerate() {
                acc += self.at(m, l).conj() * fm;
            }
            let rounded = acc.re.round();
            residual = residual.max((acc.re - rounded).abs()).max(acc.im.abs());
            if rounded < 0.0 {
                return Err(Error::Numerical {
                    residual: -rounded,
                    tolerance: 0.0,
                    context: format!("negative fusion coefficient for {}", self.weights[l]),
                });
            }
            if rounded > 0.0 {
                coefficients.push((self.weights[l].clone(), rounded as u64));
            }
        }
        if residual > INTEGER_TOLERANCE {
            return Err(Error::Numerical {
                residual,
                tolerance: INTEGER_TOLERANCE,
                context: format!("Verlinde formula for {i} x {j} at level {}", self.level),
            });
        }
        Ok(FusionRow {
            coefficients,
            residual,
        })
    }

    /// A single Verlinde coefficient.
    pub fn verlinde(&self, i: &Weight, j: &Weight, l: &Weight) -> Result<FusionCoefficient> {
        let (ii, jj, ll) = (self.index_of(i)?, self.index_of(j)?, self.index_of(l)?);
        let mut acc = Complex64::zero();
        for m in 0..self.len() {
            acc += self.at(m, ll).conj() * self.at(m, ii) * self.at(m, jj) / self.at(m, self.vacuum);
        }
        let rounded = acc.re.round();
        let residual = (acc.re - rounded).abs().max(acc.im.abs());
        if residual > INTEGER_TOLERANCE || rounded < 0.0 {
            return Err(Error::Numerical {
                residual,
                tolerance: INTEGER_TOLERANCE,
                context: format!("Verlinde coefficient N_{{{i},{j}}}^{{{l}}}"),
            });
        }
        Ok(FusionCoefficient {
            value: rounded as u64,
            residual,
        })
    }
}

/// All nonzero `N_ij^l` for fixed `i, j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionRow {
    pub coefficients: Vec<(Weight, u64)>,
    pub residual: f64,
}

impl FusionRow {
    pub fn get(&self, l: &Weight) -> u64 {
        self.coefficients
            .iter()
            .find(|(w, _)| w == l)
            .map_or(0, |(_, v)| *v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FusionCoefficient {
    pub value: u64,
    pub residual: f64,
}

/// Verlinde coefficient `N_ij^l` at level `k`.
pub fn verlinde(
    alg: &SemisimpleAlgebra,
    k: &LevelVector,
    i: &Weight,
    j: &Weight,
    l: &Weight,
) -> Result<FusionCoefficient> {
    SMatrix::new(alg, k)?.verlinde(i, j, l)
}

/// `xi_b / (-2 pi i) = (b + rho) / (k + g^vee)`, factor by factor.
pub fn xi_point(alg: &SemisimpleAlgebra, k: &LevelVector, b: &Weight) -> RationalPoint {
    let mut coords = vec![Rat::zero(); alg.rank()];
    for s in 0..alg.num_factors() {
        let h = k.0[s] + alg.dual_coxeter(s);
        for i in alg.factor_range(s) {
            coords[i] = Rat::new(b.0[i] + 1, h);
        }
    }
    RationalPoint::new(coords)
}

/// Evaluates `sum_{j in M} mult(j) exp(-2 pi i (j, x))` for a fixed point `x`.
pub struct CharacterEvaluator {
    scaled: Vec<i64>,
    modulus: i64,
}

impl CharacterEvaluator {
    /// `x` is the real rational point; the `-2 pi i` factor is implicit.
    pub fn new(alg: &SemisimpleAlgebra, x: &RationalPoint) -> Result<Self> {
        alg.check_rank(&vec![0; x.coords.len()])?;
        let fx = alg.quadratic_form().mul_vec(&x.coords);
        let modulus = fx.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
        let scaled = fx.iter().map(|q| (*q * rat(modulus)).to_integer()).collect();
        Ok(CharacterEvaluator { scaled, modulus })
    }

    pub fn phase(&self, j: &[i64]) -> Complex64 {
        let t: i64 = j.iter().zip(&self.scaled).map(|(a, b)| a * b).sum();
        let r = t.rem_euclid(self.modulus);
        Complex64::from_polar(1.0, -2.0 * PI * r as f64 / self.modulus as f64)
    }

    pub fn evaluate(&self, ws: &WeightSystem) -> Complex64 {
        ws.iter()
            .fold(Complex64::zero(), |acc, (j, m)| acc + self.phase(&j.0) * m as f64)
    }
}

/// Direct character sum `chi_i(-2 pi i x) = sum_{j in M_i} exp(-2 pi i (j, x))`.
pub fn character_direct(alg: &SemisimpleAlgebra, i: &Weight, x: &RationalPoint) -> Result<Complex64> {
    let ws = weight_system(alg, i)?;
    Ok(CharacterEvaluator::new(alg, x)?.evaluate(&ws))
}

/// `chi_a(xi_b)` via the S-matrix ratio `S_ba / S_b0`.
pub fn character_via_s(alg: &SemisimpleAlgebra, k: &LevelVector, a: &Weight, b: &Weight) -> Result<Complex64> {
    let s_ba = s_entry(alg, k, b, a)?;
    let s_b0 = s_entry(alg, k, b, &Weight::zero(alg.rank()))?;
    if s_b0.norm() == 0.0 {
        return Err(Error::Numerical {
            residual: 0.0,
            tolerance: 0.0,
            context: format!("S_(b,0) vanished for b = {b}"),
        });
    }
    Ok(s_ba / s_b0)
}
