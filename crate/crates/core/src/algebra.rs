//! Root data of simple and semi-simple Lie algebras.
//!
//! Conventions, fixed throughout the crate:
//!
//! * Dynkin nodes are numbered as in Bourbaki. For `B_n` the last node is
//!   short, for `C_n` the last node is long, `D_n` forks at node `n-2`, the
//!   `E` series has node 2 attached to node 4 and `G_2` has node 1 short.
//! * Every simple factor is normalized so that its long roots have length
//!   squared 2, i.e. `(theta, theta) = 2`.
//! * Weights are integer Dynkin-label vectors. The bilinear form on Dynkin
//!   labels is `(l, m) = l^T F m` with `F` the quadratic form matrix
//!   (Gram matrix of fundamental weights).
//!
//! User supplied projection matrices must use the same node numbering.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rat, Rat, RatMatrix};
use crate::weyl::WeylElement;

/// Cartan-Killing series letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Series> {
        Some(match c.to_ascii_uppercase() {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }

    pub fn admits(self, rank: usize) -> bool {
        match self {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        }
    }
}

/// A positive root, stored both in the simple-root basis and as Dynkin labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub coords: Vec<i64>,
    pub labels: Vec<i64>,
}

/// A simple Lie algebra together with its derived root data.
#[derive(Clone)]
pub struct SimpleAlgebra {
    series: Series,
    rank: usize,
    /// Row `i` holds the Dynkin labels of the simple root `alpha_i`.
    cartan: Vec<Vec<i64>>,
    /// `(alpha_i, alpha_j)`.
    root_gram: RatMatrix,
    form: RatMatrix,
    cartan_inverse: RatMatrix,
    positive_roots: Vec<Root>,
    theta: Vec<i64>,
    dual_coxeter: i64,
    conjugation: Vec<usize>,
    pub(crate) weyl_cache: OnceLock<Arc<Vec<WeylElement>>>,
}

impl fmt::Debug for SimpleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl PartialEq for SimpleAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series && self.rank == other.rank
    }
}
impl Eq for SimpleAlgebra {}

fn simple_root_gram(series: Series, n: usize) -> RatMatrix {
    let half = Rat::new(1, 2);
    let mut b = RatMatrix::zeros(n, n);
    let link = |b: &mut RatMatrix, i: usize, j: usize, v: Rat| {
        b[(i, j)] = v;
        b[(j, i)] = v;
    };
    match series {
        Series::A => {
            for i in 0..n {
                b[(i, i)] = rat(2);
            }
            for i in 0..n.saturating_sub(1) {
                link(&mut b, i, i + 1, rat(-1));
            }
        }
        Series::B => {
            for i in 0..n - 1 {
                b[(i, i)] = rat(2);
            }
            b[(n - 1, n - 1)] = rat(1);
            for i in 0..n - 1 {
                link(&mut b, i, i + 1, rat(-1));
            }
        }
        Series::C => {
            for i in 0..n - 1 {
                b[(i, i)] = rat(1);
            }
            b[(n - 1, n - 1)] = rat(2);
            for i in 0..n.saturating_sub(2) {
                link(&mut b, i, i + 1, -half);
            }
            link(&mut b, n - 2, n - 1, rat(-1));
        }
        Series::D => {
            for i in 0..n {
                b[(i, i)] = rat(2);
            }
            for i in 0..n - 2 {
                link(&mut b, i, i + 1, rat(-1));
            }
            link(&mut b, n - 3, n - 1, rat(-1));
        }
        Series::E => {
            for i in 0..n {
                b[(i, i)] = rat(2);
            }
            // Bourbaki: 1-3-4-5-6(-7-8), node 2 hangs off node 4.
            link(&mut b, 0, 2, rat(-1));
            link(&mut b, 1, 3, rat(-1));
            for i in 2..n - 1 {
                link(&mut b, i, i + 1, rat(-1));
            }
        }
        Series::F => {
            b[(0, 0)] = rat(2);
            b[(1, 1)] = rat(2);
            b[(2, 2)] = rat(1);
            b[(3, 3)] = rat(1);
            link(&mut b, 0, 1, rat(-1));
            link(&mut b, 1, 2, rat(-1));
            link(&mut b, 2, 3, -half);
        }
        Series::G => {
            b[(0, 0)] = Rat::new(2, 3);
            b[(1, 1)] = rat(2);
            link(&mut b, 0, 1, rat(-1));
        }
    }
    b
}

fn conjugation_permutation(series: Series, n: usize) -> Vec<usize> {
    match series {
        Series::A => (0..n).rev().collect(),
        Series::D if n % 2 == 1 => {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(n - 2, n - 1);
            p
        }
        Series::E if n == 6 => vec![5, 1, 4, 3, 2, 0],
        _ => (0..n).collect(),
    }
}

fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Root> {
    let n = cartan.len();
    let labels_of = |coords: &[i64]| -> Vec<i64> {
        (0..n)
            .map(|j| (0..n).map(|i| coords[i] * cartan[i][j]).sum())
            .collect()
    };
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut c = vec![0; n];
            c[i] = 1;
            c
        })
        .collect();
    let mut known: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut start = 0;
    // Roots are produced height by height; alpha_i-strings are computed
    // from the already complete lower layers.
    while start < roots.len() {
        let end = roots.len();
        for idx in start..end {
            let beta = roots[idx].clone();
            let labels = labels_of(&beta);
            for i in 0..n {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - labels[i];
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        roots.push(up);
                    }
                }
            }
        }
        start = end;
    }
    roots
        .into_iter()
        .map(|coords| {
            let labels = labels_of(&coords);
            Root { coords, labels }
        })
        .collect()
}

impl SimpleAlgebra {
    pub fn new(series: Series, rank: usize) -> Result<SimpleAlgebra> {
        if !series.admits(rank) {
            return Err(Error::Invalid(format!(
                "no simple Lie algebra {}{}",
                series.letter(),
                rank
            )));
        }
        let n = rank;
        let root_gram = simple_root_gram(series, n);
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = rat(2) * root_gram[(i, j)] / root_gram[(j, j)];
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        let a = RatMatrix::from_int_rows(&cartan);
        let cartan_inverse = a.inverse().expect("Cartan matrices are invertible");
        let half_norms = RatMatrix::from_fn(n, n, |i, j| {
            if i == j {
                root_gram[(i, i)] / rat(2)
            } else {
                Rat::zero()
            }
        });
        // (alpha_i, omega_j) = delta_ij |alpha_i|^2 / 2 and alpha_i = sum_k A_ik omega_k,
        // so A F = D with D the half-norm diagonal.
        let form = cartan_inverse.mul(&half_norms);
        let positive_roots = positive_roots(&cartan);
        let theta = positive_roots
            .iter()
            .max_by_key(|r| r.coords.iter().sum::<i64>())
            .expect("nonempty root system")
            .labels
            .clone();
        let rho = vec![1; n];
        let theta_rho = form
            .mul_int_vec(&rho)
            .iter()
            .zip(&theta)
            .fold(Rat::zero(), |acc, (f, &t)| acc + *f * rat(t));
        let dual_coxeter = (theta_rho + rat(1)).to_integer();
        Ok(SimpleAlgebra {
            series,
            rank,
            cartan,
            root_gram,
            form,
            cartan_inverse,
            positive_roots,
            theta,
            dual_coxeter,
            conjugation: conjugation_permutation(series, n),
            weyl_cache: OnceLock::new(),
        })
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.series.letter(), self.rank)
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn root_gram(&self) -> &RatMatrix {
        &self.root_gram
    }

    pub fn quadratic_form(&self) -> &RatMatrix {
        &self.form
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn rho(&self) -> Vec<i64> {
        vec![1; self.rank]
    }

    pub fn theta(&self) -> &[i64] {
        &self.theta
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    pub fn conjugation(&self) -> &[usize] {
        &self.conjugation
    }

    /// Tabulated dual Coxeter number, independent of the computed one.
    pub fn tabulated_dual_coxeter(&self) -> i64 {
        let n = self.rank as i64;
        match self.series {
            Series::A => n + 1,
            Series::B => 2 * n - 1,
            Series::C => n + 1,
            Series::D => 2 * n - 2,
            Series::E => match n {
                6 => 12,
                7 => 18,
                _ => 30,
            },
            Series::F => 9,
            Series::G => 4,
        }
    }

    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |m: u64| (1..=m).product::<u64>();
        match self.series {
            Series::A => fact(n + 1),
            Series::B | Series::C => (1u64 << n) * fact(n),
            Series::D => (1u64 << (n - 1)) * fact(n),
            Series::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Series::F => 1152,
            Series::G => 12,
        }
    }

    /// `|L_w / L^vee|`: index of the coroot lattice in the weight lattice,
    /// the determinant of the coroot labels `(alpha_i^vee, alpha_j^vee)`.
    pub fn coroot_index(&self) -> i64 {
        let n = self.rank;
        let m = RatMatrix::from_fn(n, n, |i, j| {
            rat(4) * self.root_gram[(i, j)] / (self.root_gram[(i, i)] * self.root_gram[(j, j)])
        });
        let d = m.determinant().abs();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    /// Simple-root coordinates of a weight given by labels.
    pub fn root_coords(&self, labels: &[i64]) -> Vec<Rat> {
        let n = self.rank;
        (0..n)
            .map(|j| {
                (0..n).fold(Rat::zero(), |acc, i| {
                    acc + rat(labels[i]) * self.cartan_inverse[(i, j)]
                })
            })
            .collect()
    }
}

/// Ordered direct sum of simple algebras.
#[derive(Clone)]
pub struct SemisimpleAlgebra {
    factors: Vec<SimpleAlgebra>,
    offsets: Vec<usize>,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    form: RatMatrix,
    positive_roots: Vec<Root>,
}

impl fmt::Debug for SemisimpleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for SemisimpleAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl PartialEq for SemisimpleAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}
impl Eq for SemisimpleAlgebra {}

impl FromStr for SemisimpleAlgebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        build_algebra(s)
    }
}

/// Parse an algebra name like `A2`, `a1+A1` or `B3` and derive its root data.
pub fn build_algebra(name: &str) -> Result<SemisimpleAlgebra> {
    let mut factors = Vec::new();
    for part in name.split('+') {
        let part = part.trim();
        let mut chars = part.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::Invalid(format!("empty factor in algebra name '{name}'")))?;
        let series = Series::from_letter(letter)
            .ok_or_else(|| Error::Invalid(format!("unknown series '{letter}' in '{name}'")))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad rank in factor '{part}'")))?;
        factors.push(SimpleAlgebra::new(series, rank)?);
    }
    SemisimpleAlgebra::new(factors)
}

impl SemisimpleAlgebra {
    pub fn new(factors: Vec<SimpleAlgebra>) -> Result<SemisimpleAlgebra> {
        if factors.is_empty() {
            return Err(Error::Invalid("an algebra needs at least one factor".into()));
        }
        let mut offsets = Vec::with_capacity(factors.len());
        let mut rank = 0;
        for f in &factors {
            offsets.push(rank);
            rank += f.rank();
        }
        let mut cartan = vec![vec![0; rank]; rank];
        let mut positive_roots = Vec::new();
        for (f, &off) in factors.iter().zip(&offsets) {
            for i in 0..f.rank() {
                for j in 0..f.rank() {
                    cartan[off + i][off + j] = f.cartan()[i][j];
                }
            }
            for r in f.positive_roots() {
                let mut coords = vec![0; rank];
                let mut labels = vec![0; rank];
                coords[off..off + f.rank()].copy_from_slice(&r.coords);
                labels[off..off + f.rank()].copy_from_slice(&r.labels);
                positive_roots.push(Root { coords, labels });
            }
        }
        let blocks: Vec<&RatMatrix> = factors.iter().map(|f| f.quadratic_form()).collect();
        let form = RatMatrix::block_diag(&blocks);
        Ok(SemisimpleAlgebra {
            factors,
            offsets,
            rank,
            cartan,
            form,
            positive_roots,
        })
    }

    pub fn simple(series: Series, rank: usize) -> Result<SemisimpleAlgebra> {
        Self::new(vec![SimpleAlgebra::new(series, rank)?])
    }

    /// `g + g`.
    pub fn doubled(&self) -> SemisimpleAlgebra {
        let mut factors = self.factors.clone();
        factors.extend(self.factors.iter().cloned());
        Self::new(factors).expect("nonempty")
    }

    pub fn name(&self) -> String {
        self.factors
            .iter()
            .map(SimpleAlgebra::name)
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn factors(&self) -> &[SimpleAlgebra] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Label positions belonging to factor `s`.
    pub fn factor_range(&self, s: usize) -> std::ops::Range<usize> {
        self.offsets[s]..self.offsets[s] + self.factors[s].rank()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn quadratic_form(&self) -> &RatMatrix {
        &self.form
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// Highest root of factor `s`, embedded in the full label space.
    pub fn theta(&self, s: usize) -> Weight {
        let mut v = vec![0; self.rank];
        v[self.factor_range(s)].copy_from_slice(self.factors[s].theta());
        Weight(v)
    }

    pub fn dual_coxeter(&self, s: usize) -> i64 {
        self.factors[s].dual_coxeter()
    }

    pub fn weyl_order(&self) -> u64 {
        self.factors.iter().map(SimpleAlgebra::weyl_order).product()
    }

    pub fn check_rank(&self, labels: &[i64]) -> Result<()> {
        if labels.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: labels.len(),
            });
        }
        Ok(())
    }

    /// Exact `(x, y) = x^T F y` for rational points.
    pub fn inner(&self, x: &RationalPoint, y: &RationalPoint) -> Result<Rat> {
        self.check_rank_len(x.coords.len())?;
        self.check_rank_len(y.coords.len())?;
        let fy = self.form.mul_vec(&y.coords);
        Ok(x
            .coords
            .iter()
            .zip(&fy)
            .fold(Rat::zero(), |acc, (a, b)| acc + *a * *b))
    }

    fn check_rank_len(&self, len: usize) -> Result<()> {
        if len != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: len,
            });
        }
        Ok(())
    }

    /// Exact inner product of two integral weights (no rank check).
    pub fn inner_weights(&self, x: &[i64], y: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for s in 0..self.factors.len() {
            let r = self.factor_range(s);
            let f = self.factors[s].quadratic_form();
            let off = r.start;
            for i in r.clone() {
                if x[i] == 0 {
                    continue;
                }
                for j in r.clone() {
                    if y[j] != 0 {
                        acc += f[(i - off, j - off)] * rat(x[i] * y[j]);
                    }
                }
            }
        }
        acc
    }

    /// Charge conjugation `-w_0`, applied factor by factor.
    pub fn conjugate(&self, w: &Weight) -> Weight {
        let mut out = vec![0; self.rank];
        for (s, f) in self.factors.iter().enumerate() {
            let off = self.offsets[s];
            for (i, &pi) in f.conjugation().iter().enumerate() {
                out[off + pi] = w.0[off + i];
            }
        }
        Weight(out)
    }

    /// Simple-root coordinates of a weight.
    pub fn root_coords(&self, w: &[i64]) -> Vec<Rat> {
        let mut out = Vec::with_capacity(self.rank);
        for (s, f) in self.factors.iter().enumerate() {
            out.extend(f.root_coords(&w[self.factor_range(s)]));
        }
        out
    }

    /// Height `sum_i c_i` of a weight written as `sum_i c_i alpha_i`.
    pub fn height(&self, w: &[i64]) -> Rat {
        self.root_coords(w).into_iter().sum()
    }
}

/// Integral weight in the Dynkin basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Weight {
        Weight(vec![0; rank])
    }

    pub fn labels(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn concat(&self, other: &Weight) -> Weight {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Weight(v)
    }

    pub fn to_point(&self) -> RationalPoint {
        RationalPoint {
            coords: self.0.iter().map(|&x| rat(x)).collect(),
        }
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Weight {
    type Err = Error;
    /// Accepts `[1,0]`, `1,0` or `[ 1, -2 ]`.
    fn from_str(s: &str) -> Result<Weight> {
        let t = s.trim();
        let t = t.strip_prefix('[').unwrap_or(t);
        let t = t.strip_suffix(']').unwrap_or(t);
        if t.trim().is_empty() {
            return Err(Error::Invalid(format!("empty weight literal '{s}'")));
        }
        t.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("bad label '{}' in weight '{s}'", tok.trim())))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

/// A point of the rational weight space.
///
/// Character arguments such as `xi_b = -2 pi i (b + rho) / (k + g^vee)` are
/// stored as the real rational vector `(b + rho) / (k + g^vee)`; the factor
/// `-2 pi i` is applied when a character is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub coords: Vec<Rat>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rat>) -> Self {
        RationalPoint { coords }
    }
}
