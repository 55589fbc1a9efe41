//! NIM-reps built from branching data,
//! `(n_i)_b^a = sum_c b_i^c N_cb^a = sum_{j in M_i} eps(w) delta_{a, w(Pj+b+rho)-rho}`,
//! checked on finite windows of dominant weights, and the finite-level NIM-rep
//! of the twisted (diagram automorphism) boundary conditions of `A2` at
//! level `k`, with the two label maps relating it to the two embeddings
//! `A1 -> A2`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::affine::{xi_point, CharacterEvaluator, LevelVector, SMatrix, INTEGER_TOLERANCE};
use crate::algebra::{build_algebra, SemisimpleAlgebra, Weight};
use crate::branching::{level_bound_of, rs_accumulate, tensor};
use crate::embedding::{catalog_lookup, Embedding};
use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::weyl::{weight_system, WeightSystem};

/// `(n_i)_b^a` for `b, a` in a window of dominant `p`-weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NimMatrix {
    pub source: Weight,
    pub window: Vec<Weight>,
    /// `entries[b][a]`.
    pub entries: Vec<Vec<u64>>,
    /// Per row: whether part of its support lies outside the window.
    pub truncated: Vec<bool>,
}

impl NimMatrix {
    pub fn get(&self, b: usize, a: usize) -> u64 {
        self.entries[b][a]
    }
}

/// All dominant `p`-weights of level at most `level` on every factor.
pub fn level_window(p: &SemisimpleAlgebra, level: i64) -> Result<Vec<Weight>> {
    crate::affine::integrable_weights(p, &LevelVector::uniform(p, level))
}

fn nim_rows(emb: &Embedding, i: &Weight, ws: &WeightSystem, window: &[Weight]) -> Result<NimMatrix> {
    let index: HashMap<&Weight, usize> = window.iter().enumerate().map(|(n, w)| (w, n)).collect();
    let mut entries = Vec::with_capacity(window.len());
    let mut truncated = Vec::with_capacity(window.len());
    for b in window {
        emb.p().check_rank(&b.0)?;
        if !b.is_dominant() {
            return Err(Error::NotDominant(b.to_string()));
        }
        let row = rs_accumulate(emb, ws, &b.0)?;
        let mut out = vec![0u64; window.len()];
        let mut cut = false;
        for (a, v) in row {
            if v < 0 {
                return Err(Error::InvalidEmbedding(format!(
                    "{}: (n_{i})_{b}^{} = {v} is negative",
                    emb.name(),
                    Weight(a)
                )));
            }
            if v == 0 {
                continue;
            }
            match index.get(&Weight(a)) {
                Some(&col) => out[col] = v as u64,
                None => cut = true,
            }
        }
        entries.push(out);
        truncated.push(cut);
    }
    Ok(NimMatrix {
        source: i.clone(),
        window: window.to_vec(),
        entries,
        truncated,
    })
}

/// Rows `b` of `n_i` restricted to columns in `window`.
pub fn nim_window(emb: &Embedding, i: &Weight, window: &[Weight]) -> Result<NimMatrix> {
    emb.g().check_rank(&i.0)?;
    if !i.is_dominant() {
        return Err(Error::NotDominant(i.to_string()));
    }
    if window.is_empty() {
        return Err(Error::Window("empty window".into()));
    }
    let ws = weight_system(emb.g(), i)?;
    nim_rows(emb, i, &ws, window)
}

/// Outcome of [`verify_nim`]; both violations must be zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NimReport {
    pub window_size: usize,
    pub interior_size: usize,
    /// `max |(n_i n_j - sum_l N_ij^l n_l)_b^a|` over the interior.
    pub product_violation: u64,
    /// `max |(n_{i+})_b^a - (n_i)_a^b|` over the interior.
    pub transpose_violation: u64,
    pub checked_entries: usize,
}

impl NimReport {
    pub fn passes(&self) -> bool {
        self.product_violation == 0 && self.transpose_violation == 0
    }
}

/// Check `n_i n_j = sum_l N_ij^l n_l` and `n_{i+} = n_i^T` on the weights
/// of level `<= interior_level`, using a window `margin` levels larger.
/// `N_ij^l` are tensor product multiplicities of `g`.
pub fn verify_nim(
    emb: &Embedding,
    i: &Weight,
    j: &Weight,
    interior_level: i64,
    margin: i64,
) -> Result<NimReport> {
    let g = emb.g();
    for w in [i, j] {
        g.check_rank(&w.0)?;
        if !w.is_dominant() {
            return Err(Error::NotDominant(w.to_string()));
        }
    }
    let window = level_window(emb.p(), interior_level + margin)?;
    let interior: Vec<usize> = {
        let lim = LevelVector::uniform(emb.p(), interior_level);
        (0..window.len())
            .filter(|&n| {
                let lv = crate::affine::level_of(emb.p(), &window[n]).expect("rank checked");
                lim.dominates(&LevelVector(lv))
            })
            .collect()
    };
    if interior.is_empty() {
        return Err(Error::Window(format!("no weights of level <= {interior_level}")));
    }

    let ws_i = weight_system(g, i)?;
    let ws_j = weight_system(g, j)?;
    let ni = nim_rows(emb, i, &ws_i, &window)?;
    let nj = nim_rows(emb, j, &ws_j, &window)?;

    // Every interior row of n_i must be complete, otherwise the product
    // sum over intermediate weights is cut off.
    for &b in &interior {
        if ni.truncated[b] {
            return Err(Error::Window(format!(
                "row {} of n_{i} leaves the window of level {}; increase the margin (level bound of {i} is {})",
                window[b],
                interior_level + margin,
                level_bound_of(emb, &ws_i)
            )));
        }
    }

    let fusion = tensor(g, i, j)?;
    let mut rhs = vec![vec![0u64; window.len()]; window.len()];
    for (l, mult) in &fusion.entries {
        let nl = nim_rows(emb, l, &weight_system(g, l)?, &window)?;
        for &b in &interior {
            for &a in &interior {
                rhs[b][a] += mult * nl.entries[b][a];
            }
        }
    }
    let mut product_violation = 0u64;
    let mut checked = 0;
    for &b in &interior {
        for &a in &interior {
            let lhs: u64 = (0..window.len()).map(|c| ni.entries[b][c] * nj.entries[c][a]).sum();
            product_violation = product_violation.max(lhs.abs_diff(rhs[b][a]));
            checked += 1;
        }
    }

    let iplus = g.conjugate(i);
    let nip = nim_rows(emb, &iplus, &weight_system(g, &iplus)?, &window)?;
    let mut transpose_violation = 0u64;
    for &b in &interior {
        for &a in &interior {
            transpose_violation = transpose_violation.max(nip.entries[b][a].abs_diff(ni.entries[a][b]));
            checked += 1;
        }
    }
    Ok(NimReport {
        window_size: window.len(),
        interior_size: interior.len(),
        product_violation,
        transpose_violation,
        checked_entries: checked,
    })
}

/// Symmetric half-integer `A2` weight `(alpha, alpha)`, stored as `2 alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedLabel {
    pub twice: i64,
    pub level: i64,
}

impl TwistedLabel {
    pub fn new(level: i64, twice: i64) -> Result<TwistedLabel> {
        check_even_level(level)?;
        if twice < 0 || twice > level / 2 {
            return Err(Error::SelectionRule(format!(
                "2*alpha = {twice} outside 0..={} at level {level}",
                level / 2
            )));
        }
        Ok(TwistedLabel { twice, level })
    }

    /// All labels at an even level.
    pub fn all(level: i64) -> Result<Vec<TwistedLabel>> {
        check_even_level(level)?;
        Ok((0..=level / 2).map(|twice| TwistedLabel { twice, level }).collect())
    }

    pub fn alpha(&self) -> Rat {
        Rat::new(self.twice, 2)
    }
}

impl fmt::Display for TwistedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.alpha();
        write!(f, "({a},{a})")
    }
}

fn check_even_level(k: i64) -> Result<()> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Invalid(format!("twisted A2 constructions need an even level >= 2, got {k}")));
    }
    Ok(())
}

/// `Psi(a) = (a/2, a/2)`.
pub fn psi(level: i64, a: i64) -> Result<TwistedLabel> {
    if a < 0 {
        return Err(Error::SelectionRule(format!("negative A1 weight {a}")));
    }
    TwistedLabel::new(level, a)
}

/// `Psi'(a) = (k/4, k/4) - (a/4, a/4)`, defined for even `a <= k`.
pub fn psi_prime(level: i64, a: i64) -> Result<TwistedLabel> {
    check_even_level(level)?;
    if a < 0 || a > level || a % 2 != 0 {
        return Err(Error::SelectionRule(format!(
            "Psi' needs an even A1 weight in 0..={level}, got {a}"
        )));
    }
    TwistedLabel::new(level, (level - a) / 2)
}

/// The label map for `B_n -> A_2n`:
/// `(1/4)(2a_{n-1}, .., 2a_1, M, M, 2a_1, .., 2a_{n-1})` with
/// `M = k - 2(a_1 + .. + a_{n-1}) - a_n`. The result must have `2 alpha_i`
/// a non-negative integer and `alpha_1 + .. + alpha_n <= k/4`.
pub fn a2n_psi_prime(n: usize, level: i64, a: &[i64]) -> Result<Vec<Rat>> {
    check_even_level(level)?;
    if n == 0 || a.len() != n {
        return Err(Error::RankMismatch {
            expected: n,
            got: a.len(),
        });
    }
    if a.iter().any(|&v| v < 0) {
        return Err(Error::NotDominant(Weight(a.to_vec()).to_string()));
    }
    let middle = level - 2 * a[..n - 1].iter().sum::<i64>() - a[n - 1];
    let mut half: Vec<i64> = a[..n - 1].iter().rev().map(|v| 2 * v).collect();
    half.push(middle);
    let mut labels: Vec<Rat> = half.iter().map(|&v| Rat::new(v, 4)).collect();
    labels.extend(half.iter().rev().map(|&v| Rat::new(v, 4)));
    let two = Rat::from_integer(2);
    for (pos, x) in labels.iter().enumerate() {
        let d = *x * two;
        if !d.is_integer() || d < Rat::zero() {
            return Err(Error::SelectionRule(format!(
                "label {} of Psi'({}) at level {level} is {x}; 2*alpha must be a non-negative integer",
                pos + 1,
                Weight(a.to_vec())
            )));
        }
    }
    let total: Rat = labels[..n].iter().copied().sum();
    if total > Rat::new(level, 4) {
        return Err(Error::SelectionRule(format!(
            "Psi'({}) at level {level} has label sum {total} > k/4",
            Weight(a.to_vec())
        )));
    }
    Ok(labels)
}

/// `S^omega_{mu alpha} = 2/sqrt(k+3) sin(2 pi (mu+1)(2 alpha+1)/(k+3))`.
pub fn a2_twisted_s(level: i64, mu: i64, alpha: &TwistedLabel) -> Result<f64> {
    check_even_level(level)?;
    if alpha.level != level {
        return Err(Error::Invalid(format!("label {alpha} belongs to level {}, not {level}", alpha.level)));
    }
    if mu < 0 || mu > level {
        return Err(Error::Invalid(format!("mu = {mu} outside 0..={level}")));
    }
    let h = (level + 3) as f64;
    Ok(2.0 / h.sqrt() * (2.0 * PI * ((mu + 1) * (alpha.twice + 1)) as f64 / h).sin())
}

/// `S_{(mu,mu),i} / S_{(mu,mu),0}` of `A2` at level `k` in closed form.
pub fn a2_symmetric_ratio(level: i64, i: &Weight, mu: i64) -> f64 {
    let x = PI * (mu + 1) as f64 / (level + 3) as f64;
    let (i1, i2) = (i.0[0] as f64, i.0[1] as f64);
    let num = (2.0 * x * (i1 + 1.0)).sin() + (2.0 * x * (i2 + 1.0)).sin() - (2.0 * x * (i1 + i2 + 2.0)).sin();
    num / (8.0 * x.sin().powi(3) * x.cos())
}

/// One entry of the twisted NIM-rep, with its rounding residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwistedEntry {
    pub value: u64,
    pub residual: f64,
}

/// The twisted `A2` NIM-rep at one even level. Holds the `A2` S-matrix used
/// to cross-check the closed-form character ratios.
pub struct TwistedA2 {
    level: i64,
    a2: SemisimpleAlgebra,
    smat: SMatrix,
    labels: Vec<TwistedLabel>,
    s_omega: Vec<Vec<f64>>,
}

impl TwistedA2 {
    pub fn new(level: i64) -> Result<TwistedA2> {
        check_even_level(level)?;
        let a2 = build_algebra("A2")?;
        let smat = SMatrix::new(&a2, &LevelVector(vec![level]))?;
        let labels = TwistedLabel::all(level)?;
        let s_omega = (0..=level / 2)
            .map(|mu| labels.iter().map(|l| a2_twisted_s(level, mu, l)).collect())
            .collect::<Result<_>>()?;
        Ok(TwistedA2 {
            level,
            a2,
            smat,
            labels,
            s_omega,
        })
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn labels(&self) -> &[TwistedLabel] {
        &self.labels
    }

    /// Closed-form ratios for `mu = 0..=k/2`, after checking them against the
    /// Kac-Peterson S-matrix.
    fn ratios(&self, i: &Weight) -> Result<Vec<f64>> {
        let ii = self.smat.index_of(i)?;
        (0..=self.level / 2)
            .map(|mu| {
                let closed = a2_symmetric_ratio(self.level, i, mu);
                let m = self.smat.index_of(&Weight(vec![mu, mu]))?;
                let kp = self.smat.character_ratio(ii, m);
                let dev = (kp - closed).norm();
                if dev > 1e-8 {
                    return Err(Error::Numerical {
                        residual: dev,
                        tolerance: 1e-8,
                        context: format!("A2 character ratio for {i} at mu = {mu}"),
                    });
                }
                Ok(closed)
            })
            .collect()
    }

    /// The full matrix `(n_i)_beta^alpha`, rows `beta`, columns `alpha`.
    pub fn matrix(&self, i: &Weight) -> Result<Vec<Vec<TwistedEntry>>> {
        self.a2.check_rank(&i.0)?;
        let ratios = self.ratios(i)?;
        let n = self.labels.len();
        let mut out = vec![Vec::with_capacity(n); n];
        for (beta, row) in out.iter_mut().enumerate() {
            for alpha in 0..n {
                let v: f64 = (0..=self.level as usize / 2)
                    .map(|mu| self.s_omega[mu][alpha] * self.s_omega[mu][beta] * ratios[mu])
                    .sum();
                row.push(round_entry(v, &format!("twisted A2 NIM-rep n_{i} at level {}", self.level))?);
            }
        }
        Ok(out)
    }

    pub fn entry(&self, i: &Weight, alpha: &TwistedLabel, beta: &TwistedLabel) -> Result<TwistedEntry> {
        for l in [alpha, beta] {
            if l.level != self.level {
                return Err(Error::Invalid(format!("label {l} belongs to level {}", l.level)));
            }
        }
        let ratios = self.ratios(i)?;
        let v: f64 = (0..=self.level as usize / 2)
            .map(|mu| self.s_omega[mu][alpha.twice as usize] * self.s_omega[mu][beta.twice as usize] * ratios[mu])
            .sum();
        round_entry(v, &format!("twisted A2 NIM-rep n_{i} at level {}", self.level))
    }
}

fn round_entry(v: f64, context: &str) -> Result<TwistedEntry> {
    let rounded = v.round();
    let residual = (v - rounded).abs();
    if residual > INTEGER_TOLERANCE || rounded < 0.0 {
        return Err(Error::Numerical {
            residual,
            tolerance: INTEGER_TOLERANCE,
            context: context.to_string(),
        });
    }
    Ok(TwistedEntry {
        value: rounded as u64,
        residual,
    })
}

/// `(n_i)_{Psi'(b)}^{Psi'(a)}` through the `A1` S-matrix at level `k+1`:
/// `sum_{mu=0}^{k+1} conj(S_{mu a}) S_{mu b} chi_i(P'* xi_mu)` with `P'` the
/// index-4 embedding.
pub fn a2_nimrep_extended(level: i64, i: &Weight, a: i64, b: i64) -> Result<TwistedEntry> {
    psi_prime(level, a)?;
    psi_prime(level, b)?;
    let emb = catalog_lookup("A1-in-A2-xe4")?;
    let k1 = LevelVector(vec![level + 1]);
    let smat = SMatrix::new(emb.p(), &k1)?;
    let ws = weight_system(emb.g(), i)?;
    let (ai, bi) = (smat.index_of(&Weight(vec![a]))?, smat.index_of(&Weight(vec![b]))?);
    let mut acc = Complex64::zero();
    for (m, mu) in smat.weights().iter().enumerate() {
        let y = emb.pstar_apply(&xi_point(emb.p(), &k1, mu))?;
        let chi = CharacterEvaluator::new(emb.g(), &y)?.evaluate(&ws);
        acc += smat.at(m, ai).conj() * smat.at(m, bi) * chi;
    }
    if acc.im.abs() > INTEGER_TOLERANCE {
        return Err(Error::Numerical {
            residual: acc.im.abs(),
            tolerance: INTEGER_TOLERANCE,
            context: format!("extended twisted sum for {i}"),
        });
    }
    round_entry(acc.re, &format!("extended twisted sum for {i} at level {level}"))
}

/// `(n_i)_beta^alpha` at level `k`, evaluated from the closed-form sum over
/// `mu = 0..=k/2`.
pub fn a2_nimrep_finite(level: i64, i: &Weight, alpha: &TwistedLabel, beta: &TwistedLabel) -> Result<TwistedEntry> {
    TwistedA2::new(level)?.entry(i, alpha, beta)
}
