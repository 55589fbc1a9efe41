//! Branching coefficients `b_i^a` of `g`-modules restricted to `p`, by three
//! independent routes:
//!
//! * `branch_rs`: signed reflection of every projected weight `P j + rho`
//!   into the dominant chamber (Racah-Speiser style, exact integers);
//! * `branch_closed`: the S-matrix sum
//!   `b_i^a = sum_d conj(S_da) S_d0 chi_i(P* xi_d)` at a level `k`;
//! * `branch_oracle`: peel highest weights off the projected multiset.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{xi_point, CharacterEvaluator, LevelVector, SMatrix, INTEGER_TOLERANCE};
use crate::algebra::{SemisimpleAlgebra, Weight};
use crate::embedding::{diagonal, Embedding};
use crate::error::{Error, Result};
use crate::linalg::Rat;
use crate::weyl::{dimension, dominant_in_place, weight_system, WeightSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Closed,
    RacahSpeiser,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Closed => "closed",
            Method::RacahSpeiser => "racah_speiser",
            Method::Oracle => "oracle",
        })
    }
}

/// `b_i^a` for one source weight; zero coefficients are omitted and the
/// entries are sorted by `a` in descending lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchingTable {
    pub embedding: String,
    pub source: Weight,
    pub entries: Vec<(Weight, u64)>,
    pub method: Method,
    /// Largest distance to an integer before rounding (closed method only).
    pub residual: Option<f64>,
    /// Level used by the closed method.
    pub level: Option<LevelVector>,
}

impl BranchingTable {
    fn from_map(emb: &Embedding, i: &Weight, map: HashMap<Vec<i64>, i64>, method: Method) -> Result<Self> {
        let mut entries = Vec::with_capacity(map.len());
        for (a, v) in map {
            if v < 0 {
                return Err(Error::InvalidEmbedding(format!(
                    "{}: coefficient of {} in the restriction of {i} is {v}",
                    emb.name(),
                    Weight(a)
                )));
            }
            if v > 0 {
                entries.push((Weight(a), v as u64));
            }
        }
        entries.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        Ok(BranchingTable {
            embedding: emb.name().to_string(),
            source: i.clone(),
            entries,
            method,
            residual: None,
            level: None,
        })
    }

    pub fn get(&self, a: &Weight) -> u64 {
        self.entries.iter().find(|(w, _)| w == a).map_or(0, |(_, v)| *v)
    }

    /// Same coefficients, regardless of method and residual.
    pub fn same_coefficients(&self, other: &BranchingTable) -> bool {
        self.entries == other.entries
    }

    /// `sum_a b_i^a dim(a)`.
    pub fn restricted_dimension(&self, p: &SemisimpleAlgebra) -> Result<u64> {
        self.entries
            .iter()
            .try_fold(0u64, |acc, (a, m)| Ok(acc + m * dimension(p, a)?))
    }
}

fn require_dominant(alg: &SemisimpleAlgebra, i: &Weight) -> Result<()> {
    alg.check_rank(&i.0)?;
    if !i.is_dominant() {
        return Err(Error::NotDominant(i.to_string()));
    }
    Ok(())
}

/// Per factor of `p`, `max_{j in M_i} (theta_s, (P j)_s)`. Every `a` with
/// `b_i^a != 0` is a dominant element of `P M_i`, so this bounds its level.
pub fn level_bound(emb: &Embedding, i: &Weight) -> Result<LevelVector> {
    require_dominant(emb.g(), i)?;
    let ws = weight_system(emb.g(), i)?;
    Ok(level_bound_of(emb, &ws))
}

pub(crate) fn level_bound_of(emb: &Embedding, ws: &WeightSystem) -> LevelVector {
    let p = emb.p();
    let thetas: Vec<Vec<i64>> = (0..p.num_factors())
        .map(|s| {
            // (theta_s, x) as an integer functional on labels: F theta_s.
            let t = p.theta(s);
            p.quadratic_form()
                .mul_int_vec(&t.0)
                .into_iter()
                .map(|q| q.to_integer())
                .collect()
        })
        .collect();
    let mut best = vec![0i64; p.num_factors()];
    for (j, _) in ws.iter() {
        let pj = emb.project_labels(&j.0);
        for (s, t) in thetas.iter().enumerate() {
            let v: i64 = t.iter().zip(&pj).map(|(a, b)| a * b).sum();
            best[s] = best[s].max(v);
        }
    }
    LevelVector(best)
}

/// Signed accumulation of `w(P j + shift + rho) - rho` over the weight
/// system; weights landing on a chamber wall are dropped.
pub(crate) fn rs_accumulate(emb: &Embedding, ws: &WeightSystem, shift: &[i64]) -> Result<HashMap<Vec<i64>, i64>> {
    let cartan = emb.p().cartan();
    ws.entries()
        .par_chunks(256)
        .map(|chunk| -> Result<HashMap<Vec<i64>, i64>> {
            let mut acc: HashMap<Vec<i64>, i64> = HashMap::new();
            for (j, m) in chunk {
                let mut x = emb.project_labels(&j.0);
                for (v, s) in x.iter_mut().zip(shift) {
                    *v += s + 1;
                }
                let sign = dominant_in_place(cartan, &mut x)?;
                if x.contains(&0) {
                    continue;
                }
                for v in x.iter_mut() {
                    *v -= 1;
                }
                *acc.entry(x).or_insert(0) += sign * *m as i64;
            }
            Ok(acc)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            Ok(a)
        })
}

/// Branching by signed reflection of the projected weights.
pub fn branch_rs(emb: &Embedding, i: &Weight) -> Result<BranchingTable> {
    require_dominant(emb.g(), i)?;
    let ws = weight_system(emb.g(), i)?;
    branch_rs_with(emb, i, &ws)
}

pub fn branch_rs_with(emb: &Embedding, i: &Weight, ws: &WeightSystem) -> Result<BranchingTable> {
    let zero = vec![0; emb.p().rank()];
    let map = rs_accumulate(emb, ws, &zero)?;
    BranchingTable::from_map(emb, i, map, Method::RacahSpeiser)
}

/// Branching by the S-matrix formula at level `k` (default: [`level_bound`]).
pub fn branch_closed(emb: &Embedding, i: &Weight, k: Option<&LevelVector>) -> Result<BranchingTable> {
    require_dominant(emb.g(), i)?;
    let ws = weight_system(emb.g(), i)?;
    let bound = level_bound_of(emb, &ws);
    let level = k.cloned().unwrap_or_else(|| bound.clone());
    let smat = SMatrix::new(emb.p(), &level)?;
    branch_closed_in(emb, i, &ws, &smat)
}

/// [`branch_closed`] with a prebuilt weight system and S-matrix, for sweeps.
pub fn branch_closed_in(emb: &Embedding, i: &Weight, ws: &WeightSystem, smat: &SMatrix) -> Result<BranchingTable> {
    if smat.algebra() != emb.p() {
        return Err(Error::AlgebraMismatch(format!(
            "S-matrix is for {}, embedding subalgebra is {}",
            smat.algebra(),
            emb.p()
        )));
    }
    let bound = level_bound_of(emb, ws);
    let level = smat.level();
    if !level.dominates(&bound) {
        return Err(Error::LevelTooLow {
            given: level.to_string(),
            required: bound.to_string(),
        });
    }
    let chars = characters_at_xi(emb, ws, smat)?;
    let n = smat.len();
    let vac = smat.vacuum_index();
    let mut residual = 0.0f64;
    let mut map = HashMap::new();
    for a in 0..n {
        let mut acc = Complex64::zero();
        for (d, chi) in chars.iter().enumerate() {
            acc += smat.at(d, a).conj() * smat.at(d, vac) * chi;
        }
        let rounded = acc.re.round();
        residual = residual.max((acc.re - rounded).abs()).max(acc.im.abs());
        if rounded != 0.0 {
            map.insert(smat.weights()[a].0.clone(), rounded as i64);
        }
    }
    if residual > INTEGER_TOLERANCE {
        return Err(Error::Numerical {
            residual,
            tolerance: INTEGER_TOLERANCE,
            context: format!("closed branching of {i} along {} at level {level}", emb.name()),
        });
    }
    let mut table = BranchingTable::from_map(emb, i, map, Method::Closed)?;
    table.residual = Some(residual);
    table.level = Some(level.clone());
    Ok(table)
}

/// `chi_i(P* xi_d)` for every `d` of the table, in table order.
pub fn characters_at_xi(emb: &Embedding, ws: &WeightSystem, smat: &SMatrix) -> Result<Vec<Complex64>> {
    smat.weights()
        .par_iter()
        .map(|d| {
            let x = xi_point(emb.p(), smat.level(), d);
            let y = emb.pstar_apply(&x)?;
            Ok(CharacterEvaluator::new(emb.g(), &y)?.evaluate(ws))
        })
        .collect()
}

/// Brute force: take the projected multiset `P M_i`, repeatedly remove the
/// weight system of its highest remaining element. Elements are ordered by
/// height (sum of simple-root coordinates), ties broken lexicographically.
pub fn branch_oracle(emb: &Embedding, i: &Weight) -> Result<BranchingTable> {
    require_dominant(emb.g(), i)?;
    let p = emb.p();
    let ws = weight_system(emb.g(), i)?;
    let mut pool: BTreeMap<(Rat, Vec<i64>), i64> = BTreeMap::new();
    for (j, m) in ws.iter() {
        let pj = emb.project_labels(&j.0);
        *pool.entry((p.height(&pj), pj)).or_insert(0) += m as i64;
    }
    let mut out: HashMap<Vec<i64>, i64> = HashMap::new();
    while let Some(((_, top), count)) = pool.pop_last() {
        if count == 0 {
            continue;
        }
        let top_w = Weight(top.clone());
        if count < 0 || !top_w.is_dominant() {
            return Err(Error::InvalidEmbedding(format!(
                "{}: peeling {i} reached {top_w} with multiplicity {count}",
                emb.name()
            )));
        }
        out.insert(top.clone(), count);
        for (mu, m) in weight_system(p, &top_w)?.iter() {
            if mu.0 == top {
                continue;
            }
            let key = (p.height(&mu.0), mu.0.clone());
            let entry = pool.entry(key).or_insert(0);
            *entry -= count * m as i64;
            if *entry < 0 {
                return Err(Error::InvalidEmbedding(format!(
                    "{}: projected multiset of {i} went negative at {mu}",
                    emb.name()
                )));
            }
        }
    }
    BranchingTable::from_map(emb, i, out, Method::Oracle)
}

/// Tensor product decomposition `i (x) j` of `g`-modules, as branching along
/// the diagonal embedding.
pub fn tensor(g: &SemisimpleAlgebra, i: &Weight, j: &Weight) -> Result<BranchingTable> {
    g.check_rank(&i.0)?;
    g.check_rank(&j.0)?;
    branch_rs(&diagonal(g), &i.concat(j))
}

/// `max_d |sum_c b_i^c S_dc / S_d0 - chi_i(P* xi_d)|` for a branching table
/// and an S-matrix of `p`.
pub fn eq6_residual(emb: &Embedding, table: &BranchingTable, smat: &SMatrix) -> Result<f64> {
    let ws = weight_system(emb.g(), &table.source)?;
    let chars = characters_at_xi(emb, &ws, smat)?;
    let vac = smat.vacuum_index();
    let idx: Vec<(usize, u64)> = table
        .entries
        .iter()
        .map(|(c, m)| Ok((smat.index_of(c)?, *m)))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (d, chi) in chars.iter().enumerate() {
        let s0 = smat.at(d, vac);
        let lhs = idx
            .iter()
            .fold(Complex64::zero(), |acc, &(c, m)| acc + smat.at(d, c) / s0 * m as f64);
        worst = worst.max((lhs - chi).norm());
    }
    Ok(worst)
}
