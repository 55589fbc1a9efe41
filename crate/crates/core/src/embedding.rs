//! Embeddings `p -> g` given by an integer projection matrix `P` acting on
//! Dynkin labels, the adjoint `P* = F_g^{-1} P^T F_p`, embedding indices,
//! composition and a small catalog.

use std::fmt;
use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{build_algebra, RationalPoint, SemisimpleAlgebra, Weight};
use crate::error::{Error, Result};
use crate::linalg::{rat, Rat, RatMatrix};
use crate::weyl::dimension;

#[derive(Clone, PartialEq, Eq)]
pub struct Embedding {
    name: String,
    g: SemisimpleAlgebra,
    p: SemisimpleAlgebra,
    matrix: Vec<Vec<i64>>,
    pstar: RatMatrix,
    note: String,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({}: {} -> {}, P={:?})", self.name, self.p, self.g, self.matrix)
    }
}

/// On-disk form: `{ "name": .., "g": .., "p": .., "P": [[..], ..] }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub name: String,
    pub g: String,
    pub p: String,
    #[serde(rename = "P")]
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Embedding {
    /// `matrix` has `rank(p)` rows and `rank(g)` columns.
    pub fn new(
        name: impl Into<String>,
        g: SemisimpleAlgebra,
        p: SemisimpleAlgebra,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Embedding> {
        let name = name.into();
        if matrix.len() != p.rank() {
            return Err(Error::InvalidEmbedding(format!(
                "{name}: P has {} rows, expected rank({p}) = {}",
                matrix.len(),
                p.rank()
            )));
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != g.rank()) {
            return Err(Error::InvalidEmbedding(format!(
                "{name}: P row has {} entries, expected rank({g}) = {}",
                row.len(),
                g.rank()
            )));
        }
        let pm = RatMatrix::from_int_rows(&matrix);
        let fg_inv = g
            .quadratic_form()
            .inverse()
            .expect("quadratic form matrices are invertible");
        let pstar = fg_inv.mul(&pm.transpose()).mul(p.quadratic_form());
        // A projection that kills a whole simple factor of p cannot come
        // from an injective homomorphism.
        for s in 0..p.num_factors() {
            if matrix[p.factor_range(s)].iter().all(|r| r.iter().all(|&v| v == 0)) {
                return Err(Error::InvalidEmbedding(format!(
                    "{name}: P vanishes on factor {s} of {p}"
                )));
            }
        }
        Ok(Embedding {
            name,
            g,
            p,
            matrix,
            pstar,
            note: String::new(),
        })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Embedding {
        self.note = note.into();
        self
    }

    pub fn from_file_data(data: EmbeddingFile) -> Result<Embedding> {
        let g = build_algebra(&data.g)?;
        let p = build_algebra(&data.p)?;
        Ok(Embedding::new(data.name, g, p, data.matrix)?.with_note(data.note))
    }

    /// Parse the JSON file format. Non-integer entries of `P` are rejected.
    pub fn from_json(text: &str) -> Result<Embedding> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("embedding JSON: {e}")))?;
        if let Some(rows) = value.get("P").and_then(Value::as_array) {
            for row in rows {
                for entry in row.as_array().into_iter().flatten() {
                    let integral = entry.as_i64().is_some();
                    if !integral {
                        return Err(Error::InvalidEmbedding(format!(
                            "projection entry {entry} is not an integer; only integer matrices are supported"
                        )));
                    }
                }
            }
        }
        let data: EmbeddingFile =
            serde_json::from_value(value).map_err(|e| Error::Invalid(format!("embedding JSON: {e}")))?;
        Embedding::from_file_data(data)
    }

    pub fn from_path(path: &Path) -> Result<Embedding> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        Embedding::from_json(&text)
    }

    pub fn to_file_data(&self) -> EmbeddingFile {
        EmbeddingFile {
            name: self.name.clone(),
            g: self.g.to_string(),
            p: self.p.to_string(),
            matrix: self.matrix.clone(),
            note: self.note.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn g(&self) -> &SemisimpleAlgebra {
        &self.g
    }

    pub fn p(&self) -> &SemisimpleAlgebra {
        &self.p
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    /// `P j` on raw labels, without checks.
    #[inline]
    pub fn project_labels(&self, j: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(j).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn project(&self, j: &Weight) -> Result<Weight> {
        self.g.check_rank(&j.0)?;
        Ok(Weight(self.project_labels(&j.0)))
    }

    /// `P*`, a `rank(g) x rank(p)` rational matrix.
    pub fn pstar(&self) -> &RatMatrix {
        &self.pstar
    }

    /// `P* x` for a point of the weight space of `p`.
    pub fn pstar_apply(&self, x: &RationalPoint) -> Result<RationalPoint> {
        if x.coords.len() != self.p.rank() {
            return Err(Error::RankMismatch {
                expected: self.p.rank(),
                got: x.coords.len(),
            });
        }
        Ok(RationalPoint::new(self.pstar.mul_vec(&x.coords)))
    }

    /// `C_p P = P C_g`.
    pub fn commutes_with_conjugation(&self) -> bool {
        (0..self.g.rank()).all(|i| {
            let mut e = Weight::zero(self.g.rank());
            e.0[i] = 1;
            let lhs = self.p.conjugate(&Weight(self.project_labels(&e.0)));
            let rhs = Weight(self.project_labels(&self.g.conjugate(&e).0));
            lhs == rhs
        })
    }
}

/// Chain `h -> p -> g`; the result has `P = P_hp * P_pg`.
pub fn compose(hp: &Embedding, pg: &Embedding) -> Result<Embedding> {
    if hp.g != pg.p {
        return Err(Error::AlgebraMismatch(format!(
            "cannot compose {} (into {}) with {} (from {})",
            hp.name, hp.g, pg.name, pg.p
        )));
    }
    let a = RatMatrix::from_int_rows(&hp.matrix);
    let b = RatMatrix::from_int_rows(&pg.matrix);
    let m = a.mul(&b);
    let matrix = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m[(i, j)].to_integer()).collect())
        .collect();
    Embedding::new(
        format!("{}.{}", hp.name, pg.name),
        pg.g.clone(),
        hp.p.clone(),
        matrix,
    )
}

/// Blockwise `p1 + p2 -> g1 + g2`.
pub fn direct_sum(e1: &Embedding, e2: &Embedding) -> Result<Embedding> {
    let g = SemisimpleAlgebra::new(e1.g.factors().iter().chain(e2.g.factors()).cloned().collect())?;
    let p = SemisimpleAlgebra::new(e1.p.factors().iter().chain(e2.p.factors()).cloned().collect())?;
    let mut matrix = Vec::with_capacity(p.rank());
    for row in &e1.matrix {
        let mut r = row.clone();
        r.extend(std::iter::repeat_n(0, e2.g.rank()));
        matrix.push(r);
    }
    for row in &e2.matrix {
        let mut r = vec![0; e1.g.rank()];
        r.extend_from_slice(row);
        matrix.push(r);
    }
    Embedding::new(format!("{}+{}", e1.name, e2.name), g, p, matrix)
}

/// `g -> g`, `P = 1`.
pub fn identity(g: &SemisimpleAlgebra) -> Embedding {
    let n = g.rank();
    let matrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    Embedding::new(format!("id-{g}"), g.clone(), g.clone(), matrix).expect("identity is valid")
}

/// Diagonal `g -> g + g`, `P = [1 1]`. Branching along it is the tensor
/// product decomposition.
pub fn diagonal(g: &SemisimpleAlgebra) -> Embedding {
    let n = g.rank();
    let matrix = (0..n)
        .map(|i| (0..2 * n).map(|j| i64::from(j % n == i)).collect())
        .collect();
    Embedding::new(format!("diag-{g}"), g.doubled(), g.clone(), matrix).expect("diagonal is valid")
}

/// Dynkin index `dim(l) (l, l + 2 rho) / (2 dim(adjoint))` of an irrep of
/// the simple factor `s`, scaled by the dimensions of the other factors.
pub fn dynkin_index(alg: &SemisimpleAlgebra, s: usize, w: &Weight) -> Result<Rat> {
    let r = alg.factor_range(s);
    let f = &alg.factors()[s];
    let single = SemisimpleAlgebra::new(vec![f.clone()])?;
    let ws = Weight(w.0[r.clone()].to_vec());
    let two_rho: Vec<i64> = ws.0.iter().map(|v| v + 2).collect();
    let casimir = single.inner_weights(&ws.0, &two_rho);
    let adj = dimension(&single, &Weight(f.theta().to_vec()))?;
    let total = dimension(alg, w)?;
    Ok(casimir * rat(total as i64) / rat(2 * adj as i64))
}

/// Embedding index measured with the probe `v` of `g`, which must be
/// nontrivial on exactly one simple factor. `p` must be simple.
pub fn embedding_index_with(emb: &Embedding, v: &Weight) -> Result<Rat> {
    emb.g.check_rank(&v.0)?;
    if emb.p.num_factors() != 1 {
        return Err(Error::Invalid(format!(
            "embedding index is defined here for simple subalgebras only, got {}",
            emb.p
        )));
    }
    let active: Vec<usize> = (0..emb.g.num_factors())
        .filter(|&s| v.0[emb.g.factor_range(s)].iter().any(|&x| x != 0))
        .collect();
    let [t] = active[..] else {
        return Err(Error::Invalid(format!(
            "probe {v} must be nontrivial on exactly one simple factor of {}",
            emb.g
        )));
    };
    let ig = dynkin_index(&emb.g, t, v)?;
    let table = crate::branching::branch_rs(emb, v)?;
    let mut ip = Rat::zero();
    for (a, mult) in &table.entries {
        ip += dynkin_index(&emb.p, 0, a)? * rat(*mult as i64);
    }
    Ok(ip / ig)
}

/// `x_e` measured with the first fundamental module of the first factor of `g`.
pub fn embedding_index(emb: &Embedding) -> Result<Rat> {
    let mut v = Weight::zero(emb.g.rank());
    v.0[0] = 1;
    embedding_index_with(emb, &v)
}

/// Named embeddings shipped with the library.
pub fn catalog() -> Vec<Embedding> {
    let alg = |s: &str| build_algebra(s).expect("catalog algebra");
    let mk = |name: &str, g: &str, p: &str, m: Vec<Vec<i64>>, note: &str| {
        Embedding::new(name, alg(g), alg(p), m)
            .expect("catalog embedding")
            .with_note(note)
    };
    vec![
        mk(
            "A1-in-A2-xe1",
            "A2",
            "A1",
            vec![vec![1, 1]],
            "regular su(2) in su(3); P(i1,i2) = i1+i2, index 1",
        ),
        mk(
            "A1-in-A2-xe4",
            "A2",
            "A1",
            vec![vec![2, 2]],
            "principal so(3) in su(3); P(i1,i2) = 2(i1+i2), index 4",
        ),
        mk(
            "diag-A1",
            "A1+A1",
            "A1",
            vec![vec![1, 1]],
            "diagonal; branching is the tensor product",
        ),
        mk(
            "diag-A2",
            "A2+A2",
            "A2",
            vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]],
            "diagonal; branching is the tensor product",
        ),
        mk(
            "B1-in-A2",
            "A2",
            "A1",
            vec![vec![2, 2]],
            "B_n in A_2n at n = 1 (B1 = A1); same matrix as A1-in-A2-xe4",
        ),
        mk(
            "B2-in-A4",
            "A4",
            "B2",
            vec![vec![1, 0, 0, 1], vec![0, 2, 2, 0]],
            "B_n in A_2n at n = 2; P(i) = (i1+i4, 2(i2+i3))",
        ),
        mk(
            "C2-in-A3",
            "A3",
            "C2",
            vec![vec![1, 0, 1], vec![0, 1, 0]],
            "sp(4) in su(4); 4 -> 4, 6 -> 5+1",
        ),
        mk(
            "B3-in-D4",
            "D4",
            "B3",
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1]],
            "so(7) in so(8); 8v -> 7+1, both spinors -> 8",
        ),
    ]
}

pub fn catalog_lookup(name: &str) -> Result<Embedding> {
    catalog()
        .into_iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| {
            let names: Vec<String> = catalog().iter().map(|e| e.name.clone()).collect();
            Error::Invalid(format!("unknown catalog embedding '{name}' (known: {})", names.join(", ")))
        })
}

/// `(P j, c)_p - (j, P* c)_g` on all pairs of basis vectors; zero for every
/// embedding by construction, kept as a self-check.
pub fn adjointness_defect(emb: &Embedding) -> Rat {
    let mut worst = Rat::zero();
    for i in 0..emb.g.rank() {
        let mut e = vec![0; emb.g.rank()];
        e[i] = 1;
        let pe = emb.project_labels(&e);
        for a in 0..emb.p.rank() {
            let mut c = vec![Rat::zero(); emb.p.rank()];
            c[a] = Rat::one();
            let lhs = emb.p.quadratic_form().mul_vec(&c)
                .iter()
                .zip(&pe)
                .fold(Rat::zero(), |acc, (x, &y)| acc + *x * rat(y));
            let pc = emb.pstar.mul_vec(&c);
            let rhs = emb.g.quadratic_form().mul_vec(&pc)
                .iter()
                .zip(&e)
                .fold(Rat::zero(), |acc, (x, &y)| acc + *x * rat(y));
            let d = lhs - rhs;
            let d = if d < Rat::zero() { -d } else { d };
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}
