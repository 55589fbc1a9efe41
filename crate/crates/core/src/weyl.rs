//! Weyl group actions, reflection into the dominant chamber, orbits and
//! weight systems with multiplicities.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::{SemisimpleAlgebra, SimpleAlgebra, Weight};
use crate::error::{Error, Result};
use crate::linalg::{rat, Rat};

/// Guard against corrupted input in [`to_dominant`].
pub const REFLECTION_STEP_CAP: usize = 1_000_000;

/// Largest Weyl group enumerated element by element (`|W(F4)|`).
pub const WEYL_ENUMERATION_CAP: u64 = 1152;

/// Image of a weight under the reflection that makes it dominant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantResult {
    pub weight: Weight,
    /// `epsilon(w) = (-1)^{length(w)}`.
    pub sign: i64,
    /// Whether the input is fixed by some reflection.
    pub on_boundary: bool,
}

/// Apply the simple reflection `s_i` in place: `l -> l - l_i alpha_i`.
#[inline]
pub fn reflect_in_place(cartan: &[Vec<i64>], labels: &mut [i64], i: usize) {
    let c = labels[i];
    if c != 0 {
        for (l, a) in labels.iter_mut().zip(&cartan[i]) {
            *l -= c * a;
        }
    }
}

/// Reflect a weight into the fundamental chamber by repeatedly applying the
/// simple reflection at the most negative label.
pub fn to_dominant(alg: &SemisimpleAlgebra, w: &Weight) -> Result<DominantResult> {
    alg.check_rank(&w.0)?;
    let mut labels = w.0.clone();
    let sign = dominant_in_place(alg.cartan(), &mut labels)?;
    let on_boundary = labels.contains(&0);
    Ok(DominantResult {
        weight: Weight(labels),
        sign,
        on_boundary,
    })
}

/// Same as [`to_dominant`] on a raw label buffer; returns the sign.
pub(crate) fn dominant_in_place(cartan: &[Vec<i64>], labels: &mut [i64]) -> Result<i64> {
    let mut sign = 1;
    let mut steps = 0;
    loop {
        let (i, &m) = match labels.iter().enumerate().min_by_key(|&(_, v)| *v) {
            Some(p) => p,
            None => break,
        };
        if m >= 0 {
            break;
        }
        reflect_in_place(cartan, labels, i);
        sign = -sign;
        steps += 1;
        if steps > REFLECTION_STEP_CAP {
            return Err(Error::ReflectionCap(REFLECTION_STEP_CAP));
        }
    }
    Ok(sign)
}

fn require_dominant(alg: &SemisimpleAlgebra, w: &Weight) -> Result<()> {
    alg.check_rank(&w.0)?;
    if !w.is_dominant() {
        return Err(Error::NotDominant(w.to_string()));
    }
    Ok(())
}

/// The full Weyl orbit of a dominant weight, sorted.
pub fn weyl_orbit(alg: &SemisimpleAlgebra, w: &Weight) -> Result<Vec<Weight>> {
    require_dominant(alg, w)?;
    let mut seen: HashSet<Weight> = HashSet::from([w.clone()]);
    let mut queue = vec![w.clone()];
    while let Some(x) = queue.pop() {
        for i in 0..alg.rank() {
            if x.0[i] > 0 {
                let mut y = x.0.clone();
                reflect_in_place(alg.cartan(), &mut y, i);
                let y = Weight(y);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
    }
    let mut out: Vec<Weight> = seen.into_iter().collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Weyl dimension formula `prod_{alpha>0} (l+rho, alpha) / (rho, alpha)`.
pub fn dimension(alg: &SemisimpleAlgebra, w: &Weight) -> Result<u64> {
    require_dominant(alg, w)?;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for (s, f) in alg.factors().iter().enumerate() {
        let lam = &w.0[alg.factor_range(s)];
        // (mu, alpha) = sum_i mu_i c_i |alpha_i|^2 / 2; scale by 6 to clear denominators.
        let half_norms: Vec<Rat> = (0..f.rank())
            .map(|i| f.root_gram()[(i, i)] * rat(3))
            .collect();
        for root in f.positive_roots() {
            let mut a = Rat::zero();
            let mut b = Rat::zero();
            for i in 0..f.rank() {
                a += rat((lam[i] + 1) * root.coords[i]) * half_norms[i];
                b += rat(root.coords[i]) * half_norms[i];
            }
            debug_assert!(a.is_integer() && b.is_integer());
            num *= a.to_integer() as u128;
            den *= b.to_integer() as u128;
            let g = num.gcd(&den);
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den, 1);
    Ok((num / den) as u64)
}

/// All dominant weights whose module has dimension at most `max_dim`,
/// ordered by dimension, then labels. The dimension grows strictly in each
/// label, so the set is closed under lowering labels and a search from `0`
/// finds all of it.
pub fn dominant_weights_up_to_dim(alg: &SemisimpleAlgebra, max_dim: u64) -> Result<Vec<(Weight, u64)>> {
    let zero = Weight::zero(alg.rank());
    if max_dim == 0 {
        return Ok(Vec::new());
    }
    let mut seen: HashSet<Weight> = HashSet::from([zero.clone()]);
    let mut out = vec![(zero.clone(), 1)];
    let mut queue = vec![zero];
    while let Some(w) = queue.pop() {
        for i in 0..alg.rank() {
            let mut next = w.clone();
            next.0[i] += 1;
            if seen.contains(&next) {
                continue;
            }
            seen.insert(next.clone());
            let d = dimension(alg, &next)?;
            if d <= max_dim {
                out.push((next.clone(), d));
                queue.push(next);
            }
        }
    }
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Multiset of weights of an irreducible module.
#[derive(Clone, Debug)]
pub struct WeightSystem {
    highest: Weight,
    entries: Vec<(Weight, u64)>,
    index: HashMap<Weight, usize>,
    dim: u64,
}

impl WeightSystem {
    pub fn highest(&self) -> &Weight {
        &self.highest
    }

    /// Weights in graded order: by depth below the highest weight, then
    /// labels descending.
    pub fn entries(&self) -> &[(Weight, u64)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, u64)> {
        self.entries.iter().map(|(w, m)| (w, *m))
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.index.get(w).map_or(0, |&i| self.entries[i].1)
    }

    /// Number of distinct weights.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of multiplicities.
    pub fn dim(&self) -> u64 {
        self.dim
    }
}

fn root_lattice_below(alg: &SemisimpleAlgebra, top: &Weight, w: &Weight) -> bool {
    let diff = top.sub(w);
    alg.root_coords(&diff.0)
        .iter()
        .all(|c| c.is_integer() && !c.is_negative())
}

/// Weight system of the irreducible module with dominant highest weight
/// `lambda`, multiplicities from Freudenthal's recursion.
pub fn weight_system(alg: &SemisimpleAlgebra, lambda: &Weight) -> Result<WeightSystem> {
    require_dominant(alg, lambda)?;
    let cartan = alg.cartan();
    let rank = alg.rank();

    // A weight belongs to the module iff its dominant representative lies
    // below lambda in the root-lattice order.
    let mut dominant_rep: HashMap<Weight, Weight> = HashMap::new();
    dominant_rep.insert(lambda.clone(), lambda.clone());
    let mut layers: Vec<Vec<Weight>> = vec![vec![lambda.clone()]];
    loop {
        let mut next: Vec<Weight> = Vec::new();
        for mu in layers.last().expect("nonempty") {
            for row in cartan {
                let nu = Weight(mu.0.iter().zip(row).map(|(a, b)| a - b).collect());
                if dominant_rep.contains_key(&nu) {
                    continue;
                }
                let mut d = nu.0.clone();
                dominant_in_place(cartan, &mut d)?;
                let d = Weight(d);
                if root_lattice_below(alg, lambda, &d) {
                    dominant_rep.insert(nu.clone(), d);
                    next.push(nu);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable_by(|a, b| b.cmp(a));
        layers.push(next);
    }

    // (., alpha) as a rational functional per positive root.
    let form = alg.quadratic_form();
    let root_functionals: Vec<(Vec<i64>, Vec<Rat>)> = alg
        .positive_roots()
        .iter()
        .map(|r| (r.labels.clone(), form.mul_int_vec(&r.labels)))
        .collect();
    let pair = |x: &[i64], f: &[Rat]| -> Rat {
        x.iter()
            .zip(f)
            .fold(Rat::zero(), |acc, (&a, &b)| if a == 0 { acc } else { acc + b * rat(a) })
    };
    let rho = alg.rho();
    let lam_rho = lambda.add(&rho);
    let top_norm = alg.inner_weights(&lam_rho.0, &lam_rho.0);

    let mut dominant_mult: HashMap<Weight, u64> = HashMap::new();
    dominant_mult.insert(lambda.clone(), 1);
    for layer in layers.iter().skip(1) {
        for mu in layer.iter().filter(|m| m.is_dominant()) {
            let mut sum = Rat::zero();
            for (alpha, f_alpha) in &root_functionals {
                let mut shifted = mu.0.clone();
                loop {
                    for k in 0..rank {
                        shifted[k] += alpha[k];
                    }
                    let key = Weight(shifted.clone());
                    let Some(rep) = dominant_rep.get(&key) else {
                        break;
                    };
                    let m = *dominant_mult
                        .get(rep)
                        .expect("higher dominant weights are processed first");
                    sum += rat(m as i64) * pair(&shifted, f_alpha);
                }
            }
            let mu_rho = mu.add(&rho);
            let denom = top_norm - alg.inner_weights(&mu_rho.0, &mu_rho.0);
            let m = rat(2) * sum / denom;
            debug_assert!(m.is_integer() && !m.is_negative(), "Freudenthal gave {m}");
            dominant_mult.insert(mu.clone(), m.to_integer() as u64);
        }
    }

    let mut entries = Vec::with_capacity(dominant_rep.len());
    for layer in layers {
        for w in layer {
            let m = dominant_mult[&dominant_rep[&w]];
            if m > 0 {
                entries.push((w, m));
            }
        }
    }
    let index = entries
        .iter()
        .enumerate()
        .map(|(i, (w, _))| (w.clone(), i))
        .collect();
    let dim = entries.iter().map(|(_, m)| m).sum();
    Ok(WeightSystem {
        highest: lambda.clone(),
        entries,
        index,
        dim,
    })
}

/// A Weyl group element acting on Dynkin labels, with its sign.
#[derive(Clone, Debug)]
pub struct WeylElement {
    rank: usize,
    matrix: Vec<i64>,
    pub sign: i64,
}

impl WeylElement {
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let n = self.rank;
        (0..n)
            .map(|j| (0..n).map(|k| self.matrix[j * n + k] * x[k]).sum())
            .collect()
    }
}

/// All elements of the Weyl group of a simple algebra, enumerated once and
/// cached. Elements are found as the orbit of the regular weight `rho`.
pub fn weyl_elements(f: &SimpleAlgebra) -> Result<Arc<Vec<WeylElement>>> {
    if let Some(cached) = f.weyl_cache.get() {
        return Ok(cached.clone());
    }
    let order = f.weyl_order();
    if order > WEYL_ENUMERATION_CAP {
        return Err(Error::WeylGroupTooLarge {
            algebra: f.name(),
            order,
            cap: WEYL_ENUMERATION_CAP,
        });
    }
    let n = f.rank();
    let cartan = f.cartan();
    let mut ident = vec![0; n * n];
    for i in 0..n {
        ident[i * n + i] = 1;
    }
    let mut elements = vec![WeylElement {
        rank: n,
        matrix: ident,
        sign: 1,
    }];
    let mut seen: HashSet<Vec<i64>> = HashSet::from([vec![1; n]]);
    let mut images = vec![vec![1i64; n]];
    let mut idx = 0;
    while idx < elements.len() {
        let image = images[idx].clone();
        for i in 0..n {
            if image[i] <= 0 {
                continue;
            }
            let mut next_image = image.clone();
            reflect_in_place(cartan, &mut next_image, i);
            if !seen.insert(next_image.clone()) {
                continue;
            }
            // s_i o w: row j of the product is row j of w minus A_ij times row i.
            let m = &elements[idx].matrix;
            let mut nm = m.clone();
            for j in 0..n {
                let a = cartan[i][j];
                if a != 0 {
                    for k in 0..n {
                        nm[j * n + k] -= a * m[i * n + k];
                    }
                }
            }
            elements.push(WeylElement {
                rank: n,
                matrix: nm,
                sign: -elements[idx].sign,
            });
            images.push(next_image);
        }
        idx += 1;
    }
    debug_assert_eq!(elements.len() as u64, order);
    let arc = Arc::new(elements);
    let _ = f.weyl_cache.set(arc.clone());
    Ok(f.weyl_cache.get().cloned().unwrap_or(arc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;

    fn alg(s: &str) -> SemisimpleAlgebra {
        build_algebra(s).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn to_dominant_examples() {
        let a1 = alg("A1");
        let r = to_dominant(&a1, &w(&[-3])).unwrap();
        assert_eq!((r.weight, r.sign, r.on_boundary), (w(&[3]), -1, false));
        let a2 = alg("A2");
        // (-1,1) is orthogonal to theta, so its image sits on a wall.
        let r = to_dominant(&a2, &w(&[-1, 1])).unwrap();
        assert_eq!((r.weight, r.sign, r.on_boundary), (w(&[1, 0]), -1, true));
        let r = to_dominant(&a2, &w(&[-2, 3])).unwrap();
        assert_eq!((r.weight, r.sign, r.on_boundary), (w(&[2, 1]), -1, false));
        let r = to_dominant(&a2, &w(&[0, 2])).unwrap();
        assert_eq!((r.weight, r.sign, r.on_boundary), (w(&[0, 2]), 1, true));
    }

    #[test]
    fn small_dimension_lists() {
        let dims: Vec<u64> = dominant_weights_up_to_dim(&alg("A2"), 10)
            .unwrap()
            .into_iter()
            .map(|(_, d)| d)
            .collect();
        assert_eq!(dims, vec![1, 3, 3, 6, 6, 8, 10, 10]);
        let a1: Vec<Weight> = dominant_weights_up_to_dim(&alg("A1"), 4)
            .unwrap()
            .into_iter()
            .map(|(w, _)| w)
            .collect();
        assert_eq!(a1, vec![w(&[0]), w(&[1]), w(&[2]), w(&[3])]);
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(weyl_orbit(&alg("A1"), &w(&[2])).unwrap(), vec![w(&[2]), w(&[-2])]);
        let mut o = weyl_orbit(&alg("A2"), &w(&[1, 0])).unwrap();
        o.sort();
        assert_eq!(o, vec![w(&[-1, 1]), w(&[0, -1]), w(&[1, 0])]);
        assert_eq!(weyl_orbit(&alg("A2"), &w(&[0, 0])).unwrap(), vec![w(&[0, 0])]);
        assert!(matches!(
            weyl_orbit(&alg("A2"), &w(&[-1, 0])),
            Err(Error::NotDominant(_))
        ));
    }

    #[test]
    fn weight_system_examples() {
        let a2 = alg("A2");
        let ws = weight_system(&a2, &w(&[1, 0])).unwrap();
        assert_eq!(ws.dim(), 3);
        for x in [[1, 0], [-1, 1], [0, -1]] {
            assert_eq!(ws.multiplicity(&w(&x)), 1);
        }
        let adj = weight_system(&a2, &w(&[1, 1])).unwrap();
        assert_eq!(adj.dim(), 8);
        assert_eq!(adj.len(), 7);
        assert_eq!(adj.multiplicity(&w(&[0, 0])), 2);
        let a1 = weight_system(&alg("A1"), &w(&[3])).unwrap();
        let got: Vec<_> = a1.iter().map(|(x, m)| (x.0[0], m)).collect();
        assert_eq!(got, vec![(3, 1), (1, 1), (-1, 1), (-3, 1)]);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&alg("A2"), &w(&[1, 1])).unwrap(), 8);
        assert_eq!(dimension(&alg("E8"), &Weight::zero(8)).unwrap(), 1);
        for k in 0..10 {
            assert_eq!(dimension(&alg("A1"), &w(&[k])).unwrap(), k as u64 + 1);
        }
        // adjoint representations
        assert_eq!(dimension(&alg("G2"), &w(&[0, 1])).unwrap(), 14);
        assert_eq!(dimension(&alg("F4"), &w(&[1, 0, 0, 0])).unwrap(), 52);
        assert_eq!(dimension(&alg("E8"), &w(&[0, 0, 0, 0, 0, 0, 0, 1])).unwrap(), 248);
        assert_eq!(dimension(&alg("E6"), &w(&[1, 0, 0, 0, 0, 0])).unwrap(), 27);
        assert_eq!(dimension(&alg("B3"), &w(&[0, 0, 1])).unwrap(), 8);
        assert_eq!(dimension(&alg("C3"), &w(&[1, 0, 0])).unwrap(), 6);
    }

    #[test]
    fn weight_system_dimension_agrees_on_exceptionals() {
        for (s, hw) in [
            ("G2", vec![1, 0]),
            ("G2", vec![1, 1]),
            ("F4", vec![0, 0, 0, 1]),
            ("E6", vec![1, 0, 0, 0, 0, 0]),
            ("B3", vec![1, 0, 1]),
            ("C3", vec![0, 1, 1]),
            ("D4", vec![1, 0, 1, 0]),
        ] {
            let g = alg(s);
            let lam = Weight(hw);
            let ws = weight_system(&g, &lam).unwrap();
            assert_eq!(ws.dim(), dimension(&g, &lam).unwrap(), "{s} {lam}");
        }
    }

    #[test]
    fn weyl_group_enumeration() {
        for s in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
            let g = alg(s);
            let f = &g.factors()[0];
            let els = weyl_elements(f).unwrap();
            assert_eq!(els.len() as u64, f.weyl_order(), "{s}");
            let plus = els.iter().filter(|e| e.sign == 1).count();
            assert_eq!(plus * 2, els.len());
        }
        let e6 = alg("E6");
        assert!(matches!(
            weyl_elements(&e6.factors()[0]),
            Err(Error::WeylGroupTooLarge { .. })
        ));
    }

    #[test]
    fn weyl_elements_preserve_the_form() {
        let g = alg("B3");
        let f = &g.factors()[0];
        let x = [1, -2, 3];
        let y = [0, 4, -1];
        for e in weyl_elements(f).unwrap().iter() {
            assert_eq!(
                g.inner_weights(&e.apply(&x), &e.apply(&y)),
                g.inner_weights(&x, &y)
            );
        }
    }
}
