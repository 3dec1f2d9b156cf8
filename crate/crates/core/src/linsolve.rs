//! Exact sparse linear algebra over a [`Field`].
//!
//! [`SpanSolver`] maintains an echelon basis of the span of a sequence of
//! sparse vectors and expresses targets as combinations of the original
//! generators. The pivot of a reduced vector is its smallest key, so the
//! elimination order (and therefore every returned combination) depends
//! only on the key order and the insertion order.

use std::collections::BTreeMap;

use crate::freealg::{Field, NcPoly, Scalar, Word};

pub type SparseVec<K> = BTreeMap<K, Scalar>;

fn axpy<K: Ord + Clone>(target: &mut SparseVec<K>, c: &Scalar, v: &SparseVec<K>) {
    for (k, a) in v {
        let add = c * a;
        match target.get_mut(k) {
            Some(slot) => {
                let s = &*slot + &add;
                if s.is_zero() {
                    target.remove(k);
                } else {
                    *slot = s;
                }
            }
            None => {
                if !add.is_zero() {
                    target.insert(k.clone(), add);
                }
            }
        }
    }
}

struct BasisVec<K> {
    vec: SparseVec<K>,
    /// Combination of the original generators equal to `vec`.
    combo: SparseVec<usize>,
}

/// Incremental exact solver for `sum c_i g_i = target`.
pub struct SpanSolver<K> {
    field: Field,
    basis: Vec<BasisVec<K>>,
    pivots: BTreeMap<K, usize>,
    generators: usize,
    dependent: Vec<usize>,
}

impl<K: Ord + Clone> SpanSolver<K> {
    pub fn new(field: Field) -> SpanSolver<K> {
        SpanSolver {
            field,
            basis: Vec::new(),
            pivots: BTreeMap::new(),
            generators: 0,
            dependent: Vec::new(),
        }
    }

    /// Reduces `v` against the basis, tracking the subtracted combination.
    fn reduce(&self, mut v: SparseVec<K>, combo: &mut SparseVec<usize>) -> SparseVec<K> {
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next().cloned(),
                Some(c) => v
                    .range((std::ops::Bound::Excluded(c.clone()), std::ops::Bound::Unbounded))
                    .next()
                    .map(|(k, _)| k.clone()),
            };
            let Some(key) = next else { break };
            if let Some(&bi) = self.pivots.get(&key) {
                let b = &self.basis[bi];
                let factor = -&(&v[&key] * &b.vec[&key].inv().expect("pivot is nonzero"));
                axpy(&mut v, &factor, &b.vec);
                axpy(combo, &factor, &b.combo);
                // basis vectors have no entries below their pivot; keys
                // at or before the cursor are untouched
            } else {
                cursor = Some(key);
            }
        }
        v
    }

    /// Adds the next generator; returns false if it is dependent on the
    /// previous ones.
    pub fn push(&mut self, v: SparseVec<K>) -> bool {
        let index = self.generators;
        self.generators += 1;
        let mut combo = SparseVec::new();
        combo.insert(index, Scalar::one(self.field));
        let reduced = self.reduce(v, &mut combo);
        match reduced.keys().next().cloned() {
            None => {
                self.dependent.push(index);
                false
            }
            Some(pivot) => {
                self.pivots.insert(pivot, self.basis.len());
                self.basis.push(BasisVec {
                    vec: reduced,
                    combo,
                });
                true
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Indices of generators found dependent on earlier ones.
    pub fn dependent(&self) -> &[usize] {
        &self.dependent
    }

    pub fn is_independent(&self) -> bool {
        self.dependent.is_empty()
    }

    /// Coefficients `c_i` with `sum c_i g_i = target`, or `None` when the
    /// target is outside the span.
    pub fn solve(&self, target: SparseVec<K>) -> Option<SparseVec<usize>> {
        let mut combo = SparseVec::new();
        // reduce(target) = target + sum combo_i g_i
        let rest = self.reduce(target, &mut combo);
        if !rest.is_empty() {
            return None;
        }
        Some(
            combo
                .into_iter()
                .map(|(i, c)| (i, -c))
                .collect(),
        )
    }
}

/// Sparse vector view of a polynomial, keyed by word.
pub fn poly_vector(p: &NcPoly) -> SparseVec<Word> {
    p.terms().map(|(w, c)| (w.clone(), c.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(field: Field, entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries
            .iter()
            .map(|&(k, c)| (k, Scalar::from_i64(field, c)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    #[test]
    fn solves_small_system() {
        let q = Field::Rationals;
        let mut s = SpanSolver::new(q);
        assert!(s.push(v(q, &[(0, 1), (1, 1)])));
        assert!(s.push(v(q, &[(1, 1), (2, 1)])));
        assert!(!s.push(v(q, &[(0, 1), (2, -1)])));
        assert_eq!(s.dependent(), &[2]);
        // 2*g0 + 3*g1 = (2, 5, 3)
        let sol = s.solve(v(q, &[(0, 2), (1, 5), (2, 3)])).unwrap();
        assert_eq!(sol.get(&0), Some(&Scalar::from_i64(q, 2)));
        assert_eq!(sol.get(&1), Some(&Scalar::from_i64(q, 3)));
        assert!(s.solve(v(q, &[(0, 1)])).is_none());
    }

    #[test]
    fn brute_force_over_f3() {
        // every target in F3^3 is checked against exhaustive search over
        // combinations of two fixed generators
        let f = Field::Prime(3);
        let g = [v(f, &[(0, 1), (1, 2)]), v(f, &[(1, 1), (2, 1)])];
        let mut s = SpanSolver::new(f);
        for gi in &g {
            s.push(gi.clone());
        }
        for t in 0..27i64 {
            let target = v(f, &[(0, t % 3), (1, (t / 3) % 3), (2, t / 9)]);
            let brute = (0..9i64).any(|c| {
                let mut acc = SparseVec::new();
                axpy(&mut acc, &Scalar::from_i64(f, c % 3), &g[0]);
                axpy(&mut acc, &Scalar::from_i64(f, c / 3), &g[1]);
                acc == target
            });
            assert_eq!(s.solve(target).is_some(), brute, "target {t}");
        }
    }
}
