//! The Hecke pair contract and the coset combinatorics built on it.
//!
//! A backend supplies group operations plus four coset primitives
//! (Γ-membership, canonical left coset, canonical double coset, left coset
//! enumeration). [`Hecke`] wraps a backend with an enumeration budget and
//! memo tables and derives everything else: `L`, `R` and `Δ`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Default cap on the number of cosets a single enumeration may produce.
pub const DEFAULT_BUDGET: usize = 1_000_000;

pub trait HeckePair: Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync + 'static;

    /// Identifier used to detect mixing of elements from different pairs.
    fn id(&self) -> String;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Rejects values that are not elements of `G`.
    fn validate(&self, g: &Self::Elem) -> Result<()>;

    fn in_gamma(&self, g: &Self::Elem) -> bool;

    /// A finite set generating a dense subgroup of Γ.
    fn gamma_generators(&self) -> Vec<Self::Elem>;

    /// Canonical representative of `gΓ`.
    fn canonical_left(&self, g: &Self::Elem) -> Self::Elem;

    /// Canonical representative of `ΓgΓ`.
    fn canonical_double(&self, g: &Self::Elem) -> Self::Elem;

    /// Canonical representative of `Γg`. The default goes through `g⁻¹Γ`.
    fn canonical_right(&self, g: &Self::Elem) -> Self::Elem {
        self.inv(&self.canonical_left(&self.inv(g)))
    }

    /// Canonical reps of the left cosets inside `ΓdΓ`, in any order.
    ///
    /// The default is the orbit of `dΓ` under left multiplication by the
    /// Γ generators and their inverses.
    fn enumerate_left_cosets(&self, d: &Self::Elem, budget: usize) -> Result<Vec<Self::Elem>> {
        left_orbit(self, d, budget)
    }

    fn elem_to_json(&self, g: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
}

/// Orbit closure of `seed·Γ` under left multiplication by Γ's generators.
pub fn left_orbit<B: HeckePair + ?Sized>(
    backend: &B,
    seed: &B::Elem,
    budget: usize,
) -> Result<Vec<B::Elem>> {
    let moves = generators_with_inverses(backend);
    let start = backend.canonical_left(seed);
    let mut seen: HashSet<B::Elem> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for s in &moves {
            let y = backend.canonical_left(&backend.mul(s, &x));
            if !seen.contains(&y) {
                if seen.len() >= budget {
                    return Err(Error::BudgetExceeded { limit: budget });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Number of right cosets `Γx` inside `ΓgΓ`, by orbit closure of `Γg` under
/// right multiplication. Independent of the backend's left enumerator.
pub fn right_orbit_count<B: HeckePair + ?Sized>(
    backend: &B,
    g: &B::Elem,
    budget: usize,
) -> Result<usize> {
    let moves = generators_with_inverses(backend);
    let start = backend.canonical_right(g);
    let mut seen: HashSet<B::Elem> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for s in &moves {
            let y = backend.canonical_right(&backend.mul(&x, s));
            if !seen.contains(&y) {
                if seen.len() >= budget {
                    return Err(Error::BudgetExceeded { limit: budget });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len())
}

fn generators_with_inverses<B: HeckePair + ?Sized>(backend: &B) -> Vec<B::Elem> {
    let mut moves = Vec::new();
    for s in backend.gamma_generators() {
        let si = backend.inv(&s);
        moves.push(s);
        moves.push(si);
    }
    moves.sort();
    moves.dedup();
    moves
}

/// A left coset `gΓ`, held by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeftCoset<E>(E);

impl<E> LeftCoset<E> {
    pub fn rep(&self) -> &E {
        &self.0
    }

    pub fn into_rep(self) -> E {
        self.0
    }
}

/// A double coset `ΓgΓ`, held by its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubleCoset<E>(E);

impl<E> DoubleCoset<E> {
    pub fn rep(&self) -> &E {
        &self.0
    }

    pub fn into_rep(self) -> E {
        self.0
    }
}

type ProductTable<E> = BTreeMap<DoubleCoset<E>, u64>;

/// A backend together with its enumeration budget and memo tables.
///
/// The caches only ever store values that are pure functions of their
/// keys, so concurrent use gives identical results in any interleaving.
pub struct Hecke<B: HeckePair> {
    backend: B,
    id: Arc<str>,
    budget: usize,
    left_cache: RwLock<HashMap<B::Elem, Arc<Vec<LeftCoset<B::Elem>>>>>,
    pub(crate) product_cache: RwLock<HashMap<(B::Elem, B::Elem), Arc<ProductTable<B::Elem>>>>,
}

impl<B: HeckePair> Hecke<B> {
    pub fn new(backend: B) -> Self {
        Self::with_budget(backend, DEFAULT_BUDGET)
    }

    pub fn with_budget(backend: B, budget: usize) -> Self {
        let id: Arc<str> = backend.id().into();
        Hecke {
            backend,
            id,
            budget,
            left_cache: RwLock::new(HashMap::new()),
            product_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn id(&self) -> &Arc<str> {
        &self.id
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn identity_coset(&self) -> DoubleCoset<B::Elem> {
        DoubleCoset(self.backend.canonical_double(&self.backend.identity()))
    }

    pub fn canonical_double_coset(&self, g: &B::Elem) -> Result<DoubleCoset<B::Elem>> {
        self.backend.validate(g)?;
        Ok(DoubleCoset(self.backend.canonical_double(g)))
    }

    pub fn canonical_left_coset(&self, g: &B::Elem) -> Result<LeftCoset<B::Elem>> {
        self.backend.validate(g)?;
        Ok(LeftCoset(self.backend.canonical_left(g)))
    }

    /// Unchecked; for elements produced internally from valid ones.
    pub(crate) fn double_of(&self, g: &B::Elem) -> DoubleCoset<B::Elem> {
        DoubleCoset(self.backend.canonical_double(g))
    }

    /// The double coset containing the left coset `gΓ`.
    pub fn double_of_left(&self, c: &LeftCoset<B::Elem>) -> DoubleCoset<B::Elem> {
        self.double_of(c.rep())
    }

    /// Left cosets contained in `d`, sorted by representative.
    pub fn left_cosets_of(&self, d: &DoubleCoset<B::Elem>) -> Result<Arc<Vec<LeftCoset<B::Elem>>>> {
        if let Some(hit) = self.left_cache.read().unwrap().get(d.rep()) {
            return Ok(hit.clone());
        }
        let mut reps = self.backend.enumerate_left_cosets(d.rep(), self.budget)?;
        if reps.len() > self.budget {
            return Err(Error::BudgetExceeded { limit: self.budget });
        }
        reps.sort();
        reps.dedup();
        let cosets: Arc<Vec<_>> = Arc::new(reps.into_iter().map(LeftCoset).collect());
        self.left_cache
            .write()
            .unwrap()
            .entry(d.rep().clone())
            .or_insert_with(|| cosets.clone());
        Ok(cosets)
    }

    /// `L(g) = |ΓgΓ/Γ|`.
    pub fn left_count(&self, d: &DoubleCoset<B::Elem>) -> Result<u64> {
        Ok(self.left_cosets_of(d)?.len() as u64)
    }

    /// `(L(g), R(g))`, with `R(g) = L(g⁻¹)`.
    pub fn coset_counts(&self, d: &DoubleCoset<B::Elem>) -> Result<(u64, u64)> {
        let l = self.left_count(d)?;
        let inverse = self.double_of(&self.backend.inv(d.rep()));
        let r = self.left_count(&inverse)?;
        Ok((l, r))
    }

    /// Modular function `Δ = L/R`.
    pub fn delta(&self, d: &DoubleCoset<B::Elem>) -> Result<Rational> {
        let (l, r) = self.coset_counts(d)?;
        Rational::new(l, r)
    }

    /// `R(g)` counted by right-coset orbit closure rather than via `L(g⁻¹)`.
    pub fn right_count_by_orbit(&self, g: &B::Elem) -> Result<u64> {
        self.backend.validate(g)?;
        right_orbit_count(&self.backend, g, self.budget).map(|n| n as u64)
    }

    pub(crate) fn check_same(&self, other: &Arc<str>) -> Result<()> {
        if *other != self.id {
            return Err(Error::BackendMismatch {
                left: self.id.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::dihedral::{Dihedral, DihedralElement};
    use crate::backends::dyadic::{Dyadic, DyadicElement};

    #[test]
    fn identity_coset_counts() {
        let h = Hecke::new(Dihedral);
        let e = h.identity_coset();
        assert_eq!(h.coset_counts(&e).unwrap(), (1, 1));
        assert_eq!(h.delta(&e).unwrap(), Rational::one());
        let cosets = h.left_cosets_of(&e).unwrap();
        assert_eq!(cosets.len(), 1);
        assert!(h.backend().in_gamma(cosets[0].rep()));
    }

    #[test]
    fn budget_is_reported() {
        let h = Hecke::with_budget(Dyadic, 3);
        let d = h.canonical_double_coset(&DyadicElement::new(Rational::zero(), 2).unwrap()).unwrap();
        assert_eq!(h.left_cosets_of(&d), Err(Error::BudgetExceeded { limit: 3 }));
        let h = Hecke::with_budget(Dyadic, 4);
        assert_eq!(h.left_count(&d).unwrap(), 4);
    }

    #[test]
    fn orbit_routes_agree_on_dihedral() {
        let b = Dihedral;
        let g = DihedralElement::new(3, -1).unwrap();
        let mut orbit = left_orbit(&b, &g, 100).unwrap();
        orbit.sort();
        let mut direct = b.enumerate_left_cosets(&b.canonical_double(&g), 100).unwrap();
        direct.sort();
        assert_eq!(orbit, direct);
        assert_eq!(right_orbit_count(&b, &g, 100).unwrap(), 2);
    }
}
