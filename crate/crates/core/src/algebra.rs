//! The Hecke algebra: convolution, involution, `L¹`-norm and the right inner
//! product on `C_c(Ḡ)p`.
//!
//! The basis is `e_[g]`, the characteristic function of `ΓgΓ`. The
//! double-averaged point mass `p·λ_g·p` is `(1/L(g))·e_[g]`. Measures are
//! normalized so that `μ(Γ) = 1`, which turns every integral into a count of
//! left cosets.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::backends::finite::{FinitePair, Perm};
use crate::error::{Error, Result};
use crate::pair::{DoubleCoset, Hecke, HeckePair, LeftCoset};
use crate::scalar::{GaussianRational, Rational};

fn insert_term<K: Ord>(map: &mut BTreeMap<K, GaussianRational>, key: K, c: &GaussianRational) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += c;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
        Entry::Vacant(slot) => {
            slot.insert(c.clone());
        }
    }
}

/// A finitely supported function on `Γ\G/Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement<E> {
    pair: Arc<str>,
    coeffs: BTreeMap<DoubleCoset<E>, GaussianRational>,
}

/// A finitely supported function on `G/Γ`, i.e. an element of `C_c(Ḡ)p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetFunction<E> {
    pair: Arc<str>,
    coeffs: BTreeMap<LeftCoset<E>, GaussianRational>,
}

macro_rules! linear_ops {
    ($ty:ident, $key:ident) => {
        impl<E: Clone + Ord> $ty<E> {
            pub fn pair_id(&self) -> &Arc<str> {
                &self.pair
            }

            pub fn terms(&self) -> impl Iterator<Item = (&$key<E>, &GaussianRational)> {
                self.coeffs.iter()
            }

            pub fn coeff(&self, k: &$key<E>) -> GaussianRational {
                self.coeffs.get(k).cloned().unwrap_or_default()
            }

            pub fn support(&self) -> impl Iterator<Item = &$key<E>> {
                self.coeffs.keys()
            }

            pub fn len(&self) -> usize {
                self.coeffs.len()
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.is_empty()
            }

            pub fn is_real(&self) -> bool {
                self.coeffs.values().all(GaussianRational::is_real)
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                if self.pair != other.pair {
                    return Err(Error::BackendMismatch {
                        left: self.pair.to_string(),
                        right: other.pair.to_string(),
                    });
                }
                let mut coeffs = self.coeffs.clone();
                for (k, c) in &other.coeffs {
                    insert_term(&mut coeffs, k.clone(), c);
                }
                Ok($ty { pair: self.pair.clone(), coeffs })
            }

            pub fn scale(&self, c: &GaussianRational) -> Self {
                let coeffs = self
                    .coeffs
                    .iter()
                    .map(|(k, v)| (k.clone(), v * c))
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                $ty { pair: self.pair.clone(), coeffs }
            }
        }
    };
}

linear_ops!(HeckeElement, DoubleCoset);
linear_ops!(CosetFunction, LeftCoset);

/// Result of [`Hecke::l1_norm`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum L1Norm {
    Exact(Rational),
    /// Sum of per-coefficient moduli, each rounded up to a multiple of 2⁻⁶⁴.
    UpperBound(Rational),
}

impl L1Norm {
    pub fn value(&self) -> &Rational {
        match self {
            L1Norm::Exact(v) | L1Norm::UpperBound(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, L1Norm::Exact(_))
    }
}

/// Bits kept after the binary point when a modulus is irrational.
pub const NORM_FRACTION_BITS: u32 = 64;

impl<B: HeckePair> Hecke<B> {
    pub fn zero(&self) -> HeckeElement<B::Elem> {
        HeckeElement { pair: self.id().clone(), coeffs: BTreeMap::new() }
    }

    /// `e_[d]`.
    pub fn basis(&self, d: &DoubleCoset<B::Elem>) -> HeckeElement<B::Elem> {
        self.element(std::iter::once((d.clone(), GaussianRational::one())))
    }

    /// `e_[e]`, the unit, which is the projection `p`.
    pub fn unit(&self) -> HeckeElement<B::Elem> {
        self.basis(&self.identity_coset())
    }

    pub fn element(
        &self,
        terms: impl IntoIterator<Item = (DoubleCoset<B::Elem>, GaussianRational)>,
    ) -> HeckeElement<B::Elem> {
        let mut coeffs = BTreeMap::new();
        for (d, c) in terms {
            insert_term(&mut coeffs, d, &c);
        }
        HeckeElement { pair: self.id().clone(), coeffs }
    }

    pub fn coset_function(
        &self,
        terms: impl IntoIterator<Item = (LeftCoset<B::Elem>, GaussianRational)>,
    ) -> CosetFunction<B::Elem> {
        let mut coeffs = BTreeMap::new();
        for (c, v) in terms {
            insert_term(&mut coeffs, c, &v);
        }
        CosetFunction { pair: self.id().clone(), coeffs }
    }

    /// `1_{gΓ}`.
    pub fn indicator(&self, g: &B::Elem) -> Result<CosetFunction<B::Elem>> {
        Ok(self.coset_function([(self.canonical_left_coset(g)?, GaussianRational::one())]))
    }

    /// Structure constants `e_[a] * e_[b] = Σ c_g e_[g]`.
    ///
    /// With `ΓaΓ = ⊔ h_iΓ` and `ΓbΓ = ⊔ k_jΓ`, the coefficient at `ΓgΓ` is the
    /// number of pairs with `h_i k_j Γ = gΓ`; it must not depend on which
    /// `gΓ ⊂ ΓgΓ` is used, and that is checked.
    pub fn structure_constants(
        &self,
        a: &DoubleCoset<B::Elem>,
        b: &DoubleCoset<B::Elem>,
    ) -> Result<Arc<BTreeMap<DoubleCoset<B::Elem>, u64>>> {
        let key = (a.rep().clone(), b.rep().clone());
        if let Some(hit) = self.product_cache.read().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let hs = self.left_cosets_of(a)?;
        let ks = self.left_cosets_of(b)?;
        let backend = self.backend();
        let mut counts: HashMap<B::Elem, u64> = HashMap::new();
        for h in hs.iter() {
            for k in ks.iter() {
                let c = backend.canonical_left(&backend.mul(h.rep(), k.rep()));
                *counts.entry(c).or_insert(0) += 1;
            }
        }
        let mut by_double: BTreeMap<DoubleCoset<B::Elem>, (u64, u64)> = BTreeMap::new();
        for (left, n) in counts {
            let d = self.double_of(&left);
            let slot = by_double.entry(d.clone()).or_insert((n, 0));
            if slot.0 != n {
                return Err(Error::Inconsistent(format!(
                    "product count not constant on double coset {:?}: {} vs {}",
                    d.rep(),
                    slot.0,
                    n
                )));
            }
            slot.1 += 1;
        }
        let mut table = BTreeMap::new();
        for (d, (n, seen)) in by_double {
            let l = self.left_count(&d)?;
            if seen != l {
                return Err(Error::Inconsistent(format!(
                    "product hit {seen} of the {l} left cosets in {:?}",
                    d.rep()
                )));
            }
            table.insert(d, n);
        }
        let table = Arc::new(table);
        self.product_cache
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| table.clone());
        Ok(table)
    }

    /// `(f₁*f₂)(ΓgΓ) = Σ_{hΓ ∈ G/Γ} f₁(ΓhΓ) f₂(Γh⁻¹gΓ)`.
    pub fn convolve(
        &self,
        f1: &HeckeElement<B::Elem>,
        f2: &HeckeElement<B::Elem>,
    ) -> Result<HeckeElement<B::Elem>> {
        self.check_same(&f1.pair)?;
        self.check_same(&f2.pair)?;
        let pairs: Vec<_> = f1
            .terms()
            .flat_map(|(a, ca)| f2.terms().map(move |(b, cb)| (a, ca, b, cb)))
            .collect();
        let tables = pairs
            .par_iter()
            .map(|(a, _, b, _)| self.structure_constants(a, b))
            .collect::<Result<Vec<_>>>()?;
        let mut coeffs = BTreeMap::new();
        for ((_, ca, _, cb), table) in pairs.iter().zip(tables) {
            let c = *ca * *cb;
            for (d, n) in table.iter() {
                insert_term(&mut coeffs, d.clone(), &c.scale(&Rational::from(*n as i64)));
            }
        }
        Ok(HeckeElement { pair: f1.pair.clone(), coeffs })
    }

    /// `f*(ΓgΓ) = Δ(g⁻¹)·conj f(Γg⁻¹Γ)`, so `e_[a] ↦ Δ(a)·e_[a⁻¹]`.
    pub fn star(&self, f: &HeckeElement<B::Elem>) -> Result<HeckeElement<B::Elem>> {
        self.check_same(&f.pair)?;
        let mut coeffs = BTreeMap::new();
        for (d, c) in f.terms() {
            let delta = self.delta(d)?;
            let inverse = self.double_of(&self.backend().inv(d.rep()));
            insert_term(&mut coeffs, inverse, &c.conj().scale(&delta));
        }
        Ok(HeckeElement { pair: f.pair.clone(), coeffs })
    }

    /// `‖f‖₁ = Σ |f(ΓgΓ)|·L(g)`.
    pub fn l1_norm(&self, f: &HeckeElement<B::Elem>) -> Result<L1Norm> {
        self.check_same(&f.pair)?;
        let mut total = Rational::zero();
        let mut exact = true;
        for (d, c) in f.terms() {
            let modulus = match c.norm_sqr().sqrt_exact() {
                Some(m) => m,
                None => {
                    exact = false;
                    c.norm_sqr().sqrt_ceil_dyadic(NORM_FRACTION_BITS)
                }
            };
            total += &(modulus * Rational::from(self.left_count(d)? as i64));
        }
        Ok(if exact { L1Norm::Exact(total) } else { L1Norm::UpperBound(total) })
    }

    /// `⟨f, g⟩_R = f* * g`, computed termwise:
    /// `1_{hΓ}* * 1_{kΓ} = (1/L(h⁻¹k))·e_[h⁻¹k]`.
    pub fn r_inner(
        &self,
        f: &CosetFunction<B::Elem>,
        g: &CosetFunction<B::Elem>,
    ) -> Result<HeckeElement<B::Elem>> {
        self.check_same(&f.pair)?;
        self.check_same(&g.pair)?;
        let f: Vec<_> = f.terms().map(|(h, a)| (h.rep().clone(), a.clone())).collect();
        let g: Vec<_> = g.terms().map(|(k, b)| (k.rep().clone(), b.clone())).collect();
        self.r_inner_of_reps(&f, &g)
    }

    /// [`Hecke::r_inner`] with each function given as `(representative, value)`
    /// pairs, where the representatives need not be canonical. Terms sharing a
    /// left coset must be merged by the caller.
    pub fn r_inner_of_reps(
        &self,
        f: &[(B::Elem, GaussianRational)],
        g: &[(B::Elem, GaussianRational)],
    ) -> Result<HeckeElement<B::Elem>> {
        let backend = self.backend();
        for (x, _) in f.iter().chain(g) {
            backend.validate(x)?;
        }
        let mut coeffs = BTreeMap::new();
        for (h, a) in f {
            let h_inv = backend.inv(h);
            for (k, b) in g {
                let d = self.double_of(&backend.mul(&h_inv, k));
                let weight = Rational::new(1, self.left_count(&d)?)?;
                insert_term(&mut coeffs, d, &(&a.conj() * b).scale(&weight));
            }
        }
        Ok(HeckeElement { pair: self.id().clone(), coeffs })
    }
}

/// Outcome of comparing the Hecke algebra with `p·C[G]·p`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub product_matches: bool,
    pub star_matches: bool,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.product_matches && self.star_matches
    }
}

impl Hecke<FinitePair> {
    fn embed(&self, f: &HeckeElement<Perm>) -> Vec<GaussianRational> {
        let pair = self.backend();
        pair.elements()
            .iter()
            .map(|x| f.coeff(&self.double_of(x)))
            .collect()
    }

    /// Group-algebra convolution with `μ({x}) = 1/|Γ|`.
    fn group_convolve(&self, f1: &[GaussianRational], f2: &[GaussianRational]) -> Vec<GaussianRational> {
        let pair = self.backend();
        let weight = Rational::new(1, pair.gamma_order() as u64).expect("Γ nonempty");
        let els = pair.elements();
        let mut out = vec![GaussianRational::zero(); els.len()];
        for (yi, y) in els.iter().enumerate() {
            if f1[yi].is_zero() {
                continue;
            }
            let y_inv = y.inverse();
            for (xi, x) in els.iter().enumerate() {
                let z = pair.index_of(&y_inv.compose(x)).expect("closed under products");
                if !f2[z].is_zero() {
                    out[xi] += &(&f1[yi] * &f2[z]).scale(&weight);
                }
            }
        }
        out
    }

    fn projection(&self) -> Vec<GaussianRational> {
        let pair = self.backend();
        pair.elements()
            .iter()
            .map(|x| if pair.in_gamma(x) { GaussianRational::one() } else { GaussianRational::zero() })
            .collect()
    }

    fn compare(
        &self,
        label: &str,
        values: &[GaussianRational],
        expected: &HeckeElement<Perm>,
        mismatches: &mut Vec<String>,
    ) -> bool {
        let mut ok = true;
        for (x, v) in self.backend().elements().iter().zip(values) {
            let want = expected.coeff(&self.double_of(x));
            if *v != want {
                ok = false;
                mismatches.push(format!("{label}: at {:?} group algebra gives {v}, Hecke gives {want}", x.0));
            }
        }
        ok
    }

    /// Embeds `f1`, `f2` as Γ-biinvariant functions on `G`, multiplies them in
    /// the group algebra, compresses by `p = 1_Γ` and compares with
    /// [`Hecke::convolve`]; likewise for the involution.
    pub fn group_algebra_oracle_check(
        &self,
        f1: &HeckeElement<Perm>,
        f2: &HeckeElement<Perm>,
    ) -> Result<OracleReport> {
        let product = self.convolve(f1, f2)?;
        let p = self.projection();
        let raw = self.group_convolve(&self.embed(f1), &self.embed(f2));
        let compressed = self.group_convolve(&self.group_convolve(&p, &raw), &p);
        let mut mismatches = vec![];
        let product_matches = self.compare("product", &compressed, &product, &mut mismatches);

        // finite groups are unimodular: F*(x) = conj F(x⁻¹)
        let star = self.star(f1)?;
        let pair = self.backend();
        let embedded = self.embed(f1);
        let group_star: Vec<_> = pair
            .elements()
            .iter()
            .map(|x| embedded[pair.index_of(&x.inverse()).expect("group")].conj())
            .collect();
        let star_matches = self.compare("star", &group_star, &star, &mut mismatches);
        Ok(OracleReport { product_matches, star_matches, mismatches })
    }
}
