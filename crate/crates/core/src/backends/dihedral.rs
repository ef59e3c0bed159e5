//! The infinite dihedral group `Z ⋊ Z/2` with Γ the order-two subgroup
//! `{(0, 1), (0, -1)}`.
//!
//! Left cosets are keyed by `n`, double cosets by `|n|`. Every nontrivial
//! double coset holds two left cosets and Δ is trivial.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::pair::HeckePair;

/// `(n, s)` acting on `Z` by `x ↦ n + s·x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    pub n: i64,
    pub s: i8,
}

impl DihedralElement {
    pub fn new(n: i64, s: i8) -> Result<Self> {
        if s != 1 && s != -1 {
            return Err(Error::Malformed(format!("dihedral sign must be ±1, got {s}")));
        }
        Ok(DihedralElement { n, s })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Dihedral;

impl HeckePair for Dihedral {
    type Elem = DihedralElement;

    fn id(&self) -> String {
        "dihedral".into()
    }

    fn identity(&self) -> DihedralElement {
        DihedralElement { n: 0, s: 1 }
    }

    fn mul(&self, a: &DihedralElement, b: &DihedralElement) -> DihedralElement {
        DihedralElement { n: a.n + a.s as i64 * b.n, s: a.s * b.s }
    }

    fn inv(&self, a: &DihedralElement) -> DihedralElement {
        DihedralElement { n: -(a.s as i64) * a.n, s: a.s }
    }

    fn validate(&self, g: &DihedralElement) -> Result<()> {
        DihedralElement::new(g.n, g.s).map(|_| ())
    }

    fn in_gamma(&self, g: &DihedralElement) -> bool {
        g.n == 0
    }

    fn gamma_generators(&self) -> Vec<DihedralElement> {
        vec![DihedralElement { n: 0, s: -1 }]
    }

    fn canonical_left(&self, g: &DihedralElement) -> DihedralElement {
        DihedralElement { n: g.n, s: 1 }
    }

    fn canonical_double(&self, g: &DihedralElement) -> DihedralElement {
        DihedralElement { n: g.n.abs(), s: 1 }
    }

    fn enumerate_left_cosets(&self, d: &DihedralElement, _budget: usize) -> Result<Vec<DihedralElement>> {
        let n = d.n.abs();
        if n == 0 {
            Ok(vec![self.identity()])
        } else {
            Ok(vec![DihedralElement { n: -n, s: 1 }, DihedralElement { n, s: 1 }])
        }
    }

    fn elem_to_json(&self, g: &DihedralElement) -> Value {
        json!([g.n, g.s])
    }

    fn elem_from_json(&self, v: &Value) -> Result<DihedralElement> {
        let bad = || Error::Parse(format!("dihedral element must be [n, s], got {v}"));
        let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
        let n = arr[0].as_i64().ok_or_else(bad)?;
        let s = arr[1].as_i64().ok_or_else(bad)?;
        let s = i8::try_from(s).map_err(|_| Error::Malformed(format!("dihedral sign {s}")))?;
        DihedralElement::new(n, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::Hecke;
    use crate::scalar::Rational;

    fn el(n: i64, s: i8) -> DihedralElement {
        DihedralElement::new(n, s).unwrap()
    }

    /// All of `Γ g Γ` for the two-element Γ.
    fn brute_double(g: DihedralElement) -> Vec<DihedralElement> {
        let b = Dihedral;
        let gamma = [el(0, 1), el(0, -1)];
        let mut out = vec![];
        for x in gamma {
            for y in gamma {
                out.push(b.mul(&b.mul(&x, &g), &y));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn double_coset_of_minus_five() {
        let h = Hecke::new(Dihedral);
        let d = h.canonical_double_coset(&el(-5, -1)).unwrap();
        assert_eq!(*d.rep(), el(5, 1));
        // brute-force orbit contains (5, 1) and every member canonicalizes to it
        let orbit = brute_double(el(-5, -1));
        assert!(orbit.contains(&el(5, 1)));
        assert!(orbit.iter().all(|x| Dihedral.canonical_double(x) == el(5, 1)));
    }

    #[test]
    fn left_cosets_of_one() {
        let h = Hecke::new(Dihedral);
        let d = h.canonical_double_coset(&el(1, 1)).unwrap();
        let reps: Vec<_> = h.left_cosets_of(&d).unwrap().iter().map(|c| *c.rep()).collect();
        assert_eq!(reps, vec![el(-1, 1), el(1, 1)]);
        assert_eq!(h.coset_counts(&d).unwrap(), (2, 2));
        assert_eq!(h.delta(&d).unwrap(), Rational::one());
    }

    #[test]
    fn rejects_bad_sign() {
        assert!(DihedralElement::new(1, 0).is_err());
        assert!(Dihedral.elem_from_json(&json!([1, 2])).is_err());
        assert!(Dihedral.elem_from_json(&json!("x")).unwrap_err().is_parse());
    }
}
