//! Growth of a Hecke pair measured through powers of a finite set of double
//! cosets: `AB` is the set of double cosets in `ΓaΓbΓ`, `A⁰ = A`,
//! `Aⁿ = A·Aⁿ⁻¹`, and `L(A) = Σ_{[g] ∈ A} L(g)`.
//!
//! The pair has subexponential growth when `L(Aⁿ)^(1/n) → 1` for every `A`.
//! A finite prefix cannot decide a limsup, so [`classify`] is a heuristic.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::pair::{DoubleCoset, Hecke, HeckePair};
use crate::scalar::Rational;

/// A finite set of double cosets of one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSet<E> {
    pair: Arc<str>,
    members: BTreeSet<DoubleCoset<E>>,
}

impl<E: Clone + Ord> CosetSet<E> {
    pub fn pair_id(&self) -> &Arc<str> {
        &self.pair
    }

    pub fn members(&self) -> impl Iterator<Item = &DoubleCoset<E>> {
        self.members.iter()
    }

    pub fn contains(&self, d: &DoubleCoset<E>) -> bool {
        self.members.contains(d)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl<B: HeckePair> Hecke<B> {
    pub fn coset_set(&self, members: impl IntoIterator<Item = DoubleCoset<B::Elem>>) -> CosetSet<B::Elem> {
        CosetSet { pair: self.id().clone(), members: members.into_iter().collect() }
    }

    /// Builds a set from arbitrary elements, canonicalizing each.
    pub fn coset_set_of(&self, elems: &[B::Elem]) -> Result<CosetSet<B::Elem>> {
        let members = elems
            .iter()
            .map(|g| self.canonical_double_coset(g))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(CosetSet { pair: self.id().clone(), members })
    }

    /// `AB`: the union of the supports of `e_[a] * e_[b]`.
    pub fn set_product(&self, a: &CosetSet<B::Elem>, b: &CosetSet<B::Elem>) -> Result<CosetSet<B::Elem>> {
        self.check_same(&a.pair)?;
        self.check_same(&b.pair)?;
        let pairs: Vec<_> = a
            .members
            .iter()
            .flat_map(|x| b.members.iter().map(move |y| (x, y)))
            .collect();
        let tables = pairs
            .par_iter()
            .map(|(x, y)| self.structure_constants(x, y))
            .collect::<Result<Vec<_>>>()?;
        let members = tables.iter().flat_map(|t| t.keys().cloned()).collect();
        Ok(CosetSet { pair: a.pair.clone(), members })
    }

    /// `L(A)`.
    pub fn total_l(&self, a: &CosetSet<B::Elem>) -> Result<u64> {
        self.check_same(&a.pair)?;
        a.members.iter().map(|d| self.left_count(d)).sum()
    }

    /// Rows `0 ≤ n ≤ nmax` of the `L(Aⁿ)` sequence. Stops early with
    /// `truncated` set when the enumeration budget runs out.
    pub fn growth_sequence(&self, a: &CosetSet<B::Elem>, nmax: u32) -> Result<GrowthReport> {
        self.check_same(&a.pair)?;
        let mut rows = Vec::new();
        let mut power = a.clone();
        let mut truncated = false;
        for n in 0..=nmax {
            if n > 0 {
                power = match self.set_product(a, &power) {
                    Ok(p) => p,
                    Err(Error::BudgetExceeded { .. }) => {
                        truncated = true;
                        break;
                    }
                    Err(e) => return Err(e),
                };
            }
            let l = match self.total_l(&power) {
                Ok(l) => l,
                Err(Error::BudgetExceeded { .. }) => {
                    truncated = true;
                    break;
                }
                Err(e) => return Err(e),
            };
            rows.push(GrowthRow { n, size: power.len(), l });
        }
        Ok(GrowthReport { pair: self.id().to_string(), nmax, rows, truncated })
    }
}

/// One row of a [`GrowthReport`]; only exact data is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: u32,
    pub size: usize,
    pub l: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub pair: String,
    pub nmax: u32,
    pub rows: Vec<GrowthRow>,
    pub truncated: bool,
}

impl GrowthReport {
    pub fn l_values(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.l).collect()
    }

    /// `L(Aⁿ)^(1/n)`; undefined at `n = 0`.
    pub fn root(&self, i: usize) -> Option<f64> {
        let row = &self.rows[i];
        (row.n > 0).then(|| (row.l as f64).powf(1.0 / row.n as f64))
    }

    /// `L(Aⁿ)/L(Aⁿ⁻¹)`, rounded from the exact quotient.
    pub fn ratio(&self, i: usize) -> Option<f64> {
        self.exact_ratio(i).map(|r| r.to_f64())
    }

    pub fn exact_ratio(&self, i: usize) -> Option<Rational> {
        if i == 0 {
            return None;
        }
        Rational::new(self.rows[i].l, self.rows[i - 1].l).ok()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,size,L,root,ratio\n");
        for (i, r) in self.rows.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.n,
                r.size,
                r.l,
                self.root(i).map(sig6).unwrap_or_default(),
                self.ratio(i).map(sig6).unwrap_or_default()
            ));
        }
        out
    }

    pub fn to_json(&self, verdict: Option<&Verdict>) -> Value {
        let num = |x: Option<f64>| x.map(|v| sig6(v).parse::<f64>().map(Value::from).unwrap_or(Value::Null));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                json!({
                    "n": r.n,
                    "size": r.size,
                    "L": r.l,
                    "root": num(self.root(i)),
                    "ratio": num(self.ratio(i)),
                })
            })
            .collect();
        let mut out = json!({
            "pair": self.pair,
            "nmax": self.nmax,
            "truncated": self.truncated,
            "rows": rows,
        });
        if let Some(v) = verdict {
            out["classification"] = json!({
                "label": v.label.as_str(),
                "band": v.band,
                "window": v.window,
                "heuristic": true,
            });
        }
        out
    }
}

/// Formats with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthLabel {
    SubexponentialEvidence,
    ExponentialEvidence,
    Inconclusive,
}

impl GrowthLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            GrowthLabel::SubexponentialEvidence => "subexponential_evidence",
            GrowthLabel::ExponentialEvidence => "exponential_evidence",
            GrowthLabel::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub label: GrowthLabel,
    pub band: f64,
    pub window: usize,
}

/// Heuristic reading of the last `window` successive ratios.
///
/// All within `band` of 1: subexponential evidence. All at least `1 + band`
/// and agreeing with each other to within a relative `band`: exponential
/// evidence. Otherwise, or with fewer than `window` ratios, inconclusive.
pub fn classify(report: &GrowthReport, band: f64, window: usize) -> Verdict {
    let ratios: Vec<f64> = (1..report.rows.len()).filter_map(|i| report.ratio(i)).collect();
    let label = if window == 0 || ratios.len() < window {
        GrowthLabel::Inconclusive
    } else {
        let tail = &ratios[ratios.len() - window..];
        let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi <= 1.0 + band {
            GrowthLabel::SubexponentialEvidence
        } else if lo >= 1.0 + band && (hi - lo) <= band * lo {
            GrowthLabel::ExponentialEvidence
        } else {
            GrowthLabel::Inconclusive
        }
    };
    Verdict { label, band, window }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::dihedral::{Dihedral, DihedralElement};
    use crate::backends::sl2::Sl2;

    fn dihedral_set(h: &Hecke<Dihedral>, ns: &[i64]) -> CosetSet<DihedralElement> {
        let elems: Vec<_> = ns.iter().map(|&n| DihedralElement::new(n, 1).unwrap()).collect();
        h.coset_set_of(&elems).unwrap()
    }

    #[test]
    fn set_products() {
        let h = Hecke::new(Dihedral);
        let one = dihedral_set(&h, &[1]);
        assert_eq!(h.set_product(&one, &one).unwrap(), dihedral_set(&h, &[0, 2]));
        let e = dihedral_set(&h, &[0]);
        let a = dihedral_set(&h, &[0, 1, 3]);
        assert_eq!(h.set_product(&a, &e).unwrap(), a);
        assert_eq!(h.total_l(&dihedral_set(&h, &[0, 1, 2])).unwrap(), 5);
        assert_eq!(h.total_l(&e).unwrap(), 1);

        let s = Hecke::new(Sl2::new(2).unwrap());
        let x = |n| s.backend().x(n);
        let x1 = s.coset_set_of(&[x(1)]).unwrap();
        assert_eq!(s.set_product(&x1, &x1).unwrap(), s.coset_set_of(&[x(0), x(1), x(2)]).unwrap());
        assert_eq!(s.total_l(&s.coset_set_of(&[x(0), x(1)]).unwrap()).unwrap(), 7);
    }

    #[test]
    fn sequences() {
        let h = Hecke::new(Dihedral);
        let report = h.growth_sequence(&dihedral_set(&h, &[0, 1]), 10).unwrap();
        assert!(!report.truncated);
        for r in &report.rows {
            assert_eq!(r.l, 2 * r.n as u64 + 3);
            assert_eq!(r.size, r.n as usize + 2);
        }
        assert_eq!(report.rows[10].l, 23);
        assert_eq!(report.root(0), None);
        assert_eq!(report.ratio(0), None);

        let unit = h.growth_sequence(&dihedral_set(&h, &[0]), 5).unwrap();
        assert!(unit.rows.iter().all(|r| r.l == 1));

        let s = Hecke::new(Sl2::new(2).unwrap());
        let a = s.coset_set_of(&[s.backend().x(0), s.backend().x(1)]).unwrap();
        let report = s.growth_sequence(&a, 3).unwrap();
        assert_eq!(report.l_values(), vec![7, 31, 127, 511]);
        assert_eq!(report.exact_ratio(3).unwrap(), Rational::new(511, 127).unwrap());
    }

    #[test]
    fn truncation_is_flagged() {
        let s = Hecke::with_budget(Sl2::new(2).unwrap(), 30);
        let a = s.coset_set_of(&[s.backend().x(0), s.backend().x(1)]).unwrap();
        let report = s.growth_sequence(&a, 5).unwrap();
        assert!(report.truncated);
        assert!(report.rows.len() < 6);
        assert_eq!(report.rows[0].l, 7);
    }

    #[test]
    fn formats() {
        assert_eq!(sig6(4.023622047), "4.02362");
        assert_eq!(sig6(1.0), "1.00000");
        assert_eq!(sig6(511.0), "511.000");
        assert_eq!(sig6(0.0123456789), "0.0123457");
        let h = Hecke::new(Dihedral);
        let report = h.growth_sequence(&dihedral_set(&h, &[0, 1]), 2).unwrap();
        assert_eq!(report.to_csv(), "n,size,L,root,ratio\n0,2,3,,\n1,3,5,5.00000,1.66667\n2,4,7,2.64575,1.40000\n");
        let v = report.to_json(None);
        assert_eq!(v["rows"][1]["ratio"], json!(1.66667));
        assert_eq!(v["rows"][0]["root"], Value::Null);
    }

    #[test]
    fn classification() {
        let h = Hecke::new(Dihedral);
        let report = h.growth_sequence(&dihedral_set(&h, &[0, 1]), 100).unwrap();
        assert_eq!(classify(&report, 0.02, 5).label, GrowthLabel::SubexponentialEvidence);
        let s = Hecke::new(Sl2::new(2).unwrap());
        let a = s.coset_set_of(&[s.backend().x(0), s.backend().x(1)]).unwrap();
        let report = s.growth_sequence(&a, 4).unwrap();
        assert_eq!(classify(&report, 0.02, 2).label, GrowthLabel::ExponentialEvidence);
        assert_eq!(classify(&report, 0.02, 10).label, GrowthLabel::Inconclusive);
    }

    #[test]
    fn mismatched_pairs_rejected() {
        let h = Hecke::new(Dihedral);
        let s = Hecke::new(Sl2::new(2).unwrap());
        let a = dihedral_set(&h, &[1]);
        assert!(matches!(s.total_l(&s.coset_set(std::iter::empty())), Ok(0)));
        let foreign = CosetSet::<crate::backends::sl2::Sl2Element> { pair: a.pair.clone(), members: BTreeSet::new() };
        assert!(matches!(s.growth_sequence(&foreign, 1), Err(Error::BackendMismatch { .. })));
    }
}
