//! Dyadic affine group `{x ↦ 2^k·x + b : b ∈ Z[1/2], k ∈ Z}` with Γ the
//! integer translations. This pair is not unimodular: `Δ((b, k)) = 2^k`.

use std::cmp::Ordering;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::pair::HeckePair;
use crate::scalar::{has_prime_power_denominator, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicElement {
    pub b: Rational,
    pub k: i64,
}

impl DyadicElement {
    pub fn new(b: Rational, k: i64) -> Result<Self> {
        if !has_prime_power_denominator(&b, 2) {
            return Err(Error::Malformed(format!("translation {b} is not dyadic")));
        }
        Ok(DyadicElement { b, k })
    }
}

impl Ord for DyadicElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.k.cmp(&other.k).then_with(|| self.b.cmp(&other.b))
    }
}

impl PartialOrd for DyadicElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `x - m·floor(x/m)`, i.e. the representative of `x mod m` in `[0, m)`.
fn mod_window(x: &Rational, m: &Rational) -> Rational {
    let quotient = Rational::from_int((x / m).floor());
    x - &(m * &quotient)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Dyadic;

impl HeckePair for Dyadic {
    type Elem = DyadicElement;

    fn id(&self) -> String {
        "dyadic".into()
    }

    fn identity(&self) -> DyadicElement {
        DyadicElement { b: Rational::zero(), k: 0 }
    }

    fn mul(&self, x: &DyadicElement, y: &DyadicElement) -> DyadicElement {
        DyadicElement {
            b: &x.b + &(Rational::prime_power(2, x.k) * &y.b),
            k: x.k + y.k,
        }
    }

    fn inv(&self, x: &DyadicElement) -> DyadicElement {
        DyadicElement { b: -(Rational::prime_power(2, -x.k) * &x.b), k: -x.k }
    }

    fn validate(&self, g: &DyadicElement) -> Result<()> {
        DyadicElement::new(g.b.clone(), g.k).map(|_| ())
    }

    fn in_gamma(&self, g: &DyadicElement) -> bool {
        g.k == 0 && g.b.is_integer()
    }

    fn gamma_generators(&self) -> Vec<DyadicElement> {
        vec![DyadicElement { b: Rational::one(), k: 0 }]
    }

    // gΓ = {(b + 2^k n, k)}
    fn canonical_left(&self, g: &DyadicElement) -> DyadicElement {
        DyadicElement { b: mod_window(&g.b, &Rational::prime_power(2, g.k)), k: g.k }
    }

    // ΓgΓ = {(b + n + 2^k m, k)} and Z + 2^k Z = 2^min(k,0) Z
    fn canonical_double(&self, g: &DyadicElement) -> DyadicElement {
        DyadicElement { b: mod_window(&g.b, &Rational::prime_power(2, g.k.min(0))), k: g.k }
    }

    fn enumerate_left_cosets(&self, d: &DyadicElement, budget: usize) -> Result<Vec<DyadicElement>> {
        let d = self.canonical_double(d);
        if d.k <= 0 {
            return Ok(vec![d]);
        }
        if d.k >= 63 || (1usize << d.k) > budget {
            return Err(Error::BudgetExceeded { limit: budget });
        }
        Ok((0..(1i64 << d.k))
            .map(|n| self.canonical_left(&DyadicElement { b: &d.b + &Rational::from(n), k: d.k }))
            .collect())
    }

    fn elem_to_json(&self, g: &DyadicElement) -> Value {
        json!([g.b.to_string(), g.k])
    }

    fn elem_from_json(&self, v: &Value) -> Result<DyadicElement> {
        let bad = || Error::Parse(format!("dyadic element must be [\"num/den\", k], got {v}"));
        let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
        let b: Rational = arr[0].as_str().ok_or_else(bad)?.parse()?;
        let k = arr[1].as_i64().ok_or_else(bad)?;
        DyadicElement::new(b, k)
    }
}
