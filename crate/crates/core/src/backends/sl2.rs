//! `(SL₂(Q_q), SL₂(Z_q))`, realised on the dense subgroup of determinant-one
//! matrices over `Z[1/q]`.
//!
//! Membership in Γ is integrality of all four entries at `q`. Double cosets
//! are indexed by `n = -min v_q(entry)` with representative
//! `x_n = diag(q^n, q^-n)`. A left coset `gΓ` is the lattice spanned by the
//! columns of `g`; its canonical representative is the column Hermite form
//! `[[q^a, b], [0, q^-a]]` with `b` reduced into `[0, q^a)`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::pair::HeckePair;
use crate::scalar::{
    ensure_prime, has_prime_power_denominator, reduce_mod_prime_power, valuation_unchecked,
    Rational, Valuation,
};

/// `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sl2Element {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Sl2Element {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Sl2Element { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Sl2Element::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn transpose(&self) -> Self {
        Sl2Element::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    fn entries(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

#[derive(Clone, Debug)]
pub struct Sl2 {
    q: u64,
}

impl Sl2 {
    pub fn new(q: u64) -> Result<Self> {
        ensure_prime(q)?;
        Ok(Sl2 { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `x_n = diag(q^n, q^-n)`.
    pub fn x(&self, n: i64) -> Sl2Element {
        Sl2Element::new(
            Rational::prime_power(self.q, n),
            Rational::zero(),
            Rational::zero(),
            Rational::prime_power(self.q, -n),
        )
    }

    /// `y_k = [[q, k], [0, q^-1]]`.
    pub fn y(&self, k: i64) -> Sl2Element {
        Sl2Element::new(
            Rational::from(self.q as i64),
            Rational::from(k),
            Rational::zero(),
            Rational::prime_power(self.q, -1),
        )
    }

    /// The index `n` of the double coset `Γ x_n Γ` containing `g`.
    pub fn double_index(&self, g: &Sl2Element) -> i64 {
        let min = g
            .entries()
            .into_iter()
            .map(|x| valuation_unchecked(x, self.q))
            .min()
            .expect("four entries");
        match min {
            Valuation::Finite(v) => -v,
            Valuation::Infinite => unreachable!("determinant-one matrix has a nonzero entry"),
        }
    }

    fn val(&self, x: &Rational) -> Valuation {
        valuation_unchecked(x, self.q)
    }
}

impl HeckePair for Sl2 {
    type Elem = Sl2Element;

    fn id(&self) -> String {
        format!("sl2:{}", self.q)
    }

    fn identity(&self) -> Sl2Element {
        Sl2Element::from_ints(1, 0, 0, 1)
    }

    fn mul(&self, x: &Sl2Element, y: &Sl2Element) -> Sl2Element {
        Sl2Element::new(
            &x.a * &y.a + &x.b * &y.c,
            &x.a * &y.b + &x.b * &y.d,
            &x.c * &y.a + &x.d * &y.c,
            &x.c * &y.b + &x.d * &y.d,
        )
    }

    fn inv(&self, x: &Sl2Element) -> Sl2Element {
        Sl2Element::new(x.d.clone(), -&x.b, -&x.c, x.a.clone())
    }

    fn validate(&self, g: &Sl2Element) -> Result<()> {
        if !g.det().is_one() {
            return Err(Error::Malformed(format!("determinant {} ≠ 1", g.det())));
        }
        if let Some(bad) = g.entries().into_iter().find(|x| !has_prime_power_denominator(x, self.q)) {
            return Err(Error::Malformed(format!(
                "entry {bad} has a denominator that is not a power of {}",
                self.q
            )));
        }
        Ok(())
    }

    fn in_gamma(&self, g: &Sl2Element) -> bool {
        g.entries().into_iter().all(|x| self.val(x) >= Valuation::Finite(0))
    }

    /// `S` and `T`, which generate `SL₂(Z)`, dense in `SL₂(Z_q)`.
    fn gamma_generators(&self) -> Vec<Sl2Element> {
        vec![Sl2Element::from_ints(0, -1, 1, 0), Sl2Element::from_ints(1, 1, 0, 1)]
    }

    fn canonical_left(&self, g: &Sl2Element) -> Sl2Element {
        // Pivot on the bottom-row entry of least valuation; that column,
        // rescaled by a q-adic unit, is a lattice vector (top, q^-a).
        let (vc, vd) = (self.val(&g.c), self.val(&g.d));
        let (top, bottom, v) = if vd <= vc {
            (&g.b, &g.d, vd)
        } else {
            (&g.a, &g.c, vc)
        };
        let a = -v.finite().expect("bottom row of an invertible matrix is nonzero");
        let unit = &Rational::prime_power(self.q, -a) / bottom;
        let b = reduce_mod_prime_power(&(top * &unit), self.q, a);
        Sl2Element::new(
            Rational::prime_power(self.q, a),
            b,
            Rational::zero(),
            Rational::prime_power(self.q, -a),
        )
    }

    fn canonical_double(&self, g: &Sl2Element) -> Sl2Element {
        self.x(self.double_index(g))
    }

    // Γg ↔ gᵀΓ since Γ is closed under transposition.
    fn canonical_right(&self, g: &Sl2Element) -> Sl2Element {
        self.canonical_left(&g.transpose()).transpose()
    }

    fn elem_to_json(&self, g: &Sl2Element) -> Value {
        json!([
            [g.a.to_string(), g.b.to_string()],
            [g.c.to_string(), g.d.to_string()]
        ])
    }

    fn elem_from_json(&self, v: &Value) -> Result<Sl2Element> {
        let bad = || Error::Parse(format!("SL2 element must be [[a, b], [c, d]], got {v}"));
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        let mut entries = Vec::with_capacity(4);
        for row in rows {
            let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
            for x in row {
                let x: Rational = match x {
                    Value::String(s) => s.parse()?,
                    Value::Number(n) => n.as_i64().ok_or_else(bad)?.into(),
                    _ => return Err(bad()),
                };
                entries.push(x);
            }
        }
        let [a, b, c, d]: [Rational; 4] = entries.try_into().map_err(|_| bad())?;
        let g = Sl2Element::new(a, b, c, d);
        self.validate(&g)?;
        Ok(g)
    }
}
