//! The spherical Hecke algebra of `(SL₂(Q_q), SL₂(Z_q))` and its characters.
//!
//! The characters are a one-parameter family `π_z`, `z ≠ 1`. On the
//! double-averaged point masses `p·x_m·p` they take the value
//!
//! ```text
//! phi(q, z, m) = (1 - qz)/((q+1)(1 - z)) · (z/q)^m + (q - z)/((q+1)(1 - z)) · (1/(qz))^m
//! ```
//!
//! Since `p·x_m·p = (1/L(x_m))·e_[x_m]`, a character evaluates on the
//! characteristic-function basis as `π_z(e_[x_m]) = L(x_m)·phi(q, z, m)`.
//! The multiplicativity tests against [`Hecke::convolve`] pin this
//! normalization down.
//!
//! `π_z` extends to the `L¹`-completion exactly for `z ∈ [-q, -1/q] ∪ [1/q, q]`;
//! a negative value of `π_z(⟨f, f⟩_R)` at such a `z` is a certificate that the
//! representation is not `⟨⟩_R`-positive.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{CosetFunction, HeckeElement};
use crate::backends::sl2::{Sl2, Sl2Element};
use crate::error::{Error, Result};
use crate::json::coset_function_to_json;
use crate::pair::{Hecke, HeckePair};
use crate::scalar::{ensure_prime, GaussianRational, Rational};

/// A real element of the spherical Hecke algebra in the `e_[x_m]` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalElement {
    q: u64,
    coeffs: BTreeMap<u32, Rational>,
}

impl SphericalElement {
    pub fn new(q: u64, terms: impl IntoIterator<Item = (u32, Rational)>) -> Result<Self> {
        ensure_prime(q)?;
        let mut coeffs: BTreeMap<u32, Rational> = BTreeMap::new();
        for (m, c) in terms {
            *coeffs.entry(m).or_default() += &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(SphericalElement { q, coeffs })
    }

    /// `e_[x_m]`.
    pub fn basis(q: u64, m: u32) -> Result<Self> {
        Self::new(q, [(m, Rational::one())])
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, m: u32) -> Rational {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    /// Projects an element of `H(SL₂(Q_q), SL₂(Z_q))`; coefficients must be real.
    pub fn from_hecke(h: &Hecke<Sl2>, f: &HeckeElement<Sl2Element>) -> Result<Self> {
        let s = h.backend();
        let mut terms = vec![];
        for (d, c) in f.terms() {
            let m = s.double_index(d.rep());
            if *d.rep() != s.x(m) {
                return Err(Error::NonSpherical(format!("{:?} is not some x_m", d.rep())));
            }
            if !c.is_real() {
                return Err(Error::NonSpherical(format!("coefficient {c} at x_{m} is not real")));
            }
            let m = u32::try_from(m).map_err(|_| Error::NonSpherical(format!("index {m}")))?;
            terms.push((m, c.re.clone()));
        }
        Self::new(s.q(), terms)
    }

    pub fn to_hecke(&self, h: &Hecke<Sl2>) -> Result<HeckeElement<Sl2Element>> {
        check_q(h, self.q)?;
        let terms = self
            .terms()
            .map(|(m, c)| Ok((h.canonical_double_coset(&h.backend().x(m as i64))?, GaussianRational::real(c.clone()))))
            .collect::<Result<Vec<_>>>()?;
        Ok(h.element(terms))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(m, c)| json!({"m": m, "coeff": c.to_string()}))
                .collect(),
        )
    }
}

fn check_q(h: &Hecke<Sl2>, q: u64) -> Result<()> {
    if h.backend().q() != q {
        return Err(Error::BackendMismatch { left: h.id().to_string(), right: format!("sl2:{q}") });
    }
    Ok(())
}

/// Whether `z ∈ [-q, -1/q] ∪ [1/q, q]` (ignoring the excluded point `z = 1`).
pub fn in_domain(q: u64, z: &Rational) -> bool {
    let qr = Rational::from(q as i64);
    let inv = Rational::new(1, q).expect("q > 0");
    let a = z.abs();
    inv <= a && a <= qr
}

/// Whether points outside the extension domain are admitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DomainPolicy {
    #[default]
    Enforce,
    AllowOutside,
}

/// A validated parameter `z` for `π_z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterPoint {
    q: u64,
    z: Rational,
}

impl CharacterPoint {
    pub fn new(q: u64, z: Rational, policy: DomainPolicy) -> Result<Self> {
        ensure_prime(q)?;
        if z.is_zero() || z.is_one() {
            return Err(Error::SingularParameter(z.to_string()));
        }
        if policy == DomainPolicy::Enforce && !in_domain(q, &z) {
            return Err(Error::OutsideDomain(z.to_string()));
        }
        Ok(CharacterPoint { q, z })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn z(&self) -> &Rational {
        &self.z
    }

    pub fn admissible(&self) -> bool {
        in_domain(self.q, &self.z)
    }
}

/// `π_z(p·x_m·p)`.
pub fn phi(q: u64, z: &Rational, m: u32) -> Result<Rational> {
    ensure_prime(q)?;
    if z.is_zero() || z.is_one() {
        return Err(Error::SingularParameter(z.to_string()));
    }
    let qr = Rational::from(q as i64);
    let one = Rational::one();
    let denom = (&qr + &one) * (&one - z);
    let first = (&one - &(&qr * z)) / &denom * (z / &qr).pow(m as i64);
    let second = (&qr - z) / &denom * (&qr * z).pow(-(m as i64));
    Ok(first + second)
}

/// `π_z(h) = Σ_m h_m · L(x_m) · phi(q, z, m)`, with `L` from coset enumeration.
pub fn character_eval(h: &Hecke<Sl2>, point: &CharacterPoint, elem: &SphericalElement) -> Result<Rational> {
    check_q(h, point.q)?;
    check_q(h, elem.q)?;
    let mut total = Rational::zero();
    for (m, c) in elem.terms() {
        let d = h.canonical_double_coset(&h.backend().x(m as i64))?;
        let l = Rational::from(h.left_count(&d)? as i64);
        total += &(c * &l * phi(point.q, &point.z, m)?);
    }
    Ok(total)
}

/// `1_Γ + Σ_{k=0}^{q-1} 1_{y_kΓ}`.
pub fn counterexample_element(h: &Hecke<Sl2>) -> Result<CosetFunction<Sl2Element>> {
    let s = h.backend();
    let mut f = h.indicator(&s.identity())?;
    for k in 0..s.q() as i64 {
        f = f.add(&h.indicator(&s.y(k))?)?;
    }
    Ok(f)
}

/// The default scan grid: `±k` for `1 ≤ k ≤ q` and `±1/k` for `2 ≤ k ≤ q`,
/// without the singular point `z = 1`. Sorted ascending.
pub fn default_grid(q: u64) -> Vec<Rational> {
    let mut zs = vec![];
    for k in 1..=q as i64 {
        zs.push(Rational::from(k));
        zs.push(Rational::from(-k));
        if k >= 2 {
            let r = Rational::new(1, k).expect("k > 0");
            zs.push(-&r);
            zs.push(r);
        }
    }
    zs.retain(|z| !z.is_one());
    zs.sort();
    zs
}

/// Exact witness that `π_z(⟨f, f⟩_R) < 0` for an admissible `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityCertificate {
    pub q: u64,
    pub z: Rational,
    pub h: SphericalElement,
    pub value: Rational,
    pub input_f: CosetFunction<Sl2Element>,
}

impl PositivityCertificate {
    pub fn to_json(&self, h: &Hecke<Sl2>) -> Value {
        json!({
            "q": self.q,
            "z": self.z.to_string(),
            "h": self.h.to_json(),
            "value": self.value.to_string(),
            "input_f": coset_function_to_json(h, &self.input_f),
            "conclusion": "not_R_positive",
        })
    }

    /// Recomputes `⟨f, f⟩_R` and `π_z` of it from scratch.
    pub fn revalidate(&self, h: &Hecke<Sl2>) -> Result<bool> {
        let fresh = Hecke::with_budget(Sl2::new(self.q)?, h.budget());
        let inner = fresh.r_inner(&self.input_f, &self.input_f)?;
        let elem = SphericalElement::from_hecke(&fresh, &inner)?;
        let point = CharacterPoint::new(self.q, self.z.clone(), DomainPolicy::Enforce)?;
        let value = character_eval(&fresh, &point, &elem)?;
        Ok(elem == self.h && value == self.value && value.is_negative())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub z: Rational,
    pub value: Rational,
    /// False for points admitted only by [`DomainPolicy::AllowOutside`];
    /// their values are informational and never yield a certificate.
    pub admissible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub q: u64,
    pub h: SphericalElement,
    pub rows: Vec<ScanRow>,
    pub certificate: Option<PositivityCertificate>,
}

impl ScanReport {
    pub fn to_json(&self, h: &Hecke<Sl2>) -> Value {
        json!({
            "q": self.q,
            "h": self.h.to_json(),
            "rows": self.rows.iter().map(|r| json!({
                "z": r.z.to_string(),
                "value": r.value.to_string(),
                "admissible": r.admissible,
            })).collect::<Vec<_>>(),
            "certificate": self.certificate.as_ref().map(|c| c.to_json(h)),
        })
    }
}

/// Evaluates `π_z(⟨f, f⟩_R)` at every `z` and returns the first admissible
/// negative value as a certificate.
pub fn scan_positivity(
    h: &Hecke<Sl2>,
    f: &CosetFunction<Sl2Element>,
    zs: &[Rational],
    policy: DomainPolicy,
) -> Result<ScanReport> {
    let q = h.backend().q();
    let points = zs
        .iter()
        .map(|z| CharacterPoint::new(q, z.clone(), policy))
        .collect::<Result<Vec<_>>>()?;
    let inner = h.r_inner(f, f)?;
    let elem = SphericalElement::from_hecke(h, &inner)?;
    let values = points
        .par_iter()
        .map(|p| character_eval(h, p, &elem))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<ScanRow> = points
        .iter()
        .zip(values)
        .map(|(p, value)| ScanRow { z: p.z.clone(), value, admissible: p.admissible() })
        .collect();
    let certificate = rows
        .iter()
        .find(|r| r.admissible && r.value.is_negative())
        .map(|r| PositivityCertificate {
            q,
            z: r.z.clone(),
            h: elem.clone(),
            value: r.value.clone(),
            input_f: f.clone(),
        });
    Ok(ScanReport { q, h: elem, rows, certificate })
}
