//! Seeded randomized property suites over every backend.
//!
//! Each property draws from its own ChaCha8 stream derived from the run seed
//! and the property name, so results do not depend on scheduling. A failure
//! reports the trial number and the offending inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{HeckeElement, L1Norm};
use crate::backends::{Dihedral, DihedralElement, Dyadic, DyadicElement, FinitePair, Perm, Sl2, Sl2Element};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::growth::CosetSet;
use crate::pair::{DoubleCoset, Hecke, HeckePair};
use crate::scalar::{GaussianRational, Rational};
use crate::spherical::{
    character_eval, counterexample_element, phi, scan_positivity, CharacterPoint, DomainPolicy, SphericalElement,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Core,
    Algebra,
    Spherical,
    Growth,
    All,
}

impl Suite {
    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Algebra => "algebra",
            Suite::Spherical => "spherical",
            Suite::Growth => "growth",
            Suite::All => "all",
        }
    }

    fn includes(&self, other: Suite) -> bool {
        *self == Suite::All || *self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "core" => Suite::Core,
            "algebra" => Suite::Algebra,
            "spherical" => Suite::Spherical,
            "growth" => Suite::Growth,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyResult {
    pub suite: Suite,
    pub name: &'static str,
    pub trials: usize,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.as_str(),
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed(),
            "properties": self.results.iter().map(|r| json!({
                "suite": r.suite.as_str(),
                "name": r.name,
                "trials": r.trials,
                "passed": r.passed,
                "failure": r.failure,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("# suite={} seed={} trials={}\n", self.suite, self.seed, self.trials);
        for r in &self.results {
            let status = if r.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {:<9} {} ({} trials)\n", r.suite.as_str(), r.name, r.trials));
            if let Some(f) = &r.failure {
                out.push_str(&format!("    {f}\n"));
            }
        }
        let failed = self.results.iter().filter(|r| !r.passed).count();
        out.push_str(&format!("{} properties, {} failed\n", self.results.len(), failed));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,name,trials,passed,failure\n");
        for r in &self.results {
            let failure = r.failure.as_deref().unwrap_or("").replace('"', "\"\"");
            out.push_str(&format!("{},{},{},{},\"{}\"\n", r.suite, r.name, r.trials, r.passed, failure));
        }
        out
    }
}

type Outcome = std::result::Result<(), String>;

/// Random sampling of elements for a backend. `depth` bounds how far from Γ
/// samples may land.
trait Sampler: HeckePair {
    fn sample(&self, rng: &mut ChaCha8Rng, depth: u32) -> Self::Elem;
    fn sample_gamma(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
}

impl Sampler for Dihedral {
    fn sample(&self, rng: &mut ChaCha8Rng, depth: u32) -> DihedralElement {
        let r = depth.max(1) as i64 * 2;
        DihedralElement { n: rng.gen_range(-r..=r), s: if rng.gen_bool(0.5) { 1 } else { -1 } }
    }

    fn sample_gamma(&self, rng: &mut ChaCha8Rng) -> DihedralElement {
        DihedralElement { n: 0, s: if rng.gen_bool(0.5) { 1 } else { -1 } }
    }
}

impl Sampler for Dyadic {
    fn sample(&self, rng: &mut ChaCha8Rng, depth: u32) -> DyadicElement {
        let r = depth.max(1) as i64;
        let b = Rational::new(rng.gen_range(-16i64..=16), 1i64 << rng.gen_range(0..=3)).expect("nonzero");
        DyadicElement { b, k: rng.gen_range(-r..=r) }
    }

    fn sample_gamma(&self, rng: &mut ChaCha8Rng) -> DyadicElement {
        DyadicElement { b: Rational::from(rng.gen_range(-6i64..=6)), k: 0 }
    }
}

impl Sampler for Sl2 {
    fn sample(&self, rng: &mut ChaCha8Rng, depth: u32) -> Sl2Element {
        let x1 = self.x(1);
        let t = Sl2Element::from_ints(1, 1, 0, 1);
        let mut middle = self.identity();
        // each step raises the double coset index by at most 1
        for _ in 0..rng.gen_range(0..=depth) {
            let step = match rng.gen_range(0..4) {
                0 => x1.clone(),
                1 => self.inv(&x1),
                2 => self.y(rng.gen_range(0..self.q() as i64)),
                _ => self.mul(&x1, &t),
            };
            middle = self.mul(&middle, &step);
            middle = self.mul(&middle, &self.sample_gamma(rng));
        }
        let g = self.sample_gamma(rng);
        self.mul(&g, &middle)
    }

    fn sample_gamma(&self, rng: &mut ChaCha8Rng) -> Sl2Element {
        let s = Sl2Element::from_ints(0, -1, 1, 0);
        let t = Sl2Element::from_ints(1, 1, 0, 1);
        let t_inv = Sl2Element::from_ints(1, -1, 0, 1);
        let mut g = self.identity();
        for _ in 0..rng.gen_range(0..=4) {
            let step = [&s, &t, &t_inv][rng.gen_range(0..3)];
            g = self.mul(&g, step);
        }
        g
    }
}

impl Sampler for FinitePair {
    fn sample(&self, rng: &mut ChaCha8Rng, _depth: u32) -> Perm {
        self.elements().choose(rng).expect("nonempty group").clone()
    }

    fn sample_gamma(&self, rng: &mut ChaCha8Rng) -> Perm {
        self.gamma_elements().choose(rng).expect("nonempty subgroup").clone()
    }
}

struct Reduction {
    pair: Hecke<FinitePair>,
    reduced: Hecke<FinitePair>,
    map: BTreeMap<Perm, Perm>,
}

/// Shared pairs; memo tables persist across trials and properties.
struct Worlds {
    dihedral: Hecke<Dihedral>,
    dyadic: Hecke<Dyadic>,
    sl2_2: Hecke<Sl2>,
    sl2_3: Hecke<Sl2>,
    finite: Vec<(&'static str, Reduction)>,
}

impl Worlds {
    fn new() -> Result<Self> {
        let finite = fixtures::all()
            .into_iter()
            .map(|(name, spec)| {
                let pair = FinitePair::load(spec)?;
                let (reduced, map) = pair.reduce_pair()?;
                Ok((
                    name,
                    Reduction { pair: Hecke::new(pair), reduced: Hecke::new(reduced), map: map.into_iter().collect() },
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Worlds {
            dihedral: Hecke::new(Dihedral),
            dyadic: Hecke::new(Dyadic),
            sl2_2: Hecke::new(Sl2::new(2)?),
            sl2_3: Hecke::new(Sl2::new(3)?),
            finite,
        })
    }

    fn sl2(&self, q: u64) -> &Hecke<Sl2> {
        if q == 2 {
            &self.sl2_2
        } else {
            &self.sl2_3
        }
    }

    fn sl2_for_prime(&self, q: u64) -> Result<Hecke<Sl2>> {
        Ok(Hecke::new(Sl2::new(q)?))
    }

    fn pick_finite(&self, rng: &mut ChaCha8Rng) -> &Reduction {
        &self.finite[rng.gen_range(0..self.finite.len())].1
    }
}

/// Runs a generic property on a backend chosen by the trial number.
/// SL₂ depth is kept small so products stay cheap.
macro_rules! on_some_backend {
    ($worlds:expr, $trial:expr, $rng:expr, $prop:ident $(, $arg:expr)*) => {
        match $trial % 5 {
            0 => $prop(&$worlds.dihedral, $rng, 3 $(, $arg)*),
            1 => $prop(&$worlds.dyadic, $rng, 2 $(, $arg)*),
            2 => $prop(&$worlds.sl2_2, $rng, 1 $(, $arg)*),
            3 => $prop(&$worlds.sl2_3, $rng, 1 $(, $arg)*),
            _ => {
                let r = $worlds.pick_finite($rng);
                $prop(&r.pair, $rng, 1 $(, $arg)*)
            }
        }
    };
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("error: {e}"))
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)).expect("nonzero")
}

fn small_complex(rng: &mut ChaCha8Rng) -> GaussianRational {
    if rng.gen_bool(0.4) {
        GaussianRational::real(small_rational(rng))
    } else {
        GaussianRational::new(small_rational(rng), small_rational(rng))
    }
}

/// Coefficients with rational modulus, so that norms are exact.
fn pythagorean(rng: &mut ChaCha8Rng) -> GaussianRational {
    let (a, b) = [(1, 0), (0, 1), (3, 4), (5, 12), (8, 15), (-4, 3)][rng.gen_range(0..6)];
    let r = Rational::new(rng.gen_range(1i64..=3), rng.gen_range(1i64..=2)).expect("nonzero");
    GaussianRational::new(Rational::from(a), Rational::from(b)).scale(&r)
}

fn random_element<B: Sampler>(
    h: &Hecke<B>,
    rng: &mut ChaCha8Rng,
    depth: u32,
    coeff: fn(&mut ChaCha8Rng) -> GaussianRational,
) -> HeckeElement<B::Elem> {
    // distinct cosets, so each coefficient is one draw of `coeff`
    let mut terms = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=3) {
        let d = h.double_of(&h.backend().sample(rng, depth));
        let c = coeff(rng);
        terms.entry(d).or_insert(c);
    }
    h.element(terms)
}

fn random_set<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> CosetSet<B::Elem> {
    h.coset_set((0..rng.gen_range(1..=2)).map(|_| h.double_of(&h.backend().sample(rng, depth))))
}

// ---- core ----

fn group_axioms<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let b = h.backend();
    let (x, y, z) = (b.sample(rng, depth), b.sample(rng, depth), b.sample(rng, depth));
    let e = b.identity();
    check(b.mul(&b.mul(&x, &y), &z) == b.mul(&x, &b.mul(&y, &z)), || format!("associativity fails for {x:?}, {y:?}, {z:?}"))?;
    check(b.mul(&x, &b.inv(&x)) == e && b.mul(&b.inv(&x), &x) == e, || format!("inverse fails for {x:?}"))?;
    check(b.mul(&e, &x) == x && b.mul(&x, &e) == x, || format!("identity fails for {x:?}"))?;
    let g = b.sample_gamma(rng);
    check(b.in_gamma(&g) && b.in_gamma(&b.inv(&g)), || format!("{g:?} should lie in Γ"))?;
    lift(b.validate(&x))
}

fn coset_invariance<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let b = h.backend();
    let g = b.sample(rng, depth);
    let (c1, c2) = (b.sample_gamma(rng), b.sample_gamma(rng));
    let moved = b.mul(&g, &c1);
    check(b.canonical_left(&moved) == b.canonical_left(&g), || format!("gΓ differs from gγΓ for g={g:?}, γ={c1:?}"))?;
    let both = b.mul(&c2, &moved);
    check(b.canonical_double(&both) == b.canonical_double(&g), || {
        format!("ΓgΓ changes under γ₁gγ₂ for g={g:?}, γ₁={c2:?}, γ₂={c1:?}")
    })?;
    let l = b.canonical_left(&g);
    check(b.canonical_left(&l) == l && b.canonical_double(&l) == b.canonical_double(&g), || {
        format!("canonical forms not idempotent at {g:?}")
    })
}

fn left_cosets_belong<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let d = h.double_of(&h.backend().sample(rng, depth));
    let cosets = lift(h.left_cosets_of(&d))?;
    for c in cosets.iter() {
        check(h.double_of_left(c) == d, || format!("left coset {:?} is not in {:?}", c.rep(), d.rep()))?;
        check(h.backend().canonical_left(c.rep()) == *c.rep(), || format!("{:?} not canonical", c.rep()))?;
    }
    Ok(())
}

fn l_equals_r_inverse<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let g = h.backend().sample(rng, depth);
    l_equals_r_at(h, &g)
}

fn l_equals_r_at<B: HeckePair>(h: &Hecke<B>, g: &B::Elem) -> Outcome {
    let inv = h.double_of(&h.backend().inv(g));
    let l_inv = lift(h.left_count(&inv))?;
    let r = lift(h.right_count_by_orbit(g))?;
    check(l_inv == r, || format!("L(g⁻¹) = {l_inv} but R(g) = {r} for g={g:?}"))
}

fn delta_homomorphism<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let b = h.backend();
    let (x, y) = (b.sample(rng, depth), b.sample(rng, depth));
    let dx = lift(h.delta(&h.double_of(&x)))?;
    let dy = lift(h.delta(&h.double_of(&y)))?;
    let dxy = lift(h.delta(&h.double_of(&b.mul(&x, &y))))?;
    check(dxy == &dx * &dy, || format!("Δ(xy) = {dxy} ≠ Δ(x)Δ(y) = {dx}·{dy} for x={x:?}, y={y:?}"))
}

// ---- algebra ----

fn associativity<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let f = random_element(h, rng, depth, small_complex);
    let g = random_element(h, rng, depth, small_complex);
    let k = random_element(h, rng, depth, small_complex);
    let left = lift(h.convolve(&lift(h.convolve(&f, &g))?, &k))?;
    let right = lift(h.convolve(&f, &lift(h.convolve(&g, &k))?))?;
    check(left == right, || format!("(fg)h ≠ f(gh) for f={f:?}, g={g:?}, h={k:?}"))?;
    let unit = h.unit();
    check(lift(h.convolve(&unit, &f))? == f && lift(h.convolve(&f, &unit))? == f, || format!("unit law fails for {f:?}"))
}

fn star_laws<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let f = random_element(h, rng, depth, small_complex);
    let g = random_element(h, rng, depth, small_complex);
    let fs = lift(h.star(&f))?;
    check(lift(h.star(&fs))? == f, || format!("f** ≠ f for f={f:?}"))?;
    let lhs = lift(h.star(&lift(h.convolve(&f, &g))?))?;
    let rhs = lift(h.convolve(&lift(h.star(&g))?, &fs))?;
    check(lhs == rhs, || format!("(fg)* ≠ g*f* for f={f:?}, g={g:?}"))?;
    let lambda = small_complex(rng);
    let combo = lift(f.scale(&lambda).add(&g))?;
    let expected = lift(fs.scale(&lambda.conj()).add(&lift(h.star(&g))?))?;
    check(lift(h.star(&combo))? == expected, || format!("star not conjugate-linear for λ={lambda}, f={f:?}, g={g:?}"))
}

fn norm_star_isometry<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let f = random_element(h, rng, depth, pythagorean);
    let n = lift(h.l1_norm(&f))?;
    let ns = lift(h.l1_norm(&lift(h.star(&f))?))?;
    check(n.is_exact() && n == ns, || format!("‖f*‖ = {ns:?} ≠ ‖f‖ = {n:?} for f={f:?}"))
}

fn norm_submultiplicative<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let real = |r: &mut ChaCha8Rng| GaussianRational::real(small_rational(r));
    let f = random_element(h, rng, depth, real);
    let g = random_element(h, rng, depth, real);
    let exact = |n: L1Norm| match n {
        L1Norm::Exact(v) => Ok(v),
        L1Norm::UpperBound(_) => Err("norm of a real element should be exact".to_string()),
    };
    let nfg = exact(lift(h.l1_norm(&lift(h.convolve(&f, &g))?))?)?;
    let nf = exact(lift(h.l1_norm(&f))?)?;
    let ng = exact(lift(h.l1_norm(&g))?)?;
    check(nfg <= &nf * &ng, || format!("‖fg‖ = {nfg} > ‖f‖‖g‖ = {} for f={f:?}, g={g:?}", &nf * &ng))
}

fn random_coset_terms<B: Sampler>(
    h: &Hecke<B>,
    rng: &mut ChaCha8Rng,
    depth: u32,
) -> Vec<(B::Elem, GaussianRational)> {
    let mut by_coset: BTreeMap<B::Elem, (B::Elem, GaussianRational)> = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=3) {
        let x = h.backend().sample(rng, depth);
        by_coset.entry(h.backend().canonical_left(&x)).or_insert((x, small_complex(rng)));
    }
    by_coset.into_values().collect()
}

fn rinner_representatives<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let f = random_coset_terms(h, rng, depth);
    let g = random_coset_terms(h, rng, depth);
    let b = h.backend();
    let shift = |terms: &[(B::Elem, GaussianRational)], rng: &mut ChaCha8Rng| -> Vec<_> {
        terms.iter().map(|(x, c)| (b.mul(x, &b.sample_gamma(rng)), c.clone())).collect()
    };
    let (f2, g2) = (shift(&f, rng), shift(&g, rng));
    let a = lift(h.r_inner_of_reps(&f, &g))?;
    let c = lift(h.r_inner_of_reps(&f2, &g2))?;
    check(a == c, || format!("⟨f,g⟩_R depends on representatives: {f:?} vs {f2:?}, {g:?} vs {g2:?}"))
}

fn rinner_adjoint<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let f = random_coset_terms(h, rng, depth);
    let g = random_coset_terms(h, rng, depth);
    let fg = lift(h.r_inner_of_reps(&f, &g))?;
    let gf = lift(h.r_inner_of_reps(&g, &f))?;
    check(lift(h.star(&fg))? == gf, || format!("⟨f,g⟩_R* ≠ ⟨g,f⟩_R for f={f:?}, g={g:?}"))
}

fn finite_oracle(w: &Worlds, rng: &mut ChaCha8Rng) -> Outcome {
    let r = w.pick_finite(rng);
    let f1 = random_element(&r.pair, rng, 1, small_complex);
    let f2 = random_element(&r.pair, rng, 1, small_complex);
    let report = lift(r.pair.group_algebra_oracle_check(&f1, &f2))?;
    check(report.passed(), || format!("{} for f1={f1:?}, f2={f2:?}", report.mismatches.join("; ")))
}

fn reduction_structure(w: &Worlds, rng: &mut ChaCha8Rng) -> Outcome {
    let r = w.pick_finite(rng);
    let b = r.pair.backend();
    let a = r.pair.double_of(&b.sample(rng, 1));
    let c = r.pair.double_of(&b.sample(rng, 1));
    let image = |d: &DoubleCoset<Perm>| r.reduced.double_of(&r.map[d.rep()]);
    let here = lift(r.pair.structure_constants(&a, &c))?;
    let there = lift(r.reduced.structure_constants(&image(&a), &image(&c)))?;
    let mapped: BTreeMap<_, _> = here.iter().map(|(d, n)| (image(d), *n)).collect();
    check(mapped == *there, || format!("structure constants differ after reduction for {:?}, {:?}", a.rep().0, c.rep().0))?;
    let (l, l2) = (lift(r.pair.left_count(&a))?, lift(r.reduced.left_count(&image(&a)))?);
    check(l == l2, || format!("L changes under reduction at {:?}: {l} vs {l2}", a.rep().0))
}

// ---- spherical ----

const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// A random rational `z` with `1/q ≤ |z| ≤ q`, `z ≠ 1`.
fn admissible_z(rng: &mut ChaCha8Rng, q: u64) -> Rational {
    loop {
        let d = rng.gen_range(1..=12i64);
        let lo = (d + q as i64 - 1) / q as i64;
        let n = rng.gen_range(lo..=d * q as i64);
        let z = Rational::new(if rng.gen_bool(0.5) { -n } else { n }, d).expect("nonzero");
        if !z.is_one() {
            return z;
        }
    }
}

fn phi_symmetry(rng: &mut ChaCha8Rng) -> Outcome {
    let q = *SMALL_PRIMES.choose(rng).expect("nonempty");
    let z = admissible_z(rng, q);
    let m = rng.gen_range(0..=6);
    let a = lift(phi(q, &z, m))?;
    let b = lift(phi(q, &z.recip().expect("z ≠ 0"), m))?;
    check(a == b, || format!("phi({q}, {z}, {m}) = {a} but phi at 1/z = {b}"))
}

fn multiplicativity(w: &Worlds, rng: &mut ChaCha8Rng) -> Outcome {
    let q = [2u64, 3][rng.gen_range(0..2)];
    let h = w.sl2(q);
    let (m, n) = (rng.gen_range(0..=2u32), rng.gen_range(0..=2u32));
    let point = lift(CharacterPoint::new(q, admissible_z(rng, q), DomainPolicy::Enforce))?;
    let em = lift(SphericalElement::basis(q, m))?;
    let en = lift(SphericalElement::basis(q, n))?;
    let product = lift(h.convolve(&lift(em.to_hecke(h))?, &lift(en.to_hecke(h))?))?;
    let product = lift(SphericalElement::from_hecke(h, &product))?;
    let lhs = lift(character_eval(h, &point, &product))?;
    let rhs = lift(character_eval(h, &point, &em))? * lift(character_eval(h, &point, &en))?;
    check(lhs == rhs, || format!("π_z(e_{m} e_{n}) = {lhs} ≠ {rhs} at q={q}, z={}", point.z()))
}

fn negativity(w: &Worlds, trial: usize) -> Outcome {
    let q = SMALL_PRIMES[trial % SMALL_PRIMES.len()];
    let owned;
    let h = if q <= 3 {
        w.sl2(q)
    } else {
        owned = lift(w.sl2_for_prime(q))?;
        &owned
    };
    let f = lift(counterexample_element(h))?;
    let qi = q as i64;
    let z = Rational::from(-qi);
    let report = lift(scan_positivity(h, &f, &[z], DomainPolicy::Enforce))?;
    let expected = Rational::from(qi + 1) - Rational::new(qi * qi * qi + qi + 2, qi + 1).expect("nonzero");
    let value = &report.rows[0].value;
    check(*value == expected && value.is_negative(), || format!("π_-q(⟨f,f⟩_R) = {value}, expected {expected} at q={q}"))?;
    let cert = report.certificate.ok_or_else(|| format!("no certificate at q={q}"))?;
    check(lift(cert.revalidate(h))?, || format!("certificate at q={q} does not revalidate"))
}

fn nonnegative_inside(w: &Worlds, rng: &mut ChaCha8Rng) -> Outcome {
    let q = [2u64, 3][rng.gen_range(0..2)];
    let h = w.sl2(q);
    let z = admissible_z(rng, q).abs();
    if z.is_one() {
        return Ok(());
    }
    let f = lift(counterexample_element(h))?;
    let report = lift(scan_positivity(h, &f, &[z.clone()], DomainPolicy::Enforce))?;
    let v = &report.rows[0].value;
    check(!v.is_negative(), || format!("π_z(⟨f,f⟩_R) = {v} < 0 at q={q}, z={z}"))
}

// ---- growth ----

fn set_product_associative<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let (a, b, c) = (random_set(h, rng, depth), random_set(h, rng, depth), random_set(h, rng, depth));
    let left = lift(h.set_product(&lift(h.set_product(&a, &b))?, &c))?;
    let right = lift(h.set_product(&a, &lift(h.set_product(&b, &c))?))?;
    check(left == right, || format!("(AB)C ≠ A(BC) for A={a:?}, B={b:?}, C={c:?}"))
}

fn monotone_with_identity<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let a = random_set(h, rng, depth);
    let a = h.coset_set(a.members().cloned().chain([h.identity_coset()]));
    let mut power = a.clone();
    for n in 1..=2 {
        let next = lift(h.set_product(&a, &power))?;
        check(power.is_subset(&next), || format!("A^{} ⊄ A^{n} for A={a:?}", n - 1))?;
        power = next;
    }
    Ok(())
}

fn l_submultiplicative<B: Sampler>(h: &Hecke<B>, rng: &mut ChaCha8Rng, depth: u32) -> Outcome {
    let (a, b) = (random_set(h, rng, depth), random_set(h, rng, depth));
    let lab = lift(h.total_l(&lift(h.set_product(&a, &b))?))?;
    let (la, lb) = (lift(h.total_l(&a))?, lift(h.total_l(&b))?);
    check(lab <= la * lb, || format!("L(AB) = {lab} > L(A)L(B) = {} for A={a:?}, B={b:?}", la * lb))
}

fn reduced_growth(w: &Worlds, rng: &mut ChaCha8Rng) -> Outcome {
    let r = w.pick_finite(rng);
    let a = random_set(&r.pair, rng, 1);
    let image = r.reduced.coset_set(a.members().map(|d| r.reduced.double_of(&r.map[d.rep()])));
    let here = lift(r.pair.growth_sequence(&a, 3))?;
    let there = lift(r.reduced.growth_sequence(&image, 3))?;
    let shape = |g: &crate::growth::GrowthReport| g.rows.iter().map(|x| (x.size, x.l)).collect::<Vec<_>>();
    check(shape(&here) == shape(&there), || format!("growth differs after reduction for A={a:?}"))
}

type PropFn = fn(&Worlds, &mut ChaCha8Rng, usize) -> Outcome;

macro_rules! generic {
    ($prop:ident) => {
        (|w: &Worlds, rng: &mut ChaCha8Rng, t: usize| on_some_backend!(w, t, rng, $prop)) as PropFn
    };
}

fn registry() -> Vec<(Suite, &'static str, PropFn)> {
    vec![
        (Suite::Core, "group_axioms", generic!(group_axioms)),
        (Suite::Core, "coset_invariance", generic!(coset_invariance)),
        (Suite::Core, "left_cosets_belong", generic!(left_cosets_belong)),
        (Suite::Core, "l_equals_r_inverse", generic!(l_equals_r_inverse)),
        (Suite::Core, "finite_l_equals_r_all_double_cosets", |w, rng, _| {
            let r = w.pick_finite(rng);
            r.pair.backend().double_cosets().iter().try_for_each(|d| l_equals_r_at(&r.pair, d))
        }),
        (Suite::Core, "delta_homomorphism", generic!(delta_homomorphism)),
        (Suite::Algebra, "associativity", generic!(associativity)),
        (Suite::Algebra, "star_involution_laws", generic!(star_laws)),
        (Suite::Algebra, "norm_star_isometry", generic!(norm_star_isometry)),
        (Suite::Algebra, "norm_submultiplicative", generic!(norm_submultiplicative)),
        (Suite::Algebra, "rinner_representative_independence", generic!(rinner_representatives)),
        (Suite::Algebra, "rinner_adjoint", generic!(rinner_adjoint)),
        (Suite::Algebra, "finite_group_algebra_oracle", |w, rng, _| finite_oracle(w, rng)),
        (Suite::Algebra, "reduction_structure_constants", |w, rng, _| reduction_structure(w, rng)),
        (Suite::Spherical, "phi_inversion_symmetry", |_, rng, _| phi_symmetry(rng)),
        (Suite::Spherical, "character_multiplicativity", |w, rng, _| multiplicativity(w, rng)),
        (Suite::Spherical, "negativity_q_le_13", |w, _, t| negativity(w, t)),
        (Suite::Spherical, "nonnegative_on_positive_domain", |w, rng, _| nonnegative_inside(w, rng)),
        (Suite::Growth, "set_product_associativity", generic!(set_product_associative)),
        (Suite::Growth, "monotone_with_identity", generic!(monotone_with_identity)),
        (Suite::Growth, "l_submultiplicative", generic!(l_submultiplicative)),
        (Suite::Growth, "reduced_pair_growth", |w, rng, _| reduced_growth(w, rng)),
    ]
}

fn stream_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a, stable across platforms and releases
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h
}

/// Runs every property of `suite` for `trials` trials each.
pub fn run(suite: Suite, trials: usize, seed: u64) -> Result<VerifyReport> {
    let worlds = Worlds::new()?;
    let props: Vec<_> = registry().into_iter().filter(|(s, _, _)| suite.includes(*s)).collect();
    let results = props
        .par_iter()
        .map(|(s, name, prop)| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, name));
            let failure = (0..trials).find_map(|t| prop(&worlds, &mut rng, t).err().map(|e| format!("trial {t}: {e}")));
            PropertyResult { suite: *s, name, trials, passed: failure.is_none(), failure }
        })
        .collect();
    Ok(VerifyReport { suite, seed, trials, results })
}

/// Names of the properties in `suite`, in run order.
pub fn property_names(suite: Suite) -> Vec<&'static str> {
    registry().into_iter().filter(|(s, _, _)| suite.includes(*s)).map(|(_, n, _)| n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        for s in ["core", "algebra", "spherical", "growth", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().as_str(), s);
        }
        assert!("nope".parse::<Suite>().unwrap_err().is_parse());
        assert!(property_names(Suite::Spherical).contains(&"negativity_q_le_13"));
        assert_eq!(property_names(Suite::All).len(), registry().len());
    }

    #[test]
    fn short_run_passes_and_is_deterministic() {
        let a = run(Suite::All, 10, 7).unwrap();
        assert!(a.passed(), "{}", a.to_table());
        let b = run(Suite::All, 10, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_table(), b.to_table());
    }

    #[test]
    fn failures_carry_inputs() {
        let w = Worlds::new().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bad: Outcome = check(false, || "x".into());
        assert_eq!(bad, Err("x".into()));
        assert!(finite_oracle(&w, &mut rng).is_ok());
    }
}
