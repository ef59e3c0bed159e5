//! Finite permutation groups with brute-force coset tables.
//!
//! These pairs exist to serve as oracles: everything is precomputed at load
//! time, so the group order is capped (default 10⁴).

use std::collections::{HashMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::pair::HeckePair;

pub const DEFAULT_ORDER_BUDGET: usize = 10_000;

/// One-line notation, 0-based: `p[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u32;
        }
        Perm(out)
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::Malformed(format!(
                "permutation {:?} has length {}, expected {n}",
                self.0,
                self.0.len()
            )));
        }
        let mut seen = vec![false; n];
        for &j in &self.0 {
            let j = j as usize;
            if j >= n || seen[j] {
                return Err(Error::Malformed(format!("{:?} is not a permutation", self.0)));
            }
            seen[j] = true;
        }
        Ok(())
    }
}

/// On-disk description of a finite pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePairSpec {
    pub n: usize,
    pub group_gens: Vec<Perm>,
    pub subgroup_gens: Vec<Perm>,
}

impl FinitePairSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }
}

#[derive(Clone, Debug)]
pub struct FinitePair {
    name: String,
    spec: FinitePairSpec,
    /// Sorted, so the index order is the lexicographic order on permutations.
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    gamma: Vec<usize>,
    left_rep: Vec<usize>,
    double_rep: Vec<usize>,
    /// Double coset rep -> sorted left coset reps.
    left_cosets: HashMap<usize, Vec<usize>>,
}

fn closure(n: usize, gens: &[Perm], budget: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(n);
    let mut seen: HashMap<Perm, ()> = HashMap::from([(id.clone(), ())]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = x.compose(s);
            if !seen.contains_key(&y) {
                if seen.len() >= budget {
                    return Err(Error::InvalidPair(format!("group order exceeds budget {budget}")));
                }
                seen.insert(y.clone(), ());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_keys().collect();
    out.sort();
    Ok(out)
}

impl FinitePair {
    pub fn load(spec: FinitePairSpec) -> Result<Self> {
        Self::load_with_budget(spec, DEFAULT_ORDER_BUDGET)
    }

    pub fn load_with_budget(spec: FinitePairSpec, budget: usize) -> Result<Self> {
        if spec.n == 0 {
            return Err(Error::InvalidPair("n must be positive".into()));
        }
        for p in spec.group_gens.iter().chain(&spec.subgroup_gens) {
            p.check(spec.n)?;
        }
        let elements = closure(spec.n, &spec.group_gens, budget)?;
        let index: HashMap<Perm, usize> =
            elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        for s in &spec.subgroup_gens {
            if !index.contains_key(s) {
                return Err(Error::InvalidPair(format!(
                    "subgroup generator {:?} is not in the group",
                    s.0
                )));
            }
        }
        let mut gamma: Vec<usize> =
            closure(spec.n, &spec.subgroup_gens, budget)?.iter().map(|p| index[p]).collect();
        gamma.sort_unstable();

        let order = elements.len();
        let mul = |i: usize, j: usize| index[&elements[i].compose(&elements[j])];

        let mut left_rep = vec![usize::MAX; order];
        for g in 0..order {
            if left_rep[g] != usize::MAX {
                continue;
            }
            // g is the smallest index in its coset since we scan upwards
            for &c in &gamma {
                left_rep[mul(g, c)] = g;
            }
        }
        let mut double_rep = vec![usize::MAX; order];
        let mut left_cosets: HashMap<usize, Vec<usize>> = HashMap::new();
        for g in 0..order {
            if double_rep[g] != usize::MAX {
                continue;
            }
            let mut reps = vec![];
            for &c in &gamma {
                let h = left_rep[mul(c, g)];
                if double_rep[h] == usize::MAX {
                    reps.push(h);
                    for &c2 in &gamma {
                        double_rep[mul(h, c2)] = g;
                    }
                }
            }
            reps.sort_unstable();
            left_cosets.insert(g, reps);
        }

        let name = format!(
            "finite:n={}:G={:?}:H={:?}",
            spec.n,
            spec.group_gens.iter().map(|p| &p.0).collect::<Vec<_>>(),
            spec.subgroup_gens.iter().map(|p| &p.0).collect::<Vec<_>>()
        );
        Ok(FinitePair { name, spec, elements, index, gamma, left_rep, double_rep, left_cosets })
    }

    pub fn spec(&self) -> &FinitePairSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn gamma_order(&self) -> usize {
        self.gamma.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn gamma_elements(&self) -> Vec<Perm> {
        self.gamma.iter().map(|&i| self.elements[i].clone()).collect()
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Canonical reps of all double cosets, sorted.
    pub fn double_cosets(&self) -> Vec<Perm> {
        let mut reps: Vec<usize> = self.left_cosets.keys().copied().collect();
        reps.sort_unstable();
        reps.into_iter().map(|i| self.elements[i].clone()).collect()
    }

    /// Left coset reps of the whole group, sorted.
    pub fn all_left_cosets(&self) -> Vec<Perm> {
        let mut reps: Vec<usize> = self.left_rep.iter().copied().collect();
        reps.sort_unstable();
        reps.dedup();
        reps.into_iter().map(|i| self.elements[i].clone()).collect()
    }

    /// The normal core `⋂_g gΓg⁻¹`, as a sorted element list.
    pub fn core_subgroup(&self) -> Vec<Perm> {
        self.gamma
            .iter()
            .map(|&c| &self.elements[c])
            .filter(|c| {
                self.elements.iter().all(|g| {
                    let conj = g.inverse().compose(c).compose(g);
                    self.gamma.binary_search(&self.index[&conj]).is_ok()
                })
            })
            .cloned()
            .collect()
    }

    /// The reduction `(G/R^Γ, Γ/R^Γ)` and the induced double coset map.
    ///
    /// `G/R^Γ` is realised as the image of `G` acting on `G/Γ` by left
    /// multiplication, whose kernel is exactly the core. A pair whose core is
    /// already trivial is returned unchanged with the identity map.
    pub fn reduce_pair(&self) -> Result<(FinitePair, Vec<(Perm, Perm)>)> {
        if self.core_subgroup().len() == 1 {
            let ident = self.double_cosets().into_iter().map(|d| (d.clone(), d)).collect();
            return Ok((self.clone(), ident));
        }
        let cosets = self.all_left_cosets();
        let position: HashMap<usize, u32> = cosets
            .iter()
            .enumerate()
            .map(|(i, p)| (self.index[p], i as u32))
            .collect();
        let act = |g: &Perm| -> Perm {
            Perm(
                cosets
                    .iter()
                    .map(|h| position[&self.left_rep[self.index[&g.compose(h)]]])
                    .collect(),
            )
        };
        let spec = FinitePairSpec {
            n: cosets.len(),
            group_gens: self.spec.group_gens.iter().map(act).collect(),
            subgroup_gens: self.spec.subgroup_gens.iter().map(act).collect(),
        };
        let reduced = FinitePair::load_with_budget(spec, self.elements.len().max(1))?;
        let map = self
            .double_cosets()
            .into_iter()
            .map(|d| {
                let image = reduced.canonical_double(&act(&d));
                (d, image)
            })
            .collect();
        Ok((reduced, map))
    }

    fn idx(&self, p: &Perm) -> usize {
        *self.index.get(p).unwrap_or_else(|| panic!("{:?} is not in the group", p.0))
    }
}

impl HeckePair for FinitePair {
    type Elem = Perm;

    fn id(&self) -> String {
        self.name.clone()
    }

    fn identity(&self) -> Perm {
        Perm::identity(self.spec.n)
    }

    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        a.compose(b)
    }

    fn inv(&self, a: &Perm) -> Perm {
        a.inverse()
    }

    fn validate(&self, g: &Perm) -> Result<()> {
        g.check(self.spec.n)?;
        if !self.index.contains_key(g) {
            return Err(Error::Malformed(format!("{:?} is not in the group", g.0)));
        }
        Ok(())
    }

    fn in_gamma(&self, g: &Perm) -> bool {
        self.index
            .get(g)
            .is_some_and(|i| self.gamma.binary_search(i).is_ok())
    }

    fn gamma_generators(&self) -> Vec<Perm> {
        self.spec.subgroup_gens.clone()
    }

    fn canonical_left(&self, g: &Perm) -> Perm {
        self.elements[self.left_rep[self.idx(g)]].clone()
    }

    fn canonical_double(&self, g: &Perm) -> Perm {
        self.elements[self.double_rep[self.idx(g)]].clone()
    }

    fn enumerate_left_cosets(&self, d: &Perm, budget: usize) -> Result<Vec<Perm>> {
        let reps = &self.left_cosets[&self.double_rep[self.idx(d)]];
        if reps.len() > budget {
            return Err(Error::BudgetExceeded { limit: budget });
        }
        Ok(reps.iter().map(|&i| self.elements[i].clone()).collect())
    }

    fn elem_to_json(&self, g: &Perm) -> Value {
        serde_json::to_value(g).expect("permutation serializes")
    }

    fn elem_from_json(&self, v: &Value) -> Result<Perm> {
        let p: Perm = serde_json::from_value(v.clone())
            .map_err(|e| Error::Parse(format!("permutation: {e}")))?;
        self.validate(&p)?;
        Ok(p)
    }
}
