//! Built-in finite pairs used by the oracle suites and tests.

use crate::backends::finite::{FinitePairSpec, Perm};

fn p(v: &[u32]) -> Perm {
    Perm(v.to_vec())
}

/// `S₃` with Γ generated by the transposition `(0 1)`.
pub fn s3_transposition() -> FinitePairSpec {
    FinitePairSpec {
        n: 3,
        group_gens: vec![p(&[1, 0, 2]), p(&[1, 2, 0])],
        subgroup_gens: vec![p(&[1, 0, 2])],
    }
}

/// `S₃` with Γ = `A₃`.
pub fn s3_a3() -> FinitePairSpec {
    FinitePairSpec {
        n: 3,
        group_gens: vec![p(&[1, 0, 2]), p(&[1, 2, 0])],
        subgroup_gens: vec![p(&[1, 2, 0])],
    }
}

/// `S₄` with Γ the point stabilizer `S₃`.
pub fn s4_s3() -> FinitePairSpec {
    FinitePairSpec {
        n: 4,
        group_gens: vec![p(&[1, 0, 2, 3]), p(&[1, 2, 3, 0])],
        subgroup_gens: vec![p(&[1, 0, 2, 3]), p(&[1, 2, 0, 3])],
    }
}

/// `S₄` with Γ a dihedral subgroup of order 8; the core is the Klein group.
pub fn s4_d4() -> FinitePairSpec {
    FinitePairSpec {
        n: 4,
        group_gens: vec![p(&[1, 0, 2, 3]), p(&[1, 2, 3, 0])],
        subgroup_gens: vec![p(&[1, 2, 3, 0]), p(&[2, 1, 0, 3])],
    }
}

/// `D₅` acting on a pentagon with Γ generated by one reflection.
pub fn d5_reflection() -> FinitePairSpec {
    FinitePairSpec {
        n: 5,
        group_gens: vec![p(&[1, 2, 3, 4, 0]), p(&[0, 4, 3, 2, 1])],
        subgroup_gens: vec![p(&[0, 4, 3, 2, 1])],
    }
}

/// `A₄` with Γ a cyclic subgroup of order 3.
pub fn a4_c3() -> FinitePairSpec {
    FinitePairSpec {
        n: 4,
        group_gens: vec![p(&[1, 2, 0, 3]), p(&[1, 0, 3, 2])],
        subgroup_gens: vec![p(&[1, 2, 0, 3])],
    }
}

/// `S₄` with Γ = `⟨(0 1)(2 3)⟩`.
pub fn s4_double_transposition() -> FinitePairSpec {
    FinitePairSpec {
        n: 4,
        group_gens: vec![p(&[1, 0, 2, 3]), p(&[1, 2, 3, 0])],
        subgroup_gens: vec![p(&[1, 0, 3, 2])],
    }
}

/// All built-in fixtures with short names.
pub fn all() -> Vec<(&'static str, FinitePairSpec)> {
    vec![
        ("s3_transposition", s3_transposition()),
        ("s3_a3", s3_a3()),
        ("s4_s3", s4_s3()),
        ("s4_d4", s4_d4()),
        ("d5_reflection", d5_reflection()),
        ("a4_c3", a4_c3()),
        ("s4_double_transposition", s4_double_transposition()),
    ]
}
