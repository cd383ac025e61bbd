//! Exact root-of-unity arithmetic and diagonal braidings.
//!
//! A braiding value `q^e` for `q` a primitive `ell`-th root of unity is the
//! residue `e mod ell`; all checks (vanishing of quantum integers, orders of
//! entries, standard-form recognition) reduce to residue arithmetic. The
//! generalized Cartan matrix of a diagonal braiding has `a_ij = -m_ij` where
//! `m_ij` is the least `m` such that `(m+1)_{q_ii} (q_ii^m q_ij q_ji - 1)`
//! vanishes; `(m+1)_q = 0` exactly when `q != 1` and `q^{m+1} = 1`.

use serde::Serialize;

use crate::datum::{build_datum, num_integer_gcd, num_integer_lcm, CartanDatum, Gcm, RootVec, TypeLabel};
use crate::{Error, Result};

/// A root-of-unity value `q^e`, stored as the residue `e` modulo `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct UnityExp {
    pub ell: i64,
    pub e: i64,
}

impl UnityExp {
    pub fn new(ell: i64, e: i64) -> Self {
        assert!(ell >= 1);
        UnityExp {
            ell,
            e: e.rem_euclid(ell),
        }
    }

    /// Is the value equal to 1?
    pub fn is_one(&self) -> bool {
        self.e == 0
    }

    /// Multiplicative order of `q^e`.
    pub fn order(&self) -> i64 {
        self.ell / num_integer_gcd(self.ell, self.e)
    }
}

impl std::fmt::Display for UnityExp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "q^{}", self.e)
    }
}

/// `ell_α = ell / gcd(ell, (α,α))`: the order of `q^{(α,α)}`. Equal to 1
/// exactly when `ell | (α,α)`, i.e. when the root vector degenerates.
pub fn ell_alpha(ell: i64, norm: i64) -> i64 {
    ell / num_integer_gcd(ell, norm)
}

/// Braiding matrix of a degree list: `exps[i][j] = (β_i, β_j) mod ell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraidingMat {
    pub ell: i64,
    pub degrees: Vec<RootVec>,
    pub exps: Vec<Vec<i64>>,
}

impl BraidingMat {
    pub fn size(&self) -> usize {
        self.degrees.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> UnityExp {
        UnityExp::new(self.ell, self.exps[i][j])
    }
}

/// Compute the braiding matrix of a nonempty degree list.
pub fn braiding_matrix(datum: &CartanDatum, degrees: &[RootVec], ell: i64) -> Result<BraidingMat> {
    if degrees.is_empty() {
        return Err(Error::Unsupported("empty degree list".into()));
    }
    let n = degrees.len();
    let mut exps = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            exps[i][j] = datum.pairing(&degrees[i], &degrees[j]).rem_euclid(ell);
        }
    }
    Ok(BraidingMat {
        ell,
        degrees: degrees.to_vec(),
        exps,
    })
}

/// Generalized Cartan matrix of a diagonal braiding.
///
/// `m_ij` is the least `m >= 0` with either `ord(q_ii) > 1` and
/// `ord(q_ii) | m+1`, or `m·e_ii + e_ij + e_ji ≡ 0 (mod ell)`. The search is
/// bounded by `lcm(ord(q_ii), ell)`; when no `m` in range works the Cartan
/// entry is unbounded and an error is returned.
pub fn heckenberger_gcm(b: &BraidingMat) -> Result<Gcm> {
    let n = b.size();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        let qii = b.entry(i, i);
        let ord = qii.order();
        for j in 0..n {
            if i == j {
                continue;
            }
            let bound = num_integer_lcm(ord.max(1), b.ell);
            let mut found = None;
            for m in 0..=bound {
                let quantum_int_vanishes = ord > 1 && (m + 1) % ord == 0;
                let power_one = (m * b.exps[i][i] + b.exps[i][j] + b.exps[j][i]) % b.ell == 0;
                if quantum_int_vanishes || power_one {
                    found = Some(m);
                    break;
                }
            }
            match found {
                Some(m) => a[i][j] = -m,
                None => return Err(Error::NoFiniteCartanEntry { i, j }),
            }
        }
    }
    // m = 0 is decided by e_ij + e_ji alone, so the zero pattern is
    // automatically symmetric.
    for i in 0..n {
        for j in 0..n {
            debug_assert_eq!((a[i][j] == 0), (a[j][i] == 0));
        }
    }
    Gcm::new(a)
}

/// Search for a residue `u` and an index matching such that the braiding is
/// the standard braiding `q_ij = (q^u)^{(α_i,α_j)}` of the candidate type.
///
/// Returns the first `u` found (u = ell-1 encodes q̄, u = 1 + ell/2 encodes
/// -q for even ell), or None when the braiding is at best twist-equivalent
/// to the standard one. Exhaustive over index permutations; the callers only
/// use degree lists of at most six entries.
pub fn standard_braiding_parameter(b: &BraidingMat, candidate: TypeLabel) -> Result<Option<i64>> {
    let datum = build_datum(candidate)?;
    if datum.size != b.size() {
        return Err(Error::Unsupported(format!(
            "candidate {candidate} has {} nodes, braiding has {}",
            datum.size,
            b.size()
        )));
    }
    if b.size() > 8 {
        return Err(Error::Unsupported(
            "standard-form search limited to 8 degrees".into(),
        ));
    }
    let n = b.size();
    let mut perm: Vec<usize> = (0..n).collect();
    // u = 0 (q' = 1) is never a meaningful standard parameter; try it last.
    let mut us: Vec<i64> = (1..b.ell).collect();
    us.push(0);
    for &u in &us {
        if permutations_match(&mut perm, 0, &mut |p| {
            (0..n).all(|i| {
                (0..n).all(|j| {
                    (u * datum.form[i][j] - b.exps[p[i]][p[j]]).rem_euclid(b.ell) == 0
                })
            })
        }) {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Heap-style permutation walk; calls `check` on each permutation and stops
/// early on success.
fn permutations_match(
    perm: &mut Vec<usize>,
    k: usize,
    check: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let n = perm.len();
    if k == n {
        return check(perm);
    }
    for i in k..n {
        perm.swap(k, i);
        if permutations_match(perm, k + 1, check) {
            return true;
        }
        perm.swap(k, i);
    }
    false
}

/// Outcome of the non-degeneracy condition at a given ell.
#[derive(Debug, Clone, Serialize)]
pub struct LusztigCondition {
    /// For all i ≠ j with ell_{α_j} >= 2: ell_{α_i} >= -a_ij + 1.
    pub cond_a: bool,
    /// Pairs (i, j) violating the inequality.
    pub violations: Vec<(usize, usize)>,
    /// The diagram has no odd cycle, i.e. the type is not A_n~1 with n even.
    pub cond_b_no_odd_cycle: bool,
}

pub fn lusztig_condition(datum: &CartanDatum, ell: i64) -> LusztigCondition {
    let n = datum.size;
    let ells: Vec<i64> = (0..n).map(|i| ell_alpha(ell, datum.form[i][i])).collect();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || ells[j] < 2 {
                continue;
            }
            if ells[i] < -datum.cartan[i][j] + 1 {
                violations.push((i, j));
            }
        }
    }
    let cond_b = !(datum.label.family == crate::datum::Family::A
        && datum.label.twist == crate::datum::Twist::One
        && datum.label.rank_param.is_multiple_of(2));
    LusztigCondition {
        cond_a: violations.is_empty(),
        violations,
        cond_b_no_odd_cycle: cond_b,
    }
}

/// Hypothesis under which the braided commutator of primitive elements in
/// degrees α, β is again primitive: `ell | 2(α,β)`, i.e. `q^{(α,β)} = ±1`.
pub fn commutator_primitive(ell: i64, alpha: &RootVec, beta: &RootVec, datum: &CartanDatum) -> bool {
    (2 * datum.pairing(alpha, beta)) % ell == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{affine_catalog_labels, TypeLabel};

    fn datum(s: &str) -> CartanDatum {
        build_datum(TypeLabel::parse(s).unwrap()).unwrap()
    }

    fn simple_braiding(d: &CartanDatum, ell: i64) -> BraidingMat {
        let degrees: Vec<RootVec> = (0..d.size).map(|i| d.simple(i)).collect();
        braiding_matrix(d, &degrees, ell).unwrap()
    }

    #[test]
    fn ell_alpha_examples() {
        assert_eq!(ell_alpha(4, 4), 1);
        assert_eq!(ell_alpha(4, 2), 2);
        assert_eq!(ell_alpha(3, 6), 1);
        assert_eq!(ell_alpha(6, 2), 3);
    }

    #[test]
    fn unity_exp_basics() {
        let q = UnityExp::new(4, -3);
        assert_eq!(q.e, 1);
        assert_eq!(q.order(), 4);
        assert!(UnityExp::new(4, 8).is_one());
        assert_eq!(UnityExp::new(6, 4).order(), 3);
    }

    #[test]
    fn g2_affine_braiding_mod_4() {
        let d = datum("G2~1");
        let b = simple_braiding(&d, 4);
        assert_eq!(
            b.exps,
            vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]
        );
    }

    #[test]
    fn a1_affine_braiding_mod_4_all_minus_one() {
        let d = datum("A1~1");
        let b = simple_braiding(&d, 4);
        assert_eq!(b.exps, vec![vec![2, 2], vec![2, 2]]);
    }

    #[test]
    fn single_degree_braiding() {
        let d = datum("B3~1");
        let b = braiding_matrix(&d, &[d.simple(1)], 5).unwrap();
        assert_eq!(b.exps, vec![vec![4]]);
    }

    #[test]
    fn gcm_of_g2_affine_at_4_is_a3() {
        let d = datum("G2~1");
        let g = heckenberger_gcm(&simple_braiding(&d, 4)).unwrap();
        assert_eq!(
            g.0,
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]
        );
    }

    #[test]
    fn gcm_of_a1_affine_at_4_splits() {
        let d = datum("A1~1");
        let g = heckenberger_gcm(&simple_braiding(&d, 4)).unwrap();
        assert_eq!(g.0, vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn gcm_of_a4_twisted_at_3_unchanged() {
        let d = datum("A4~2");
        let g = heckenberger_gcm(&simple_braiding(&d, 3)).unwrap();
        assert_eq!(g.0, d.cartan);
    }

    #[test]
    fn gcm_generic_orders_match_cartan() {
        for label in affine_catalog_labels(5) {
            let d = build_datum(label).unwrap();
            for ell in [7, 9, 11, 13] {
                let g = heckenberger_gcm(&simple_braiding(&d, ell)).unwrap();
                assert_eq!(g.0, d.cartan, "{label} at ell={ell}");
            }
        }
    }

    #[test]
    fn no_finite_entry_error() {
        // q_ii = 1 with e_ij + e_ji not divisible: no m works.
        let b = BraidingMat {
            ell: 4,
            degrees: vec![RootVec(vec![1, 0]), RootVec(vec![0, 1])],
            exps: vec![vec![0, 1], vec![1, 0]],
        };
        assert!(matches!(
            heckenberger_gcm(&b),
            Err(Error::NoFiniteCartanEntry { .. })
        ));
    }

    #[test]
    fn standard_parameter_a2_twisted() {
        let d = datum("A2~2");
        let a2 = TypeLabel::parse("A2").unwrap();
        let b6 = simple_braiding(&d, 6);
        assert_eq!(standard_braiding_parameter(&b6, a2).unwrap(), Some(4)); // q' = -q
        let b3 = simple_braiding(&d, 3);
        assert_eq!(standard_braiding_parameter(&b3, a2).unwrap(), Some(1)); // q' = q
    }

    #[test]
    fn standard_parameter_d4_triple_is_twist_only() {
        let d = datum("D4~3");
        let b = simple_braiding(&d, 4);
        let a3 = TypeLabel::parse("A3").unwrap();
        assert_eq!(standard_braiding_parameter(&b, a3).unwrap(), None);
    }

    #[test]
    fn lusztig_condition_examples() {
        let a11 = datum("A1~1");
        let c = lusztig_condition(&a11, 4);
        assert!(!c.cond_a);
        assert!(c.violations.contains(&(0, 1)));
        let a21 = datum("A2~1");
        let c = lusztig_condition(&a21, 5);
        assert!(c.cond_a);
        assert!(!c.cond_b_no_odd_cycle);
        let d41 = datum("D4~1");
        let c = lusztig_condition(&d41, 5);
        assert!(c.cond_a && c.cond_b_no_odd_cycle);
    }

    #[test]
    fn commutator_primitive_examples() {
        let a11 = datum("A1~1");
        assert!(commutator_primitive(
            4,
            &a11.simple(0),
            &a11.simple(1),
            &a11
        ));
        let g21 = datum("G2~1");
        assert!(commutator_primitive(
            3,
            &g21.simple(1),
            &g21.simple(2),
            &g21
        ));
        // Self-pairing case: ell | (α,α).
        assert!(commutator_primitive(3, &g21.simple(0), &g21.simple(0), &g21));
        assert!(!commutator_primitive(4, &g21.simple(1), &g21.simple(2), &g21));
    }

    #[test]
    fn zero_pattern_symmetric() {
        for label in ["B3~1", "A4~2", "D4~3", "C3~1"] {
            let d = datum(label);
            for ell in 3..=8 {
                if let Ok(g) = heckenberger_gcm(&simple_braiding(&d, ell)) {
                    for i in 0..d.size {
                        for j in 0..d.size {
                            assert_eq!((g.0[i][j] == 0), (g.0[j][i] == 0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ell_alpha_two_iff_not_dividing() {
        for ell in 1..=16 {
            for norm in [2i64, 4, 6, 8] {
                assert_eq!(ell_alpha(ell, norm) >= 2, norm % ell != 0);
                assert_eq!(ell_alpha(ell, norm) == 1, norm % ell == 0);
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // Braiding matrices are symmetric with diagonal entries the
            // norms, for arbitrary degree lists.
            #[test]
            fn braiding_symmetric_with_norm_diagonal(
                idx in 0usize..4,
                ell in 2i64..=12,
                raw in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 5), 1..4),
            ) {
                let labels = ["B3~1", "A4~2", "D4~3", "C3~1"];
                let d = build_datum(TypeLabel::parse(labels[idx]).unwrap()).unwrap();
                let degrees: Vec<RootVec> = raw
                    .iter()
                    .map(|v| RootVec(v[..d.size].to_vec()))
                    .collect();
                let b = braiding_matrix(&d, &degrees, ell).unwrap();
                for i in 0..b.size() {
                    prop_assert_eq!(b.exps[i][i], d.norm(&degrees[i]).rem_euclid(ell));
                    for j in 0..b.size() {
                        prop_assert_eq!(b.exps[i][j], b.exps[j][i]);
                        prop_assert!((0..ell).contains(&b.exps[i][j]));
                    }
                }
            }
        }
    }
}
