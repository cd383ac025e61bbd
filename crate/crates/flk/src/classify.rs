//! Classification of `(type, ell)` pairs and the verification suites.
//!
//! Every pair falls into one of six kinds:
//!
//! - `trivial` (ell = 1, 2): no root survives.
//! - `generic`: all simple roots survive and the non-degeneracy condition
//!   holds; the kernel keeps the type of the parent.
//! - `degenerate`: some simple root has `ell_α = 1`; the surviving roots are
//!   governed by a divisibility subsystem of the dual root system and the
//!   kernel is generated in the tabulated primitive degrees.
//! - `exotic`: all `ell_α != 1` but the non-degeneracy inequality fails; the
//!   simple degrees generate a smaller system and extra primitive degrees
//!   extend it to a system of larger rank.
//! - `pseudo-exotic` (`A_{2n}~2` at ell = 3, 6): listed with the exotic
//!   cases, but the Cartan matrix of the braiding is unchanged.
//! - `deaffinized` (`A1~1` at ell = 4): the braiding degenerates to finite
//!   type `A1 x A1`. Degenerate cases whose degree diagram contains an
//!   `A1~1` factor that splits the same way carry a deaffinized flag.
//!
//! Every verdict is recomputed from first principles and diffed against the
//! hard-coded reference classification table, so transcription problems in
//! the reference surface as structured discrepancies instead of silent
//! passes or crashes.

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

use crate::braiding::{
    braiding_matrix, ell_alpha, heckenberger_gcm, lusztig_condition, standard_braiding_parameter,
    BraidingMat,
};
use crate::datum::{
    build_datum, coroot_image, dual_datum, format_type_list, identify_type, same_type_lists,
    CartanDatum, Family, RootVec, Twist, TypeLabel,
};
use crate::roots::{isotropic_multiplicity, real_roots};
use crate::subsystem::{divisible_subsystem, gcm_of_roots, Check};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Reference classification table
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseKind {
    Trivial,
    Generic,
    Degenerate,
    Exotic,
    PseudoExotic,
    Deaffinized,
}

impl std::fmt::Display for CaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseKind::Trivial => "trivial",
            CaseKind::Generic => "generic",
            CaseKind::Degenerate => "degenerate",
            CaseKind::Exotic => "exotic",
            CaseKind::PseudoExotic => "pseudo-exotic",
            CaseKind::Deaffinized => "deaffinized",
        };
        f.write_str(s)
    }
}

/// Expected parameter `q' = q^u`, stored as a rule so that the residue can
/// be resolved per ell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QPrimeRule {
    /// q' = q, u = 1.
    Q,
    /// q' = -q, u = 1 + ell/2 (even ell).
    MinusQ,
    /// q' = conjugate of q, u = ell - 1.
    BarQ,
    /// Only twist-equivalent to a standard braiding; no single residue.
    TwistOnly,
    /// Not applicable (trivial cases).
    NotApplicable,
}

impl QPrimeRule {
    pub fn resolve(self, ell: i64) -> Option<i64> {
        match self {
            QPrimeRule::Q => Some(1),
            QPrimeRule::MinusQ => Some(1 + ell / 2),
            QPrimeRule::BarQ => Some(ell - 1),
            QPrimeRule::TwistOnly | QPrimeRule::NotApplicable => None,
        }
    }
}

/// One transcribed row of the reference classification table.
#[derive(Debug, Clone, Serialize)]
pub struct ExpectedCase {
    pub kind: CaseKind,
    pub deaffinized: bool,
    pub m: Vec<TypeLabel>,
    pub q_prime: QPrimeRule,
    pub comment: &'static str,
    /// Present when the transcribed row is internally inconsistent; the
    /// classifier then reports the computed verdict alongside instead of
    /// asserting equality.
    pub ambiguous: Option<&'static str>,
}

fn lab(family: Family, n: usize, twist: Twist) -> TypeLabel {
    TypeLabel::new(family, n, twist)
}

fn d1_series(n: usize) -> Vec<TypeLabel> {
    match n {
        2 => vec![lab(Family::A, 1, Twist::One); 2],
        3 => vec![lab(Family::A, 3, Twist::One)],
        _ => vec![lab(Family::D, n, Twist::One)],
    }
}

/// `B_n~1` with the small-rank members resolved (B_1~1 = A_1~1 and B_2~1
/// the same diagram class as C_2~1).
fn b1_series(n: usize) -> Vec<TypeLabel> {
    match n {
        1 => vec![lab(Family::A, 1, Twist::One)],
        2 => vec![lab(Family::C, 2, Twist::One)],
        _ => vec![lab(Family::B, n, Twist::One)],
    }
}

/// The reference classification of `(label, ell)`: kind, braided vector
/// space `M`, parameter `q'` and the table comment. Total over the catalog.
pub fn expected_case(label: TypeLabel, ell: i64) -> ExpectedCase {
    use Family::*;
    use Twist::*;
    let a1 = lab(A, 1, Finite);
    let generic = ExpectedCase {
        kind: CaseKind::Generic,
        deaffinized: false,
        m: vec![label],
        q_prime: QPrimeRule::Q,
        comment: "generic",
        ambiguous: None,
    };
    if ell <= 2 {
        return ExpectedCase {
            kind: CaseKind::Trivial,
            deaffinized: false,
            m: vec![],
            q_prime: QPrimeRule::Q,
            comment: "trivial",
            ambiguous: None,
        };
    }
    let n = label.rank_param;
    match (label.family, label.twist, ell) {
        (A, One, 4) if n == 1 => ExpectedCase {
            kind: CaseKind::Deaffinized,
            deaffinized: true,
            m: vec![a1; 2],
            q_prime: QPrimeRule::Q,
            comment: "deaffinized",
            ambiguous: None,
        },
        (A, One, 8) if n == 2 => ExpectedCase {
            kind: CaseKind::Generic,
            deaffinized: false,
            m: vec![],
            q_prime: QPrimeRule::Q,
            comment: "very short roots (as transcribed)",
            ambiguous: Some(
                "transcribed row claims M = A1^{2n x} for the simply-laced A2~1, which has \
                 no roots of norm divisible by 8; computed verdict: generic",
            ),
        },
        (B, One, 4) => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: true,
            m: vec![a1; 2 * n],
            q_prime: QPrimeRule::Q,
            comment: "short roots, deaffinized",
            ambiguous: None,
        },
        (D, Two, 4) => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: true,
            m: vec![a1; 2 * (n - 1)],
            q_prime: QPrimeRule::Q,
            comment: "short roots, deaffinized",
            ambiguous: None,
        },
        (C, One, 4) if n == 2 => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: true,
            m: vec![a1; 4],
            q_prime: QPrimeRule::Q,
            comment: "short roots, deaffinized (n=2 member of the D series)",
            ambiguous: None,
        },
        (C, One, 4) => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: false,
            m: d1_series(n),
            q_prime: QPrimeRule::Q,
            comment: "short roots",
            ambiguous: None,
        },
        (A, Two, 4) if n % 2 == 1 => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: false,
            m: d1_series(n.div_ceil(2)),
            q_prime: QPrimeRule::Q,
            comment: "short roots",
            ambiguous: None,
        },
        (F, One, 4) | (E, Two, 4) => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: false,
            m: vec![lab(D, 4, One)],
            q_prime: QPrimeRule::Q,
            comment: "short roots",
            ambiguous: None,
        },
        (G, One, 3) | (G, One, 6) => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: false,
            m: vec![lab(A, 2, One)],
            q_prime: QPrimeRule::Q,
            comment: "short roots",
            ambiguous: Some(
                "main-table row is labeled G2~2, a type absent from the catalog; treated as \
                 G2~1 per the case-enumeration cross-reference",
            ),
        },
        (D, Three, 3) | (D, Three, 6) => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: false,
            m: vec![lab(A, 2, One)],
            q_prime: QPrimeRule::Q,
            comment: "short roots",
            ambiguous: None,
        },
        (A, Two, 4) if n == 2 => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: true,
            m: vec![a1; 2],
            q_prime: QPrimeRule::Q,
            comment: "very short roots, deaffinized",
            ambiguous: None,
        },
        (A, Two, 8) if n == 2 => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: false,
            m: vec![lab(A, 1, One)],
            q_prime: QPrimeRule::Q,
            comment: "not very long roots",
            ambiguous: None,
        },
        (A, Two, 4) if n.is_multiple_of(2) => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: true,
            m: vec![a1; n],
            q_prime: QPrimeRule::Q,
            comment: "very short roots, deaffinized",
            ambiguous: None,
        },
        (A, Two, 8) if n.is_multiple_of(2) => ExpectedCase {
            kind: CaseKind::Degenerate,
            deaffinized: false,
            // The degree diagram (the dual of the surviving dual subsystem)
            // is of type B, and the braiding keeps that shape at ell = 8.
            m: b1_series(n / 2),
            q_prime: QPrimeRule::Q,
            comment: "not very long roots",
            ambiguous: None,
        },
        (A, Two, 3) if n == 2 => ExpectedCase {
            kind: CaseKind::Exotic,
            deaffinized: false,
            m: vec![lab(A, 2, One)],
            q_prime: QPrimeRule::Q,
            comment: "exotic",
            ambiguous: None,
        },
        (A, Two, 6) if n == 2 => ExpectedCase {
            kind: CaseKind::Exotic,
            deaffinized: false,
            m: vec![lab(A, 2, One)],
            q_prime: QPrimeRule::MinusQ,
            comment: "exotic",
            ambiguous: None,
        },
        (A, Two, 3) | (A, Two, 6) if n.is_multiple_of(2) => ExpectedCase {
            kind: CaseKind::PseudoExotic,
            deaffinized: false,
            m: vec![label],
            q_prime: QPrimeRule::Q,
            comment: "(pseudo-)exotic",
            ambiguous: None,
        },
        (G, One, 4) => ExpectedCase {
            kind: CaseKind::Exotic,
            deaffinized: false,
            m: vec![lab(A, 3, One)],
            q_prime: QPrimeRule::BarQ,
            comment: "exotic",
            ambiguous: None,
        },
        (D, Three, 4) => ExpectedCase {
            kind: CaseKind::Exotic,
            deaffinized: false,
            m: vec![lab(D, 4, One)],
            q_prime: QPrimeRule::TwistOnly,
            comment: "exotic (q, q-bar and -1 entries mixed)",
            ambiguous: None,
        },
        _ => generic,
    }
}

// ---------------------------------------------------------------------------
// Primitive degree table (degenerate cases)
// ---------------------------------------------------------------------------

/// One row of the primitive-degree table: the degrees of the generating
/// primitives of the kernel, the divisor `t` pairing with `ell` through the
/// dual root system, the degree-diagram type `g0` and the braiding type `m`.
#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveRow {
    pub label: TypeLabel,
    pub ell: i64,
    pub t: i64,
    pub degrees: Vec<RootVec>,
    /// Type of the degree diagram (exact pairings).
    pub g0: Vec<TypeLabel>,
    /// Type of the braiding Cartan matrix at this ell.
    pub m: Vec<TypeLabel>,
    pub deaffinized: bool,
    pub note: Option<&'static str>,
}

fn unit(size: usize, i: usize) -> RootVec {
    let mut v = vec![0; size];
    v[i] = 1;
    RootVec(v)
}

fn combo(size: usize, parts: &[(usize, i64)]) -> RootVec {
    let mut v = vec![0; size];
    for &(i, c) in parts {
        v[i] += c;
    }
    RootVec(v)
}

/// Degrees for the disconnected `(A1~1)^n` rows: a descending chain from
/// one short end and an ascending chain from the other.
fn paired_chains(size: usize, start_desc: usize, head_asc: &[(usize, i64)], n: usize) -> Vec<RootVec> {
    let mut degrees = Vec::new();
    for k in 0..n {
        let mut parts: Vec<(usize, i64)> = vec![(start_desc, 1)];
        for j in (start_desc - k)..start_desc {
            parts.push((j, 1));
        }
        degrees.push(combo(size, &parts));
    }
    for k in 0..n {
        let mut parts: Vec<(usize, i64)> = head_asc.to_vec();
        for j in 1..=k {
            parts.push((j, 1));
        }
        degrees.push(combo(size, &parts));
    }
    degrees
}

/// The tabulated primitive degrees of a degenerate `(label, ell)`, or None
/// when the case is not degenerate.
pub fn primitive_row(label: TypeLabel, ell: i64) -> Option<PrimitiveRow> {
    use Family::*;
    use Twist::*;
    let a1 = lab(A, 1, Finite);
    let a11 = lab(A, 1, One);
    let n = label.rank_param;
    let size = label.size();
    let row = match (label.family, label.twist, ell) {
        (B, One, 4) => {
            // α_0' = α_0 + α_2 + ... + α_n.
            let mut head: Vec<(usize, i64)> = vec![(0, 1)];
            for j in 2..=n {
                head.push((j, 1));
            }
            PrimitiveRow {
                label,
                ell,
                t: 4,
                degrees: paired_chains(size, n, &head, n),
                g0: vec![a11; n],
                m: vec![a1; 2 * n],
                deaffinized: true,
                note: None,
            }
        }
        (D, Two, 4) => {
            let bar = n - 1; // rank of the finite part
            PrimitiveRow {
                label,
                ell,
                t: 4,
                degrees: paired_chains(size, bar, &[(0, 1)], bar),
                g0: vec![a11; bar],
                m: vec![a1; 2 * bar],
                deaffinized: true,
                note: None,
            }
        }
        (C, One, 4) if n == 2 => PrimitiveRow {
            label,
            ell,
            t: 4,
            degrees: vec![
                unit(3, 1),
                combo(3, &[(1, 1), (2, 1)]),
                combo(3, &[(0, 1), (1, 1)]),
                combo(3, &[(0, 1), (1, 1), (2, 1)]),
            ],
            g0: vec![a11; 2],
            m: vec![a1; 4],
            deaffinized: true,
            note: Some("n=2 member of the D series; the braiding splits into A1 factors"),
        },
        (C, One, 4) => {
            let mut degrees = vec![combo(size, &[(0, 1), (1, 1)])];
            degrees.extend((1..n).map(|i| unit(size, i)));
            degrees.push(combo(size, &[(n - 1, 1), (n, 1)]));
            PrimitiveRow {
                label,
                ell,
                t: 4,
                degrees,
                g0: d1_series(n),
                m: d1_series(n),
                deaffinized: false,
                note: None,
            }
        }
        (A, Two, 4) if n % 2 == 1 => {
            let half = n.div_ceil(2);
            let mut degrees: Vec<RootVec> = (0..half).map(|i| unit(size, i)).collect();
            degrees.push(combo(size, &[(half - 1, 1), (half, 1)]));
            PrimitiveRow {
                label,
                ell,
                t: 4,
                degrees,
                g0: d1_series(half),
                m: d1_series(half),
                deaffinized: false,
                note: None,
            }
        }
        (F, One, 4) => PrimitiveRow {
            label,
            ell,
            t: 4,
            degrees: vec![
                combo(5, &[(0, 1), (1, 1), (2, 1), (3, 1)]),
                unit(5, 4),
                unit(5, 3),
                combo(5, &[(3, 1), (2, 1)]),
                combo(5, &[(3, 1), (2, 1), (1, 1)]),
            ],
            g0: vec![lab(D, 4, One)],
            m: vec![lab(D, 4, One)],
            deaffinized: false,
            note: None,
        },
        (E, Two, 4) => PrimitiveRow {
            label,
            ell,
            t: 4,
            degrees: vec![
                unit(5, 0),
                unit(5, 1),
                unit(5, 2),
                combo(5, &[(2, 1), (3, 1)]),
                combo(5, &[(2, 1), (3, 1), (4, 1)]),
            ],
            g0: vec![lab(D, 4, One)],
            m: vec![lab(D, 4, One)],
            deaffinized: false,
            note: None,
        },
        (G, One, 3) | (G, One, 6) => PrimitiveRow {
            label,
            ell,
            t: ell,
            degrees: vec![
                combo(3, &[(0, 1), (1, 1), (2, 1)]),
                unit(3, 2),
                combo(3, &[(2, 1), (1, 1)]),
            ],
            g0: vec![lab(A, 2, One)],
            m: vec![lab(A, 2, One)],
            deaffinized: false,
            note: None,
        },
        (D, Three, 3) | (D, Three, 6) => PrimitiveRow {
            label,
            ell,
            t: ell,
            degrees: vec![unit(3, 0), unit(3, 1), combo(3, &[(1, 1), (2, 1)])],
            g0: vec![lab(A, 2, One)],
            m: vec![lab(A, 2, One)],
            deaffinized: false,
            note: None,
        },
        (A, Two, 4) if n == 2 => PrimitiveRow {
            label,
            ell,
            t: 8,
            degrees: vec![combo(2, &[(0, 1), (1, 1)]), unit(2, 0)],
            g0: vec![a11],
            m: vec![a1; 2],
            deaffinized: true,
            note: None,
        },
        (A, Two, 8) if n == 2 => PrimitiveRow {
            label,
            ell,
            t: 4,
            degrees: vec![combo(2, &[(0, 1), (1, 1)]), unit(2, 0)],
            g0: vec![a11],
            m: vec![a11],
            deaffinized: false,
            note: None,
        },
        (A, Two, 4) if n.is_multiple_of(2) => {
            let half = n / 2;
            // Ascending chain from α_0 and a chain from α_n'' = α_n + ... + α_0.
            let mut degrees = Vec::new();
            for k in 0..half {
                let mut parts: Vec<(usize, i64)> = vec![(0, 1)];
                for j in 1..=k {
                    parts.push((j, 1));
                }
                degrees.push(combo(size, &parts));
            }
            let all_ones: Vec<(usize, i64)> = (0..size).map(|i| (i, 1)).collect();
            for k in 0..half {
                let mut parts = all_ones.clone();
                for j in ((half - k)..half).rev() {
                    parts.push((j, 1));
                }
                degrees.push(combo(size, &parts));
            }
            PrimitiveRow {
                label,
                ell,
                t: 8,
                degrees,
                g0: vec![a11; half],
                m: vec![a1; n],
                deaffinized: true,
                note: None,
            }
        }
        (A, Two, 8) if n.is_multiple_of(2) => {
            let half = n / 2;
            let mut degrees = vec![combo(size, &[(half, 1), (half - 1, 1)])];
            degrees.extend((0..half).rev().map(|i| unit(size, i)));
            PrimitiveRow {
                label,
                ell,
                t: 4,
                degrees,
                g0: b1_series(half),
                m: b1_series(half),
                deaffinized: false,
                note: Some(
                    "the degree diagram is of type B; the surviving dual subsystem is its dual",
                ),
            }
        }
        _ => return None,
    };
    Some(row)
}

/// Primitive degrees of `(label, ell)` per the classification: tabulated
/// degrees for degenerate cases, the simple roots for generic cases, empty
/// for trivial ones. Exotic cases are rejected; their degrees come from the
/// exotic verification instead.
pub fn primitive_degrees(label: TypeLabel, ell: i64) -> Result<Vec<RootVec>> {
    let datum = build_datum(label)?;
    if ell <= 2 {
        return Ok(Vec::new());
    }
    if let Some(row) = primitive_row(label, ell) {
        return Ok(row.degrees);
    }
    let expected = expected_case(label, ell);
    match expected.kind {
        CaseKind::Generic => Ok((0..datum.size).map(|i| datum.simple(i)).collect()),
        _ => Err(Error::Unsupported(format!(
            "degrees of the {} case {label} at ell={ell} come from the exotic verification",
            expected.kind
        ))),
    }
}

// ---------------------------------------------------------------------------
// Degree verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct DegreeVerification {
    pub label: TypeLabel,
    pub ell: i64,
    pub checks: Vec<Check>,
    pub flags: Vec<String>,
}

impl DegreeVerification {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Verify the tabulated primitive degrees of a degenerate case:
/// (a) every degree survives (`ell` does not divide its norm),
/// (b) exactly one simple root in its support survives, with coefficient 1,
/// (c) all other support roots die (`ell` divides their norm),
/// (d) the degree diagram and braiding identify as the tabulated types,
/// (e) the degrees are real roots.
pub fn verify_primitive_degrees(label: TypeLabel, ell: i64, level: i64) -> Result<DegreeVerification> {
    let datum = build_datum(label)?;
    let row = primitive_row(label, ell).ok_or_else(|| {
        Error::Unsupported(format!("{label} at ell={ell} is not a degenerate case"))
    })?;
    let mut checks = Vec::new();
    let mut flags = vec![
        "membership criterion: a degree survives iff q^{(α,α)} != 1".to_string(),
    ];
    if let Some(note) = row.note {
        flags.push(note.to_string());
    }

    // (a) surviving degrees
    let dead: Vec<String> = row
        .degrees
        .iter()
        .filter(|v| datum.norm(v) % ell == 0)
        .map(|v| v.to_string())
        .collect();
    checks.push(Check {
        name: "degrees-survive".into(),
        pass: dead.is_empty(),
        detail: if dead.is_empty() {
            format!("all {} degrees have ell_α != 1", row.degrees.len())
        } else {
            format!("degenerate degrees: {}", dead.join(" "))
        },
    });

    // (b) + (c) support structure
    let mut support_ok = true;
    let mut support_detail = String::new();
    for v in &row.degrees {
        let mut surviving = Vec::new();
        let mut dead_support_ok = true;
        for i in 0..datum.size {
            if v.0[i] == 0 {
                continue;
            }
            if datum.form[i][i] % ell != 0 {
                surviving.push((i, v.0[i]));
            } else if v.0[i] < 0 {
                dead_support_ok = false;
            }
        }
        if surviving.len() != 1 || surviving[0].1 != 1 || !dead_support_ok {
            support_ok = false;
            support_detail = format!("degree {v} violates the support property");
            break;
        }
    }
    checks.push(Check {
        name: "support".into(),
        pass: support_ok,
        detail: if support_ok {
            "each degree contains exactly one surviving simple root, with coefficient 1".into()
        } else {
            support_detail
        },
    });

    // (d) type identification
    let form_gcm = gcm_of_roots(&datum, &row.degrees)?;
    let g0_components = identify_type(&form_gcm);
    let g0: Option<Vec<TypeLabel>> = g0_components.iter().map(|c| c.label).collect();
    let g0_ok = g0
        .as_ref()
        .map(|list| same_type_lists(list, &row.g0))
        .unwrap_or(false);
    checks.push(Check {
        name: "degree-diagram".into(),
        pass: g0_ok,
        detail: match &g0 {
            Some(list) => format!(
                "degree diagram {} (expected {})",
                format_type_list(list),
                format_type_list(&row.g0)
            ),
            None => "degree diagram unrecognized".into(),
        },
    });
    let braiding = braiding_matrix(&datum, &row.degrees, ell)?;
    let m_gcm = heckenberger_gcm(&braiding)?;
    let m_components = identify_type(&m_gcm);
    let m: Option<Vec<TypeLabel>> = m_components.iter().map(|c| c.label).collect();
    let m_ok = m
        .as_ref()
        .map(|list| same_type_lists(list, &row.m))
        .unwrap_or(false);
    checks.push(Check {
        name: "braiding-type".into(),
        pass: m_ok,
        detail: match &m {
            Some(list) => format!(
                "braiding Cartan matrix of type {} (expected {})",
                format_type_list(list),
                format_type_list(&row.m)
            ),
            None => "braiding Cartan matrix unrecognized".into(),
        },
    });
    // The braiding is standard with q' = q on the degree diagram by
    // construction; record the parameter.
    checks.push(Check {
        name: "q-prime".into(),
        pass: true,
        detail: "q' = q (the braiding is the restriction of the ambient one)".into(),
    });

    // (e) degrees are real roots
    let enumerated = real_roots(&datum, level)?;
    let missing: Vec<String> = row
        .degrees
        .iter()
        .filter(|v| !enumerated.contains(v))
        .map(|v| v.to_string())
        .collect();
    checks.push(Check {
        name: "degrees-are-roots".into(),
        pass: missing.is_empty(),
        detail: if missing.is_empty() {
            "all degrees lie in the enumerated real roots".into()
        } else {
            format!("not roots within level {level}: {}", missing.join(" "))
        },
    });

    Ok(DegreeVerification {
        label,
        ell,
        checks,
        flags,
    })
}

// ---------------------------------------------------------------------------
// Grading functional
// ---------------------------------------------------------------------------

/// Solve `f(degree) = 1` for all degrees over the rationals. Existence of a
/// solution certifies that the kernel is coradically graded.
pub fn grading_functional(degrees: &[RootVec], datum: &CartanDatum) -> Option<Vec<Rational64>> {
    if degrees.is_empty() {
        return None;
    }
    let rows = degrees.len();
    let cols = datum.size;
    let mut m: Vec<Vec<Rational64>> = degrees
        .iter()
        .map(|d| {
            let mut r: Vec<Rational64> =
                d.0.iter().map(|&c| Rational64::from_integer(c)).collect();
            r.push(Rational64::one());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c];
        for x in m[r].iter_mut() {
            *x /= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..=cols {
                    let sub = f * m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent rows: 0 = nonzero.
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut f = vec![Rational64::zero(); cols];
    for (row_idx, &pc) in pivot_cols.iter().enumerate() {
        f[pc] = m[row_idx][cols];
    }
    Some(f)
}

// ---------------------------------------------------------------------------
// Dual-subsystem bijection
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct FMapCheck {
    pub label: TypeLabel,
    pub ell: i64,
    pub t: i64,
    pub pass: bool,
    pub image_count: usize,
    pub target_count: usize,
    pub injective: bool,
    pub detail: String,
}

/// Check that the coroot map sends the divisibility subsystem `(Δ^∨)^t` of
/// the dual root system bijectively onto the surviving roots
/// `{α : ell does not divide (α,α)}`, on a shared bounded region.
pub fn f_map_bijection_check(label: TypeLabel, ell: i64, t: i64, level: i64) -> Result<FMapCheck> {
    let row = primitive_row(label, ell).ok_or_else(|| {
        Error::Unsupported(format!(
            "{label} at ell={ell} is generic or trivial; t = 1 resp. ∞ would be appropriate"
        ))
    })?;
    if row.t != t {
        return Err(Error::Unsupported(format!(
            "{label} at ell={ell} pairs with t={}, not t={t}",
            row.t
        )));
    }
    let datum = build_datum(label)?;
    let (dual_label, perm) = dual_datum(label)?;
    let dual = build_datum(dual_label)?;
    // Enumerate the dual deep enough that the mapped set covers the whole
    // parent region (the coroot map rescales levels by at most 4).
    let dual_roots = real_roots(&dual, 4 * level + 8)?;
    let dual_sub = divisible_subsystem(&dual_roots, t);
    let mut image: BTreeSet<RootVec> = BTreeSet::new();
    let mut image_count_in_region = 0usize;
    let mut injective = true;
    for r in dual_sub.iter() {
        let img = coroot_image(&datum, &dual, &perm, r)?;
        if datum.level_x2(&img).abs() <= 2 * level {
            image_count_in_region += 1;
            if !image.insert(img) {
                injective = false;
            }
        }
    }
    let parent_roots = real_roots(&datum, level)?;
    let target: BTreeSet<RootVec> = parent_roots
        .iter()
        .filter(|v| datum.norm(v) % ell != 0)
        .cloned()
        .collect();
    let pass = injective && image == target;
    let detail = if pass {
        format!("bijection holds on {} roots", target.len())
    } else {
        format!(
            "image {} vs target {} (injective: {injective})",
            image.len(),
            target.len()
        )
    };
    Ok(FMapCheck {
        label,
        ell,
        t,
        pass,
        image_count: image_count_in_region,
        target_count: target.len(),
        injective,
        detail,
    })
}

// ---------------------------------------------------------------------------
// Exotic cases
// ---------------------------------------------------------------------------

/// Transcribed braiding matrix: exact residues plus the cells where the
/// printed source shows a different value (kept for the diff report).
#[derive(Debug, Clone, Serialize)]
pub struct DisplayedMatrix {
    pub name: &'static str,
    pub exact: Vec<Vec<i64>>,
    /// (i, j, printed residue) where the printed value disagrees with exact
    /// arithmetic.
    pub transcription_slips: Vec<(usize, usize, i64)>,
}

/// One growth stage of an exotic case: the braiding of the first
/// `degree_count` degrees of `simples + added`, its printed matrix and the
/// type it generates.
#[derive(Debug, Clone, Serialize)]
pub struct ExoticStage {
    pub degree_count: usize,
    pub displayed: Option<DisplayedMatrix>,
    pub expected_type: Vec<TypeLabel>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExoticFixture {
    pub label: TypeLabel,
    pub ell: i64,
    pub added_degrees: Vec<RootVec>,
    /// Stages in growth order; the last one is the full extended system.
    pub stages: Vec<ExoticStage>,
    pub q_prime: QPrimeRule,
    /// Expected c with δ_extended = c·δ_parent; None for the rows without
    /// added degrees.
    pub delta_factor: Option<i64>,
    pub notes: Vec<&'static str>,
}

impl ExoticFixture {
    pub fn extended_type(&self) -> Vec<TypeLabel> {
        self.stages.last().map(|s| s.expected_type.clone()).unwrap_or_default()
    }

    pub fn simple_type(&self) -> Vec<TypeLabel> {
        self.stages.first().map(|s| s.expected_type.clone()).unwrap_or_default()
    }
}

/// The transcribed exotic braiding matrices.
pub fn exotic_fixture(label: TypeLabel, ell: i64) -> Option<ExoticFixture> {
    use Family::*;
    use Twist::*;
    let n = label.rank_param;
    match (label.family, label.twist, ell) {
        (G, One, 4) => Some(ExoticFixture {
            label,
            ell,
            added_degrees: vec![combo(3, &[(1, 1), (2, 2)])],
            stages: vec![
                ExoticStage {
                    degree_count: 3,
                    displayed: Some(DisplayedMatrix {
                        name: "G2~1 ell=4 simple 3x3",
                        exact: vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]],
                        transcription_slips: vec![],
                    }),
                    expected_type: vec![lab(A, 3, Finite)],
                },
                ExoticStage {
                    degree_count: 4,
                    displayed: Some(DisplayedMatrix {
                        name: "G2~1 ell=4 extended 4x4",
                        exact: vec![
                            vec![2, 1, 0, 1],
                            vec![1, 2, 1, 0],
                            vec![0, 1, 2, 1],
                            vec![1, 0, 1, 2],
                        ],
                        transcription_slips: vec![],
                    }),
                    expected_type: vec![lab(A, 3, One)],
                },
            ],
            q_prime: QPrimeRule::BarQ,
            delta_factor: Some(1),
            notes: vec![],
        }),
        (A, Two, 3) | (A, Two, 6) if n == 2 => {
            let all2 = |k: usize| vec![vec![2i64; k]; k];
            Some(ExoticFixture {
                label,
                ell,
                added_degrees: vec![combo(2, &[(0, 3), (1, 1)])],
                stages: vec![
                    ExoticStage {
                        degree_count: 2,
                        displayed: Some(DisplayedMatrix {
                            name: if ell == 3 {
                                "A2~2 ell=3 simple 2x2"
                            } else {
                                "A2~2 ell=6 simple 2x2"
                            },
                            exact: all2(2),
                            transcription_slips: vec![],
                        }),
                        expected_type: vec![lab(A, 2, Finite)],
                    },
                    ExoticStage {
                        degree_count: 3,
                        displayed: Some(DisplayedMatrix {
                            name: if ell == 3 {
                                "A2~2 ell=3 extended 3x3"
                            } else {
                                "A2~2 ell=6 extended 3x3"
                            },
                            exact: all2(3),
                            transcription_slips: vec![],
                        }),
                        expected_type: vec![lab(A, 2, One)],
                    },
                ],
                q_prime: if ell == 3 {
                    QPrimeRule::Q
                } else {
                    QPrimeRule::MinusQ
                },
                delta_factor: Some(2),
                notes: vec![],
            })
        }
        (D, Three, 4) => Some(ExoticFixture {
            label,
            ell,
            added_degrees: vec![combo(3, &[(1, 2), (2, 1)]), combo(3, &[(0, 2), (1, 2), (2, 1)])],
            stages: vec![
                ExoticStage {
                    degree_count: 3,
                    displayed: Some(DisplayedMatrix {
                        name: "D4~3 ell=4 simple 3x3",
                        exact: vec![vec![2, 3, 0], vec![3, 2, 1], vec![0, 1, 2]],
                        transcription_slips: vec![],
                    }),
                    expected_type: vec![lab(A, 3, Finite)],
                },
                ExoticStage {
                    degree_count: 4,
                    displayed: Some(DisplayedMatrix {
                        name: "D4~3 ell=4 extended 4x4",
                        exact: vec![
                            vec![2, 3, 0, 2],
                            vec![3, 2, 1, 1],
                            vec![0, 1, 2, 0],
                            vec![2, 1, 0, 2],
                        ],
                        transcription_slips: vec![],
                    }),
                    expected_type: vec![lab(D, 4, Finite)],
                },
                ExoticStage {
                    degree_count: 5,
                    displayed: Some(DisplayedMatrix {
                        name: "D4~3 ell=4 extended 5x5",
                        exact: vec![
                            vec![2, 3, 0, 2, 2],
                            vec![3, 2, 1, 1, 3],
                            vec![0, 1, 2, 0, 0],
                            vec![2, 1, 0, 2, 2],
                            vec![2, 3, 0, 2, 2],
                        ],
                        // The printed matrix shows q^0 = 1 at these two
                        // cells; exact pairing gives
                        // (2α_1+α_2, 2α_0+2α_1+α_2) = -2, i.e. q^2 = -1.
                        transcription_slips: vec![(3, 4, 0), (4, 3, 0)],
                    }),
                    expected_type: vec![lab(D, 4, One)],
                },
            ],
            q_prime: QPrimeRule::TwistOnly,
            delta_factor: Some(3),
            notes: vec![
                "not of standard form; twist-equivalent to the D4 braiding at q or q-bar",
            ],
        }),
        (A, Two, 3) | (A, Two, 6) if n.is_multiple_of(2) && n >= 4 => Some(ExoticFixture {
            label,
            ell,
            added_degrees: vec![],
            stages: vec![],
            q_prime: QPrimeRule::Q,
            delta_factor: None,
            notes: vec!["the braiding Cartan matrix, hence the Weyl group, is unchanged"],
        }),
        _ => None,
    }
}

/// Exotic fixture for the deaffinized `A1~1` braiding at ell = 4 (the 2x2
/// matrix is part of the reference computations even though the case is
/// handled outside the exotic machinery).
pub fn a1_affine_deaffinized_matrix() -> DisplayedMatrix {
    DisplayedMatrix {
        name: "A1~1 ell=4 simple 2x2",
        exact: vec![vec![2, 2], vec![2, 2]],
        transcription_slips: vec![],
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExoticReport {
    pub label: TypeLabel,
    pub ell: i64,
    pub checks: Vec<Check>,
    pub flags: Vec<String>,
    pub extended_degrees: Vec<RootVec>,
}

impl ExoticReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn compare_matrix(
    name: &str,
    computed: &BraidingMat,
    displayed: &DisplayedMatrix,
    flags: &mut Vec<String>,
) -> Check {
    let pass = computed.exps == displayed.exact;
    for &(i, j, printed) in &displayed.transcription_slips {
        flags.push(format!(
            "{name}: printed entry ({i},{j}) reads q^{printed}, exact arithmetic gives q^{}",
            computed.exps[i][j]
        ));
    }
    Check {
        name: format!("matrix:{name}"),
        pass,
        detail: if pass {
            let slips = displayed.transcription_slips.len();
            if slips == 0 {
                "entrywise equal to the printed matrix".into()
            } else {
                format!("entrywise equal except {slips} flagged transcription cells")
            }
        } else {
            format!("computed {:?} != transcribed {:?}", computed.exps, displayed.exact)
        },
    }
}

/// Verify one exotic case: the braiding matrices entrywise, the braiding
/// Cartan matrix and its type, the δ-identity, the real-root coverage of the
/// extended system and the isotropic-multiplicity comparison.
pub fn exotic_verify(label: TypeLabel, ell: i64, level: i64) -> Result<ExoticReport> {
    let fixture = exotic_fixture(label, ell).ok_or_else(|| {
        Error::Unsupported(format!("{label} at ell={ell} is not an exotic case"))
    })?;
    let datum = build_datum(label)?;
    let mut checks = Vec::new();
    let mut flags = Vec::new();
    let simples: Vec<RootVec> = (0..datum.size).map(|i| datum.simple(i)).collect();
    let mut extended = simples.clone();
    extended.extend(fixture.added_degrees.iter().cloned());

    if fixture.stages.is_empty() {
        // Pseudo-exotic family: the content is that the braiding Cartan
        // matrix, hence the Weyl group, is unchanged.
        let b = braiding_matrix(&datum, &simples, ell)?;
        let gcm = heckenberger_gcm(&b)?;
        let unchanged = gcm.0 == datum.cartan;
        checks.push(Check {
            name: "gcm-unchanged".into(),
            pass: unchanged,
            detail: if unchanged {
                "braiding Cartan matrix equals the parent Cartan matrix".into()
            } else {
                "braiding Cartan matrix differs from the parent".into()
            },
        });
    }

    // Per-stage: printed matrix entrywise, then the generated type.
    for stage in &fixture.stages {
        let degs = &extended[..stage.degree_count];
        let b = braiding_matrix(&datum, degs, ell)?;
        if let Some(displayed) = &stage.displayed {
            checks.push(compare_matrix(displayed.name, &b, displayed, &mut flags));
        }
        let gcm = heckenberger_gcm(&b)?;
        let ids = identify_type(&gcm);
        let got: Option<Vec<TypeLabel>> = ids.iter().map(|c| c.label).collect();
        let ok = got
            .as_ref()
            .map(|l| same_type_lists(l, &stage.expected_type))
            .unwrap_or(false);
        checks.push(Check {
            name: format!("type:{}x{}", stage.degree_count, stage.degree_count),
            pass: ok,
            detail: match &got {
                Some(l) => format!(
                    "{} degrees generate type {} (expected {})",
                    stage.degree_count,
                    format_type_list(l),
                    format_type_list(&stage.expected_type)
                ),
                None => "unrecognized braiding Cartan matrix".into(),
            },
        });
        // Center checks for the D4-shaped stages: α_1 must be the center.
        if label == lab(Family::D, 4, Twist::Three) && ids.len() == 1 {
            if let Some(l) = ids[0].label {
                let canon = build_datum(l)?;
                let center_canon = (0..canon.size)
                    .find(|&i| (0..canon.size).filter(|&j| j != i && canon.cartan[i][j] != 0).count() >= 3);
                if let Some(cc) = center_canon {
                    checks.push(Check {
                        name: format!("center-node:{}", stage.degree_count),
                        pass: ids[0].canonical_to_node[cc] == 1,
                        detail: "the center of the diagram is α_1".into(),
                    });
                }
            }
        }
    }

    if !fixture.stages.is_empty() {
        let ext_b = braiding_matrix(&datum, &extended, ell)?;
        let ext_gcm = heckenberger_gcm(&ext_b)?;
        let extended_type = fixture.extended_type();
        // δ-identity of the full extended system.
        if let Some(expected_c) = fixture.delta_factor {
            let ext_components = identify_type(&ext_gcm);
            let mut pass = false;
            let mut detail = "no affine component".to_string();
            if ext_components.len() == 1 {
                if let Some(l) = ext_components[0].label {
                    let canon = build_datum(l)?;
                    if canon.is_affine() {
                        let mut image = RootVec::zero(datum.size);
                        for (i, &node) in ext_components[0].canonical_to_node.iter().enumerate() {
                            image = image.add(&extended[node].scale(canon.marks[i]));
                        }
                        let delta = datum.delta()?;
                        match image.positive_multiple_of(&delta) {
                            Some(c) => {
                                pass = c == expected_c;
                                detail =
                                    format!("δ_extended = {c}·δ_parent (expected {expected_c})");
                            }
                            None => detail = format!("δ_extended = {image} is not a δ multiple"),
                        }
                    }
                }
            }
            checks.push(Check {
                name: "delta-identity".into(),
                pass,
                detail,
            });
        }
        // Standard-form parameter of the extended braiding.
        let expected_u = fixture.q_prime.resolve(ell);
        if extended_type.len() == 1 {
            let got_u = standard_braiding_parameter(&ext_b, extended_type[0])?;
            let pass = got_u == expected_u;
            checks.push(Check {
                name: "q-prime".into(),
                pass,
                detail: match (got_u, expected_u) {
                    (Some(u), _) => format!("standard braiding with q' = q^{u}"),
                    (None, None) => "not of standard form (twist-equivalent only)".into(),
                    (None, Some(u)) => format!("expected q' = q^{u}, found no standard form"),
                },
            });
        }
        // Real-root coverage of the extended system.
        let coverage = exotic_coverage(&datum, &extended, &ext_gcm, ell, level)?;
        checks.push(coverage);
        flags.push(format!(
            "isotropic multiplicities of {} and {} differ; see the mismatch report",
            label,
            format_type_list(&extended_type)
        ));
    }
    for n in &fixture.notes {
        flags.push((*n).to_string());
    }

    Ok(ExoticReport {
        label,
        ell,
        checks,
        flags,
        extended_degrees: extended,
    })
}

/// The root set generated by the extended simple system equals
/// `{α : ell does not divide (α,α)}` as vector sets on the common region.
fn exotic_coverage(
    datum: &CartanDatum,
    extended: &[RootVec],
    ext_gcm: &crate::datum::Gcm,
    ell: i64,
    level: i64,
) -> Result<Check> {
    let components = identify_type(ext_gcm);
    let mut generated: BTreeSet<RootVec> = BTreeSet::new();
    let region_x2 = 2 * level;
    for comp in &components {
        let Some(l) = comp.label else {
            return Ok(Check {
                name: "coverage".into(),
                pass: false,
                detail: "extended diagram unrecognized".into(),
            });
        };
        let canon = build_datum(l)?;
        let canon_roots = real_roots(&canon, level + 3)?;
        for r in canon_roots.iter() {
            let mut image = RootVec::zero(datum.size);
            for (i, &node) in comp.canonical_to_node.iter().enumerate() {
                image = image.add(&extended[node].scale(r.0[i]));
            }
            if datum.level_x2(&image).abs() <= region_x2 {
                generated.insert(image);
            }
        }
    }
    let parent = real_roots(datum, level)?;
    let target: BTreeSet<RootVec> = parent
        .iter()
        .filter(|v| datum.norm(v) % ell != 0)
        .cloned()
        .collect();
    let pass = generated == target;
    Ok(Check {
        name: "coverage".into(),
        pass,
        detail: if pass {
            format!(
                "extended system covers exactly the {} surviving roots at level {level}",
                target.len()
            )
        } else {
            format!(
                "coverage mismatch: generated {} vs target {}",
                generated.len(),
                target.len()
            )
        },
    })
}

// ---------------------------------------------------------------------------
// Isotropic multiplicity comparison
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct MismatchTable {
    pub parent: TypeLabel,
    pub target: TypeLabel,
    pub delta_factor: i64,
    /// (m, multiplicity of mδ in the parent, multiplicity of the matching
    /// target layer or 0 when m is not a multiple of the factor).
    pub rows: Vec<(i64, i64, i64)>,
    pub identical: bool,
    pub notes: Vec<String>,
}

/// Informational comparison of isotropic root multiplicities between a
/// parent and the target system sitting inside it with `δ_target = c·δ`.
pub fn isotropic_mismatch_report(
    parent: TypeLabel,
    target: TypeLabel,
    c: i64,
    m_max: i64,
) -> Result<MismatchTable> {
    if c < 1 {
        return Err(Error::Unsupported("delta factor must be >= 1".into()));
    }
    let mut rows = Vec::new();
    let mut identical = true;
    for m in 1..=m_max {
        let p = isotropic_multiplicity(parent, m)?;
        let t = if m % c == 0 {
            isotropic_multiplicity(target, m / c)?
        } else {
            0
        };
        if p != t {
            identical = false;
        }
        rows.push((m, p, t));
    }
    let mut notes = Vec::new();
    if parent == lab(Family::D, 4, Twist::Three) && m_max >= 6 {
        notes.push(
            "a printed remark lists the sixth multiplicity as 3; the multiplicity table \
             gives 2 (it is authoritative here)"
                .to_string(),
        );
    }
    Ok(MismatchTable {
        parent,
        target,
        delta_factor: c,
        rows,
        identical,
        notes,
    })
}

// ---------------------------------------------------------------------------
// The classifier
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseVerdict {
    Pass,
    Fail,
    Ambiguous,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub label: TypeLabel,
    pub ell: i64,
    pub level: i64,
    pub kind: CaseKind,
    pub deaffinized: bool,
    /// Braided vector space M: type of the braiding Cartan matrix of the
    /// primitive degrees.
    pub m_type: Vec<TypeLabel>,
    /// Type of the degree diagram (exact pairings).
    pub g0_type: Vec<TypeLabel>,
    /// Residue u with q' = q^u, when the braiding is standard.
    pub q_prime_u: Option<i64>,
    pub primitive_degrees: Vec<RootVec>,
    pub flags: Vec<String>,
    pub expected: ExpectedCase,
    pub diffs: Vec<String>,
    pub verdict: CaseVerdict,
}

/// Split test for the deaffinized refinement: an `A1~1` component of the
/// degree diagram whose two degrees anticommute at this ell degenerates to
/// `A1 x A1`.
fn deaffinized_flag(
    datum: &CartanDatum,
    degrees: &[RootVec],
    form_components: &[crate::datum::ComponentMatch],
    ell: i64,
) -> bool {
    let a11 = lab(Family::A, 1, Twist::One);
    form_components.iter().any(|comp| {
        comp.label == Some(a11) && {
            let i = comp.nodes[0];
            let j = comp.nodes[1];
            (2 * datum.pairing(&degrees[i], &degrees[j])) % ell == 0
        }
    })
}

/// Classify one `(label, ell)` from first principles and diff the result
/// against the reference table.
pub fn classify_case(label: TypeLabel, ell: i64, level: i64) -> Result<CaseReport> {
    let datum = build_datum(label)?;
    let expected = expected_case(label, ell);
    let mut flags = Vec::new();
    let kind;
    let mut deaffinized = false;
    let mut m_type: Vec<TypeLabel> = Vec::new();
    let mut g0_type: Vec<TypeLabel> = Vec::new();
    let mut q_prime_u: Option<i64> = None;
    let mut degrees: Vec<RootVec> = Vec::new();

    if ell <= 2 {
        kind = CaseKind::Trivial;
    } else {
        let ells: Vec<i64> = (0..datum.size)
            .map(|i| ell_alpha(ell, datum.form[i][i]))
            .collect();
        let some_dead = ells.contains(&1);
        if some_dead {
            kind = CaseKind::Degenerate;
            let row = primitive_row(label, ell).ok_or_else(|| {
                Error::Unsupported(format!(
                    "degenerate case {label} at ell={ell} missing from the degree table"
                ))
            })?;
            degrees = row.degrees.clone();
            let form_gcm = gcm_of_roots(&datum, &degrees)?;
            let form_components = identify_type(&form_gcm);
            g0_type = form_components.iter().filter_map(|c| c.label).collect();
            let braiding = braiding_matrix(&datum, &degrees, ell)?;
            let m_gcm = heckenberger_gcm(&braiding)?;
            m_type = identify_type(&m_gcm).iter().filter_map(|c| c.label).collect();
            // The degree braiding is the restriction of the ambient one, so
            // it is standard on the degree diagram with q' = q.
            q_prime_u = Some(1);
            deaffinized = deaffinized_flag(&datum, &degrees, &form_components, ell);
            let verification = verify_primitive_degrees(label, ell, level)?;
            if !verification.pass() {
                for c in verification.checks.iter().filter(|c| !c.pass) {
                    flags.push(format!("degree verification failed: {}: {}", c.name, c.detail));
                }
            }
        } else {
            let cond = lusztig_condition(&datum, ell);
            let pseudo_exotic = label.family == Family::A
                && label.twist == Twist::Two
                && label.rank_param.is_multiple_of(2)
                && label.rank_param >= 4
                && (ell == 3 || ell == 6);
            if pseudo_exotic {
                // Listed with the exotic cases although the inequality holds
                // with equality; the braiding Cartan matrix is unchanged.
                kind = CaseKind::PseudoExotic;
                degrees = (0..datum.size).map(|i| datum.simple(i)).collect();
                let braiding = braiding_matrix(&datum, &degrees, ell)?;
                let m_gcm = heckenberger_gcm(&braiding)?;
                if m_gcm.0 != datum.cartan {
                    flags.push("braiding Cartan matrix unexpectedly changed".into());
                }
                m_type = identify_type(&m_gcm).iter().filter_map(|c| c.label).collect();
                g0_type = vec![label];
                q_prime_u = Some(1);
            } else if cond.cond_a {
                kind = CaseKind::Generic;
                if !cond.cond_b_no_odd_cycle {
                    flags.push(
                        "odd cycle: the diagram is A_n~1 with n even; the non-degeneracy \
                         inequality holds but the odd-cycle condition fails"
                            .into(),
                    );
                }
                degrees = (0..datum.size).map(|i| datum.simple(i)).collect();
                let braiding = braiding_matrix(&datum, &degrees, ell)?;
                let m_gcm = heckenberger_gcm(&braiding)?;
                if m_gcm.0 != datum.cartan {
                    flags.push("generic case with changed braiding Cartan matrix".into());
                }
                m_type = vec![label];
                g0_type = vec![label];
                q_prime_u = Some(1);
            } else if label == lab(Family::A, 1, Twist::One) && ell == 4 {
                kind = CaseKind::Deaffinized;
                degrees = (0..datum.size).map(|i| datum.simple(i)).collect();
                let braiding = braiding_matrix(&datum, &degrees, ell)?;
                let m_gcm = heckenberger_gcm(&braiding)?;
                m_type = identify_type(&m_gcm).iter().filter_map(|c| c.label).collect();
                g0_type = vec![label];
                q_prime_u = Some(1);
                deaffinized = true;
                flags.push(
                    "prose note: q_ij q_ji = q^{-4} = +1 here (a printed remark claims -1), \
                     which is what makes the type A1 x A1"
                        .into(),
                );
                flags.push(
                    "the kernel is an infinite extension tower; it is not generated in \
                     degree one"
                        .into(),
                );
            } else {
                kind = CaseKind::Exotic;
                let report = exotic_verify(label, ell, level)?;
                degrees = report.extended_degrees.clone();
                let fixture = exotic_fixture(label, ell).expect("fixture exists");
                let braiding = braiding_matrix(&datum, &degrees, ell)?;
                let m_gcm = heckenberger_gcm(&braiding)?;
                m_type = identify_type(&m_gcm).iter().filter_map(|c| c.label).collect();
                let sb = braiding_matrix(&datum, &degrees[..datum.size], ell)?;
                let s_gcm = heckenberger_gcm(&sb)?;
                g0_type = identify_type(&s_gcm).iter().filter_map(|c| c.label).collect();
                let ext_type = fixture.extended_type();
                q_prime_u = if ext_type.len() == 1 {
                    standard_braiding_parameter(&braiding, ext_type[0])?
                } else {
                    None
                };
                for c in report.checks.iter().filter(|c| !c.pass) {
                    flags.push(format!("exotic verification failed: {}: {}", c.name, c.detail));
                }
                for f in report.flags {
                    flags.push(f);
                }
            }
        }
    }

    // Diff against the reference table.
    let mut diffs = Vec::new();
    if kind != expected.kind {
        diffs.push(format!("kind: computed {kind}, table says {}", expected.kind));
    }
    if deaffinized != expected.deaffinized {
        diffs.push(format!(
            "deaffinized flag: computed {deaffinized}, table says {}",
            expected.deaffinized
        ));
    }
    if kind != CaseKind::Trivial && !expected.m.is_empty() && !same_type_lists(&m_type, &expected.m)
    {
        diffs.push(format!(
            "M: computed {}, table says {}",
            format_type_list(&m_type),
            format_type_list(&expected.m)
        ));
    }
    let expected_u = expected.q_prime.resolve(ell);
    if kind != CaseKind::Trivial && q_prime_u != expected_u {
        diffs.push(format!(
            "q': computed {q_prime_u:?}, table says {expected_u:?}"
        ));
    }
    let verdict = if expected.ambiguous.is_some() {
        CaseVerdict::Ambiguous
    } else if diffs.is_empty() && !flags.iter().any(|f| f.contains("failed")) {
        CaseVerdict::Pass
    } else {
        CaseVerdict::Fail
    };
    if let Some(a) = expected.ambiguous {
        flags.push(format!("ambiguous table row: {a}"));
    }

    Ok(CaseReport {
        label,
        ell,
        level,
        kind,
        deaffinized,
        m_type,
        g0_type,
        q_prime_u,
        primitive_degrees: degrees,
        flags,
        expected,
        diffs,
        verdict,
    })
}
