//! Real root enumeration and isotropic multiplicities.
//!
//! The primary enumeration is the closed-form description of affine real
//! roots, split by the value of `a_0 k`:
//!
//! - `a_0 k = 1`:  Δ̄ + δZ
//! - `a_0 k = 2,3`:  (Δ̄_short + δZ) ∪ (Δ̄_long + kδZ)
//! - `a_0 k = 4`:  (Δ̄_short + δZ) ∪ (Δ̄_long + 2δZ) ∪ (½(Δ̄_long + δ) + δZ)
//!
//! where Δ̄ is the finite parabolic system on `α_1..α_n`. A reflection
//! closure with a coefficient bound serves as an independent oracle; it is
//! only trusted away from its truncation boundary.

use std::collections::BTreeSet;

use crate::datum::{CartanDatum, RootVec, TypeLabel};
use crate::{Error, Result};

/// A finite, negation-closed set of real roots of one datum, enumerated up
/// to a δ-level bound.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub datum: CartanDatum,
    pub roots: BTreeSet<RootVec>,
    /// Bound L on |level|; levels are half-integers only for `a_0 k = 4`.
    pub level_bound: i64,
}

impl RootSet {
    pub fn contains(&self, v: &RootVec) -> bool {
        self.roots.contains(v)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RootVec> {
        self.roots.iter()
    }

    /// Elements whose first nonzero coefficient is positive.
    pub fn positives(&self) -> Vec<RootVec> {
        self.roots.iter().filter(|v| v.is_positive()).cloned().collect()
    }

    /// Restrict to |2·level| <= 2·bound (keeps half-integer levels exact).
    pub fn restrict_level(&self, bound_x2: i64) -> BTreeSet<RootVec> {
        self.roots
            .iter()
            .filter(|v| self.datum.level_x2(v).abs() <= bound_x2)
            .cloned()
            .collect()
    }
}

/// Reflection closure of `seeds` under the simple reflections of the nodes
/// in `active`, keeping only vectors accepted by `keep`.
fn reflection_closure(
    cartan: &[Vec<i64>],
    size: usize,
    active: &[usize],
    seeds: Vec<RootVec>,
    keep: &dyn Fn(&RootVec) -> bool,
) -> BTreeSet<RootVec> {
    let mut set: BTreeSet<RootVec> = BTreeSet::new();
    let mut stack: Vec<RootVec> = Vec::new();
    for s in seeds {
        if keep(&s) && set.insert(s.clone()) {
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for &i in active {
            // s_i(v) = v - <v, α_i^∨> α_i with <v, α_i^∨> = Σ_j a_ij v_j.
            let coeff: i64 = (0..size).map(|j| cartan[i][j] * v.0[j]).sum();
            let mut w = v.clone();
            w.0[i] -= coeff;
            if keep(&w) && !set.contains(&w) {
                set.insert(w.clone());
                stack.push(w);
            }
        }
    }
    set
}

/// Full root set of a finite datum by reflection closure of the simple
/// roots. Terminates because the system is finite.
pub fn finite_roots(datum: &CartanDatum) -> Result<RootSet> {
    if datum.is_affine() {
        return Err(Error::ExpectedFinite(datum.label.to_string()));
    }
    let active: Vec<usize> = (0..datum.size).collect();
    let seeds: Vec<RootVec> = active.iter().map(|&i| datum.simple(i)).collect();
    let roots = reflection_closure(&datum.cartan, datum.size, &active, seeds, &|_| true);
    Ok(RootSet {
        datum: datum.clone(),
        roots,
        level_bound: 0,
    })
}

/// The finite parabolic root system on `α_1..α_n` of an affine datum,
/// embedded in the affine lattice (coefficient 0 at `α_0`).
fn parabolic_roots(datum: &CartanDatum) -> BTreeSet<RootVec> {
    let active: Vec<usize> = (1..datum.size).collect();
    let seeds: Vec<RootVec> = active.iter().map(|&i| datum.simple(i)).collect();
    reflection_closure(&datum.cartan, datum.size, &active, seeds, &|_| true)
}

/// Closed-form enumeration of the real roots of an affine datum, truncated
/// to |level| <= `level_bound`.
pub fn real_roots(datum: &CartanDatum, level_bound: i64) -> Result<RootSet> {
    if !datum.is_affine() {
        return Err(Error::ExpectedAffine(datum.label.to_string()));
    }
    if level_bound < 0 {
        return Err(Error::LevelTooSmall(level_bound, 0));
    }
    let delta = datum.delta()?;
    let bar = parabolic_roots(datum);
    let a0k = datum.a0 * datum.k;
    let mut roots: BTreeSet<RootVec> = BTreeSet::new();
    let mut push_family = |base: &RootVec, period: i64| {
        // base + m·(period·δ), truncated to |level(base) + m·period| <= L.
        let base_x2 = datum.level_x2(base);
        for m in -(2 * level_bound + 2)..=(2 * level_bound + 2) {
            let lvl_x2 = base_x2 + 2 * m * period;
            if lvl_x2.abs() <= 2 * level_bound {
                roots.insert(base.add(&delta.scale(m * period)));
            }
        }
    };
    match a0k {
        1 => {
            for v in &bar {
                push_family(v, 1);
            }
        }
        2 | 3 => {
            let k = datum.k;
            for v in &bar {
                if datum.norm(v) == 2 {
                    push_family(v, 1);
                } else {
                    push_family(v, k);
                }
            }
        }
        4 => {
            for v in &bar {
                if datum.norm(v) == 4 {
                    push_family(v, 1);
                } else {
                    // long roots (norm 8) sit at 2δZ; their halves shifted by δ/2.
                    push_family(v, 2);
                    let shifted = v.add(&delta);
                    debug_assert!(shifted.0.iter().all(|c| c % 2 == 0));
                    let half = RootVec(shifted.0.iter().map(|c| c / 2).collect());
                    debug_assert_eq!(datum.norm(&half), 2);
                    push_family(&half, 1);
                }
            }
        }
        _ => unreachable!(),
    }
    Ok(RootSet {
        datum: datum.clone(),
        roots,
        level_bound,
    })
}

/// Reflection-closure oracle: closure of the simple roots under all simple
/// reflections, discarding vectors with any |coefficient| > `coeff_bound`.
/// Near the bound the truncation produces boundary artifacts, so agreement
/// with [`real_roots`] is only asserted on an interior region.
pub fn real_roots_by_reflection(datum: &CartanDatum, coeff_bound: i64) -> RootSet {
    let active: Vec<usize> = (0..datum.size).collect();
    let seeds: Vec<RootVec> = active.iter().map(|&i| datum.simple(i)).collect();
    let keep = move |v: &RootVec| v.0.iter().all(|c| c.abs() <= coeff_bound);
    let roots = reflection_closure(&datum.cartan, datum.size, &active, seeds, &keep);
    RootSet {
        datum: datum.clone(),
        roots,
        level_bound: i64::MAX,
    }
}

/// Multiplicity of the isotropic root `mδ`.
///
/// The multiplicity is `n = rank(Δ̄)` except for the twisted families, where
/// odd (resp. 3∤m) layers are thinner.
pub fn isotropic_multiplicity(label: TypeLabel, m: i64) -> Result<i64> {
    use crate::datum::{Family, Twist};
    if !label.is_affine() {
        return Err(Error::ExpectedAffine(label.to_string()));
    }
    if m == 0 {
        return Err(Error::ZeroIsotropicMultiple);
    }
    let n = (label.size() - 1) as i64;
    let mult = match (label.family, label.twist) {
        (Family::A, Twist::Two) if label.rank_param % 2 == 1 => {
            // A_{2n-1}^(2)
            if m % 2 != 0 {
                n - 1
            } else {
                n
            }
        }
        (Family::D, Twist::Two) => {
            if m % 2 != 0 {
                1
            } else {
                n
            }
        }
        (Family::E, Twist::Two) => {
            if m % 2 != 0 {
                2
            } else {
                n
            }
        }
        (Family::D, Twist::Three) => {
            if m % 3 != 0 {
                1
            } else {
                n
            }
        }
        _ => n,
    };
    Ok(mult)
}

/// Isotropic multiplicity table of one affine label.
#[derive(Debug, Clone)]
pub struct MultTable {
    pub label: TypeLabel,
}

impl MultTable {
    pub fn new(label: TypeLabel) -> Result<Self> {
        if !label.is_affine() {
            return Err(Error::ExpectedAffine(label.to_string()));
        }
        Ok(MultTable { label })
    }

    pub fn multiplicity(&self, m: i64) -> Result<i64> {
        isotropic_multiplicity(self.label, m)
    }
}
