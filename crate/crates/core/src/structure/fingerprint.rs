//! Isomorphism-invariant fingerprints used as a dedup prefilter: equal for
//! isomorphic groups, frequently different for non-isomorphic ones.

use serde::Serialize;

use crate::error::Result;
use crate::pcp::PcPresentation;

use super::quotient::quotient;
use super::series::{center, class_and_coclass, derived_subgroup, group_order, lower_central_series};

/// Field names are declared in sorted order so the derived JSON object is
/// canonical (sorted keys, multisets as sorted arrays).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Fingerprint {
    /// Invariant factors of G itself when G is abelian, else empty.
    pub abelian_invariants: Vec<u64>,
    /// Invariant factors of G/[G,G].
    pub abelianization: Vec<u64>,
    pub center_order: u64,
    pub class: u32,
    pub coclass: u32,
    /// (element order, multiplicity) pairs, ascending.
    pub element_orders: Vec<(u64, u64)>,
    pub exponent: u64,
    /// |γ_i / γ_{i+1}| along the lower central series.
    pub lower_central_factors: Vec<u64>,
    pub order: u64,
}

impl Fingerprint {
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("fingerprint serializes")
    }
}

pub fn is_abelian(p: &PcPresentation) -> bool {
    let d = p.num_generators();
    (0..d).all(|j| (0..j).all(|k| p.conj_rhs(j, k).is_none()))
}

/// Invariant factors of an abelian 2-group, recovered from the census of
/// x with x^(2^i) = 1: the number of factors of order >= 2^i is
/// log2(|Omega_i| / |Omega_{i-1}|).
fn abelian_invariants_of(p: &PcPresentation) -> Result<Vec<u64>> {
    debug_assert!(is_abelian(p));
    let table = p.table()?;
    let mut counts: Vec<u64> = Vec::new(); // counts[i] = #{x : ord(x) <= 2^i}
    let max_ord = table.elem_order.iter().copied().max().unwrap_or(1);
    let levels = max_ord.trailing_zeros() as usize;
    for i in 0..=levels {
        let c = table
            .elem_order
            .iter()
            .filter(|&&o| o as u64 <= (1u64 << i))
            .count() as u64;
        counts.push(c);
    }
    let mut ranks: Vec<u32> = Vec::new(); // ranks[i] = #factors of order >= 2^(i+1)
    for i in 1..=levels {
        ranks.push((counts[i] / counts[i - 1]).trailing_zeros());
    }
    let mut invariants = Vec::new();
    for i in (1..=levels).rev() {
        let here = ranks[i - 1];
        let above = if i < levels { ranks[i] } else { 0 };
        for _ in 0..(here - above) {
            invariants.push(1u64 << i);
        }
    }
    Ok(invariants)
}

/// Invariant factors of G/[G,G] (and of G itself when G is abelian).
pub fn abelian_invariants(p: &PcPresentation) -> Result<Vec<u64>> {
    p.ensure_consistent()?;
    if is_abelian(p) {
        return abelian_invariants_of(p);
    }
    let ab = quotient(p, &derived_subgroup(p)?)?;
    abelian_invariants_of(&ab)
}

pub fn fingerprint(p: &PcPresentation) -> Result<Fingerprint> {
    p.ensure_consistent()?;
    let order = group_order(p)?;
    let (class, coclass) = class_and_coclass(p)?;
    let series = lower_central_series(p)?;
    let mut lower_central_factors = Vec::new();
    for w in series.terms.windows(2) {
        lower_central_factors.push(w[0].order(p) / w[1].order(p));
    }
    let table = p.table()?;
    let mut census: std::collections::BTreeMap<u64, u64> = Default::default();
    for &o in &table.elem_order {
        *census.entry(o as u64).or_default() += 1;
    }
    let exponent = census.keys().copied().max().unwrap_or(1);
    let abelianization = abelian_invariants(p)?;
    let abelian_invariants = if is_abelian(p) {
        abelianization.clone()
    } else {
        Vec::new()
    };
    Ok(Fingerprint {
        abelian_invariants,
        abelianization,
        center_order: center(p)?.order(p),
        class,
        coclass,
        element_orders: census.into_iter().collect(),
        exponent,
        lower_central_factors,
        order,
    })
}
