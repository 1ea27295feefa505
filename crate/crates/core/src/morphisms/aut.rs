//! Automorphism-group order with odd-part extraction.
//!
//! |Aut(G)| is the exact number of accepted leaves of the backtracking
//! search of a group against itself. The report factors it as 2^a * q with
//! q odd; when q > 1 an odd-order witness automorphism is extracted — the
//! lexicographically least odd-order automorphism in image order.

use std::sync::Arc;
use std::time::Instant;

use serde_json::json;

use crate::error::{Error, Result};
use crate::pcp::PcPresentation;

use super::hom::{check_homomorphism, Homomorphism};
use super::search::{
    dfs, perm_is_identity, perm_odd_part, perm_order_is_odd, permutation, GroupData, LeafAction,
    SearchBudget,
};

/// Default group-order ceiling for full automorphism counting.
pub const AUT_ORDER_CEILING: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct AutReport {
    /// |Aut(G)| = 2^two_part_exponent * odd_part.
    pub two_part_exponent: u32,
    pub odd_part: u64,
    /// Present exactly when odd_part > 1; a verified automorphism of odd
    /// order > 1.
    pub odd_witness: Option<Homomorphism>,
    pub stats: SearchStats,
}

impl AutReport {
    pub fn aut_order(&self) -> u64 {
        (1u64 << self.two_part_exponent) * self.odd_part
    }

    pub fn is_2_group(&self) -> bool {
        self.odd_part == 1
    }

    /// The wire shape: order_two_exponent, odd_part, is_2_group, witness.
    pub fn to_json(&self) -> serde_json::Value {
        let witness = self.odd_witness.as_ref().map(|h| {
            json!({
                "images": h.images().iter().map(|e| e.exponents().to_vec()).collect::<Vec<_>>(),
            })
        });
        json!({
            "order_two_exponent": self.two_part_exponent,
            "odd_part": self.odd_part,
            "is_2_group": self.is_2_group(),
            "witness": witness,
        })
    }
}

fn ensure_aut_ceiling(p: &PcPresentation) -> Result<()> {
    p.ensure_consistent()?;
    let order = p.order_product();
    if order > AUT_ORDER_CEILING {
        return Err(Error::OrderCeiling {
            order,
            ceiling: AUT_ORDER_CEILING,
        });
    }
    Ok(())
}

/// Exact |Aut(G)| as 2^a * q, with an odd-order witness when q > 1.
pub fn automorphism_order(p: &Arc<PcPresentation>, budget: &SearchBudget) -> Result<AutReport> {
    ensure_aut_ceiling(p)?;
    let started = Instant::now();
    let data = GroupData::build(p)?;
    let result = dfs(&data, &data, budget, |_| Ok(LeafAction::Continue))?;
    let count = result.leaves;
    debug_assert!(count > 0, "the identity map is always an automorphism");
    let two_part_exponent = count.trailing_zeros();
    let odd_part = count >> two_part_exponent;

    let mut odd_witness = None;
    let mut witness_nodes = 0;
    if odd_part > 1 {
        // Second pass: first leaf in lexicographic order whose permutation
        // has odd order.
        let mut found: Option<Vec<u32>> = None;
        let witness_result = dfs(&data, &data, budget, |images| {
            let perm = permutation(&data, &data, images);
            if !perm_is_identity(&perm) && perm_order_is_odd(&perm) {
                found = Some(images.to_vec());
                return Ok(LeafAction::Stop);
            }
            Ok(LeafAction::Continue)
        })?;
        witness_nodes = witness_result.nodes;
        let images = found.expect("odd part > 1 implies an odd-order automorphism exists");
        let elements = images
            .iter()
            .map(|&r| data.table.element(p, r))
            .collect::<Vec<_>>();
        let hom = check_homomorphism(p, p, elements)?;
        debug_assert!(hom.is_verified());
        odd_witness = Some(hom);
    }

    Ok(AutReport {
        two_part_exponent,
        odd_part,
        odd_witness,
        stats: SearchStats {
            nodes: result.nodes + witness_nodes,
            wall_seconds: started.elapsed().as_secs_f64(),
        },
    })
}

/// Whether Aut(G) is a 2-group. May exit early once an odd-order
/// automorphism shows up; the full count decides otherwise.
pub fn is_aut_2_group(p: &Arc<PcPresentation>, budget: &SearchBudget) -> Result<bool> {
    ensure_aut_ceiling(p)?;
    let data = GroupData::build(p)?;
    let mut leaves_seen = 0u64;
    let mut odd_found = false;
    let result = dfs(&data, &data, budget, |images| {
        leaves_seen += 1;
        // Periodic probe: the 2^s-th power of an even-order automorphism is
        // its odd part; nontrivial means Aut is not a 2-group.
        if leaves_seen.is_multiple_of(64) {
            let perm = permutation(&data, &data, images);
            let odd = perm_odd_part(&perm);
            if !perm_is_identity(&odd) {
                odd_found = true;
                return Ok(LeafAction::Stop);
            }
        }
        Ok(LeafAction::Continue)
    })?;
    if odd_found {
        return Ok(false);
    }
    let count = result.leaves;
    Ok(count >> count.trailing_zeros() == 1)
}

