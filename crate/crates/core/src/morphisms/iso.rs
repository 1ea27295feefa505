//! Isomorphism testing: fingerprint and cell-profile prefilters, then the
//! backtracking search for a verified bijective generator-image map. An
//! exhausted search certifies non-isomorphism.

use std::sync::Arc;

use crate::error::Result;
use crate::pcp::PcPresentation;
use crate::structure::fingerprint;

use super::hom::{check_homomorphism, Homomorphism};
use super::search::{dfs, GroupData, LeafAction, SearchBudget};

pub fn isomorphism(
    p1: &Arc<PcPresentation>,
    p2: &Arc<PcPresentation>,
    budget: &SearchBudget,
) -> Result<Option<Homomorphism>> {
    p1.ensure_consistent()?;
    p2.ensure_consistent()?;
    if p1.order_product() != p2.order_product() {
        return Ok(None);
    }
    if p1.id() == p2.id() {
        // identity map on equal presentations
        let images = p1.generators();
        let hom = check_homomorphism(p1, p2, images)?;
        debug_assert!(hom.is_verified());
        return Ok(Some(hom));
    }
    if fingerprint(p1)? != fingerprint(p2)? {
        return Ok(None);
    }
    let src = GroupData::build(p1)?;
    let dst = GroupData::build(p2)?;
    if src.cell_profile() != dst.cell_profile() {
        return Ok(None);
    }
    let mut found: Option<Vec<u32>> = None;
    dfs(&src, &dst, budget, |images| {
        found = Some(images.to_vec());
        Ok(LeafAction::Stop)
    })?;
    match found {
        None => Ok(None),
        Some(images) => {
            let elements = images
                .iter()
                .map(|&r| dst.table.element(p2, r))
                .collect::<Vec<_>>();
            let hom = check_homomorphism(p1, p2, elements)?;
            debug_assert!(hom.is_verified());
            debug_assert!(hom.is_bijective()?);
            Ok(Some(hom))
        }
    }
}
