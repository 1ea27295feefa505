//! Homomorphism verification, isomorphism testing, and automorphism-group
//! orders — the machinery behind every "Aut is / is not a 2-group" answer.

mod aut;
mod hom;
mod iso;
mod search;

pub use aut::{automorphism_order, is_aut_2_group, AutReport, SearchStats, AUT_ORDER_CEILING};
pub use hom::{check_homomorphism, Homomorphism, RelationId};
pub use iso::isomorphism;
pub use search::SearchBudget;

use std::sync::Arc;

use crate::error::Result;
use crate::pcp::PcPresentation;

/// Refined presentation with every relative order 2, plus the verified
/// isomorphism from the original onto it.
pub fn refine_presentation(
    p: &Arc<PcPresentation>,
) -> Result<(Arc<PcPresentation>, Homomorphism)> {
    let (refined, image_exps) = crate::pcp::refine_parts(p)?;
    let refined = Arc::new(refined);
    let images = image_exps
        .iter()
        .map(|exps| refined.element_from_exponents(exps))
        .collect::<Result<Vec<_>>>()?;
    let hom = check_homomorphism(p, &refined, images)?;
    debug_assert!(hom.is_verified());
    Ok((refined, hom))
}

#[cfg(test)]
mod tests;
