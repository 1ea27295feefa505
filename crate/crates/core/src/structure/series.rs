//! Characteristic series and the class/coclass invariants.

use crate::error::{Error, Result};
use crate::pcp::{Element, PcPresentation};

use super::subgroup::{normal_closure, subgroup_closure, InducedSequence};

/// A descending chain of labelled subgroups, e.g. the lower central series
/// γ1 ⊇ γ2 ⊇ ... ⊇ 1.
#[derive(Debug, Clone)]
pub struct SubgroupChain {
    pub labels: Vec<String>,
    pub terms: Vec<InducedSequence>,
}

impl SubgroupChain {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn group_order(p: &PcPresentation) -> Result<u64> {
    p.ensure_consistent()?;
    Ok(p.order_product())
}

/// γ1 = G, γ_{i+1} = [γ_i, G], computed as the normal closure of the
/// commutators of γ_i's sequence members with the group generators.
/// Terminates at the identity; 2-groups are nilpotent.
pub fn lower_central_series(p: &PcPresentation) -> Result<SubgroupChain> {
    p.ensure_consistent()?;
    let mut terms = vec![InducedSequence::whole_group(p)];
    let gens = p.generators();
    loop {
        let current = terms.last().expect("nonempty");
        if current.is_trivial() {
            break;
        }
        let mut commutators: Vec<Element> = Vec::new();
        for u in current.members() {
            for g in &gens {
                let c = p.commutator(u, g)?;
                if !c.is_identity() {
                    commutators.push(c);
                }
            }
        }
        let next = normal_closure(p, &commutators)?;
        if !current.is_trivial() && next.order(p) >= current.order(p) {
            // cannot happen for a consistent 2-group presentation
            return Err(Error::Inconsistent);
        }
        terms.push(next);
    }
    let labels = (1..=terms.len()).map(|i| format!("γ{i}")).collect();
    Ok(SubgroupChain { labels, terms })
}

/// Commutator subgroup [G, G].
pub fn derived_subgroup(p: &PcPresentation) -> Result<InducedSequence> {
    p.ensure_consistent()?;
    let gens = p.generators();
    let mut commutators = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in gens.iter().skip(i + 1) {
            let c = p.commutator(a, b)?;
            if !c.is_identity() {
                commutators.push(c);
            }
        }
    }
    normal_closure(p, &commutators)
}

/// Center by exhaustive centralizer scan over all normal forms. Bounded by
/// the dense-table ceiling, which covers every order this crate computes
/// with.
pub fn center(p: &PcPresentation) -> Result<InducedSequence> {
    let table = p.table()?;
    let gens: Vec<u32> = table.gen_rank.clone();
    let mut central: Vec<Element> = Vec::new();
    for x in 0..table.len() as u32 {
        if gens
            .iter()
            .all(|&g| table.mul(x, g) == table.mul(g, x))
        {
            central.push(table.element(p, x));
        }
    }
    subgroup_closure(p, &central)
}

/// Nilpotency class and coclass. The trivial group gets (0, 0) so the
/// arithmetic stays total; callers exclude it from coclass-r vertex sets.
pub fn class_and_coclass(p: &PcPresentation) -> Result<(u32, u32)> {
    let series = lower_central_series(p)?;
    let class = (series.len() - 1) as u32;
    let n = group_order(p)?.trailing_zeros();
    Ok((class, n - class))
}
