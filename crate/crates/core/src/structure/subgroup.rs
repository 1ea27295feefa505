//! Subgroups as induced (echelonized) generating sequences.
//!
//! An induced sequence holds one member per occupied generator level, with
//! strictly increasing leading indices and each leading exponent an exact
//! power of two dividing the relative order. Membership is decided by
//! sifting: repeatedly cancel the leading coordinate against the member at
//! that level. Closure maintains the defining conditions by re-queueing
//! powers and conjugates whenever a level changes.

use crate::error::{Error, Result};
use crate::pcp::{Element, PcPresentation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSequence {
    pres_id: u64,
    members: Vec<Element>,
}

/// Inverse of an odd residue modulo a power of two, by Hensel lifting.
fn inv_odd_mod(odd: u64, m: u64) -> u64 {
    debug_assert!(odd % 2 == 1 && m.is_power_of_two());
    let mut inv: u128 = 1;
    let odd = odd as u128;
    let mask = (m - 1) as u128;
    for _ in 0..6 {
        inv = (inv * (2u128.wrapping_sub(odd.wrapping_mul(inv) & mask) & mask)) & mask;
    }
    debug_assert_eq!((odd * inv) & mask, 1 % m as u128);
    inv as u64
}

fn sift_slots(
    p: &PcPresentation,
    slots: &[Option<Element>],
    x: &Element,
) -> Result<Element> {
    let mut x = x.clone();
    loop {
        let Some((l, c)) = x.leading() else {
            return Ok(x);
        };
        let Some(u) = &slots[l] else {
            return Ok(x);
        };
        let a = u.leading().expect("members are nontrivial").1.trailing_zeros();
        if c.trailing_zeros() < a {
            return Ok(x);
        }
        let q = (c >> a) as i64;
        let u_pow = p.element_power(u, -q)?;
        x = p.multiply(&u_pow, &x)?;
        debug_assert!(x.leading().map(|(l2, _)| l2 > l).unwrap_or(true));
    }
}

/// Scale `x` so its leading exponent becomes an exact power of two.
fn normalize_leading(p: &PcPresentation, x: &Element) -> Result<Element> {
    let (l, c) = x.leading().expect("nontrivial");
    let v = c.trailing_zeros();
    let odd = c >> v;
    if odd == 1 {
        return Ok(x.clone());
    }
    let n = inv_odd_mod(odd, p.rel_order(l));
    let y = p.element_power(x, n as i64)?;
    debug_assert_eq!(y.leading(), Some((l, 1u64 << v)));
    Ok(y)
}

fn closure_slots(
    p: &PcPresentation,
    generators: &[Element],
    normal_under: &[Element],
) -> Result<Vec<Option<Element>>> {
    let d = p.num_generators();
    let mut slots: Vec<Option<Element>> = vec![None; d];
    let mut agenda: Vec<Element> = generators.to_vec();
    for e in generators.iter().chain(normal_under) {
        p.check_owns(e)?;
    }
    while let Some(item) = agenda.pop() {
        let residue = sift_slots(p, &slots, &item)?;
        if residue.is_identity() {
            continue;
        }
        let x = normalize_leading(p, &residue)?;
        let (l, lead) = x.leading().expect("nontrivial");
        if let Some(old) = slots[l].replace(x.clone()) {
            agenda.push(old);
        }
        // Power of the new member into deeper levels.
        let m = p.rel_order(l);
        agenda.push(p.element_power(&x, (m / lead) as i64)?);
        // Conjugation closure within the subgroup...
        let others: Vec<Element> = slots.iter().flatten().cloned().collect();
        for u in others {
            if u != x {
                agenda.push(p.conjugate(&u, &x)?);
                agenda.push(p.conjugate(&x, &u)?);
            }
        }
        // ... and under the prescribed outer conjugators.
        for g in normal_under {
            agenda.push(p.conjugate(&x, g)?);
        }
    }
    Ok(slots)
}

impl InducedSequence {
    fn from_slots(p: &PcPresentation, slots: Vec<Option<Element>>) -> Self {
        InducedSequence {
            pres_id: p.id(),
            members: slots.into_iter().flatten().collect(),
        }
    }

    /// The trivial subgroup.
    pub fn trivial(p: &PcPresentation) -> Self {
        InducedSequence {
            pres_id: p.id(),
            members: Vec::new(),
        }
    }

    /// The whole group: the polycyclic generators are already an induced
    /// sequence.
    pub fn whole_group(p: &PcPresentation) -> Self {
        InducedSequence {
            pres_id: p.id(),
            members: p.generators(),
        }
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn is_trivial(&self) -> bool {
        self.members.is_empty()
    }

    pub(crate) fn check_pres(&self, p: &PcPresentation) -> Result<()> {
        if self.pres_id != p.id() {
            return Err(Error::PresentationMismatch);
        }
        Ok(())
    }

    /// Subgroup order: the product over members of (relative order of the
    /// leading generator) / (leading exponent).
    pub fn order(&self, p: &PcPresentation) -> u64 {
        self.members
            .iter()
            .map(|u| {
                let (l, c) = u.leading().expect("members are nontrivial");
                p.rel_order(l) >> c.trailing_zeros()
            })
            .product()
    }

    pub fn member_at_level(&self, level: usize) -> Option<&Element> {
        self.members
            .iter()
            .find(|u| u.leading().map(|(l, _)| l) == Some(level))
    }

    fn as_slots(&self, p: &PcPresentation) -> Vec<Option<Element>> {
        let mut slots = vec![None; p.num_generators()];
        for u in &self.members {
            let (l, _) = u.leading().expect("nontrivial");
            slots[l] = Some(u.clone());
        }
        slots
    }

    /// Sifts `x` against the sequence; the residue is the identity exactly
    /// when `x` lies in the subgroup.
    pub fn sift(&self, p: &PcPresentation, x: &Element) -> Result<Element> {
        self.check_pres(p)?;
        p.check_owns(x)?;
        sift_slots(p, &self.as_slots(p), x)
    }

    pub fn contains(&self, p: &PcPresentation, x: &Element) -> Result<bool> {
        Ok(self.sift(p, x)?.is_identity())
    }

    /// Containment of subgroups.
    pub fn contains_subgroup(&self, p: &PcPresentation, other: &InducedSequence) -> Result<bool> {
        for u in other.members() {
            if !self.contains(p, u)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All elements of the subgroup, each exactly once.
    pub fn elements(&self, p: &PcPresentation) -> Result<Vec<Element>> {
        let mut out = vec![p.identity()];
        for u in self.members.iter().rev() {
            let (l, c) = u.leading().expect("nontrivial");
            let rel = p.rel_order(l) >> c.trailing_zeros();
            let mut next = Vec::with_capacity(out.len() * rel as usize);
            let mut pow = p.identity();
            for e in 0..rel {
                if e > 0 {
                    pow = p.multiply(&pow, u)?;
                }
                for x in &out {
                    next.push(p.multiply(&pow, x)?);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// True when every member's conjugate by every group generator stays in
    /// the subgroup.
    pub fn is_normal(&self, p: &PcPresentation) -> Result<bool> {
        self.check_pres(p)?;
        for u in &self.members {
            for g in &p.generators() {
                if !self.contains(p, &p.conjugate(u, g)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Induced sequence for the subgroup generated by `generators`.
pub fn subgroup_closure(p: &PcPresentation, generators: &[Element]) -> Result<InducedSequence> {
    p.ensure_consistent()?;
    let slots = closure_slots(p, generators, &[])?;
    Ok(InducedSequence::from_slots(p, slots))
}

/// Induced sequence for the normal closure of `generators` in the whole
/// group.
pub fn normal_closure(p: &PcPresentation, generators: &[Element]) -> Result<InducedSequence> {
    p.ensure_consistent()?;
    let slots = closure_slots(p, generators, &p.generators())?;
    Ok(InducedSequence::from_slots(p, slots))
}
