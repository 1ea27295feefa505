//! Generator-image maps between presented groups, with verification.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pcp::{Element, PcPresentation};
use crate::structure::subgroup_closure;

/// Names one defining relation of a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationId {
    Power { gen: usize },
    Conjugation { j: usize, k: usize },
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RelationId::Power { gen } => write!(f, "g{}^m", gen + 1),
            RelationId::Conjugation { j, k } => write!(f, "g{}^g{}", j + 1, k + 1),
        }
    }
}

/// A map defined on the source generators. `verified` means every defining
/// relation of the source maps to an identity that holds in the target.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    source: Arc<PcPresentation>,
    target: Arc<PcPresentation>,
    images: Vec<Element>,
    verified: bool,
    failing: Option<RelationId>,
}

/// Evaluates a relation's two sides under candidate generator images.
fn relation_holds(
    src: &PcPresentation,
    dst: &PcPresentation,
    images: &[Element],
    rel: RelationId,
) -> Result<bool> {
    let eval_word = |w: &crate::pcp::Word| -> Result<Element> {
        let mut acc = dst.identity();
        for l in w.letters() {
            let p = dst.element_power(&images[l.gen], l.exp)?;
            acc = dst.multiply(&acc, &p)?;
        }
        Ok(acc)
    };
    match rel {
        RelationId::Power { gen } => {
            let lhs = dst.element_power(&images[gen], src.rel_order(gen) as i64)?;
            Ok(lhs == eval_word(src.power_rhs(gen))?)
        }
        RelationId::Conjugation { j, k } => {
            let lhs = dst.conjugate(&images[j], &images[k])?;
            let rhs = match src.conj_rhs(j, k) {
                Some(w) => eval_word(w)?,
                None => images[j].clone(),
            };
            Ok(lhs == rhs)
        }
    }
}

pub(crate) fn all_relations(src: &PcPresentation) -> Vec<RelationId> {
    let d = src.num_generators();
    let mut rels = Vec::new();
    for gen in 0..d {
        rels.push(RelationId::Power { gen });
    }
    for j in 0..d {
        for k in 0..j {
            rels.push(RelationId::Conjugation { j, k });
        }
    }
    rels
}

/// Verifies the generator-image map; the result carries either the verified
/// stamp or the first failing relation.
pub fn check_homomorphism(
    source: &Arc<PcPresentation>,
    target: &Arc<PcPresentation>,
    images: Vec<Element>,
) -> Result<Homomorphism> {
    if images.len() != source.num_generators() {
        return Err(Error::ArityMismatch {
            expected: source.num_generators(),
            got: images.len(),
        });
    }
    for img in &images {
        target.check_owns(img)?;
    }
    let mut verified = true;
    let mut failing = None;
    for rel in all_relations(source) {
        if !relation_holds(source, target, &images, rel)? {
            verified = false;
            failing = Some(rel);
            break;
        }
    }
    Ok(Homomorphism {
        source: Arc::clone(source),
        target: Arc::clone(target),
        images,
        verified,
        failing,
    })
}

impl Homomorphism {
    pub fn source(&self) -> &Arc<PcPresentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PcPresentation> {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn failing_relation(&self) -> Option<RelationId> {
        self.failing
    }

    /// φ(x) for any element of the source, by mapping its normal form.
    pub fn evaluate(&self, x: &Element) -> Result<Element> {
        self.source.check_owns(x)?;
        let mut acc = self.target.identity();
        for (k, &e) in x.exponents().iter().enumerate() {
            if e != 0 {
                let p = self.target.element_power(&self.images[k], e as i64)?;
                acc = self.target.multiply(&acc, &p)?;
            }
        }
        Ok(acc)
    }

    /// `other ∘ self`; the targets must line up.
    pub fn compose(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if self.target.id() != other.source.id() {
            return Err(Error::PresentationMismatch);
        }
        let images = self
            .images
            .iter()
            .map(|img| other.evaluate(img))
            .collect::<Result<Vec<_>>>()?;
        check_homomorphism(&self.source, &other.target, images)
    }

    pub fn is_identity(&self) -> bool {
        self.source.id() == self.target.id()
            && self
                .images
                .iter()
                .enumerate()
                .all(|(k, img)| img.leading() == Some((k, 1)) && img.exponents().iter().filter(|&&e| e != 0).count() == 1)
    }

    /// Verified + equal group orders + images generate the target.
    pub fn is_bijective(&self) -> Result<bool> {
        if !self.verified {
            return Ok(false);
        }
        self.source.ensure_consistent()?;
        self.target.ensure_consistent()?;
        if self.source.order_product() != self.target.order_product() {
            return Ok(false);
        }
        let image = subgroup_closure(&self.target, &self.images)?;
        Ok(image.order(&self.target) == self.target.order_product())
    }
}
