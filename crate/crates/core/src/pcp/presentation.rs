use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::table::ElementTable;

use super::word::{Letter, Word};

/// Largest relative order accepted for a single generator. Keeps every
/// exponent product used by collection inside `i64`.
pub const MAX_REL_ORDER: u64 = 1 << 31;

/// Step budget for a single collection call. A malformed presentation can
/// make collection diverge; exceeding the budget reports an error instead.
pub const DEFAULT_COLLECT_BUDGET: u64 = 10_000_000;

/// A finite 2-group encoded by a power-commutator presentation: generators
/// `g1..gd` with relative orders `m_k` (powers of two), power relations
/// `g_k^{m_k} = w_k` and conjugation relations `g_j^{g_k} = w_{jk}` (j > k),
/// where every right-hand side only references generators with index > k.
///
/// Right-hand sides are stored in collected canonical form. Values are
/// immutable after construction, so presentations can be shared freely
/// across threads.
#[derive(Debug)]
pub struct PcPresentation {
    rel_orders: Vec<u64>,
    power_rhs: Vec<Word>,
    /// Dense (j, k) -> rhs for j > k; `None` means the trivial action
    /// `g_j^{g_k} = g_j`.
    conj_rhs: Vec<Option<Word>>,
    id: u64,
    consistent: OnceLock<bool>,
    pub(crate) table_cache: OnceLock<Option<Arc<ElementTable>>>,
}

impl Clone for PcPresentation {
    fn clone(&self) -> Self {
        PcPresentation {
            rel_orders: self.rel_orders.clone(),
            power_rhs: self.power_rhs.clone(),
            conj_rhs: self.conj_rhs.clone(),
            id: self.id,
            consistent: self.consistent.clone(),
            table_cache: OnceLock::new(),
        }
    }
}

impl PartialEq for PcPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.rel_orders == other.rel_orders
            && self.power_rhs == other.power_rhs
            && self.conj_rhs == other.conj_rhs
    }
}
impl Eq for PcPresentation {}

/// A normal-form element `g1^{e_1} ... gd^{e_d}` with `0 <= e_k < m_k`,
/// tagged with the id of the presentation it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    pub(crate) pres_id: u64,
    pub(crate) exps: Vec<u64>,
}

impl Element {
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Index and exponent of the first nontrivial coordinate.
    pub fn leading(&self) -> Option<(usize, u64)> {
        self.exps
            .iter()
            .enumerate()
            .find(|(_, &e)| e != 0)
            .map(|(k, &e)| (k, e))
    }
}

fn is_power_of_two_ge2(m: u64) -> bool {
    m >= 2 && m.is_power_of_two()
}

impl PcPresentation {
    /// Builds a presentation from raw parts. `powers[k]` is the RHS of
    /// `g_k^{m_k}` (empty = identity); `conjs` lists `(j, k, rhs)` for
    /// nontrivial conjugation relations, `j > k`. Indices are 0-based.
    /// Right-hand sides are validated and brought to collected form.
    pub fn from_parts(
        rel_orders: Vec<u64>,
        powers: Vec<Word>,
        conjs: Vec<(usize, usize, Word)>,
    ) -> Result<Self> {
        let d = rel_orders.len();
        for &m in &rel_orders {
            if !is_power_of_two_ge2(m) || m > MAX_REL_ORDER {
                return Err(Error::BadRelativeOrder(m));
            }
        }
        if powers.len() != d {
            return Err(Error::InvalidParameter(format!(
                "expected {} power relations, got {}",
                d,
                powers.len()
            )));
        }
        let check_rhs = |gen: usize, w: &Word| -> Result<()> {
            for l in w.letters() {
                if l.gen >= d {
                    return Err(Error::IndexOutOfRange(l.gen, d));
                }
                if l.gen <= gen {
                    return Err(Error::RhsIndexNotLater {
                        gen,
                        offender: l.gen,
                    });
                }
            }
            Ok(())
        };
        for (k, w) in powers.iter().enumerate() {
            check_rhs(k, w)?;
        }
        let mut conj_rhs: Vec<Option<Word>> = vec![None; d * d];
        for (j, k, w) in conjs {
            if j >= d {
                return Err(Error::IndexOutOfRange(j, d));
            }
            if k >= j {
                return Err(Error::InvalidParameter(format!(
                    "conjugation relation needs j > k, got g{}^g{}",
                    j + 1,
                    k + 1
                )));
            }
            check_rhs(k, &w)?;
            conj_rhs[j * d + k] = Some(w);
        }

        let mut raw = PcPresentation {
            rel_orders,
            power_rhs: powers,
            conj_rhs,
            id: 0,
            consistent: OnceLock::new(),
            table_cache: OnceLock::new(),
        };
        raw.canonicalize()?;
        raw.id = raw.content_hash();
        Ok(raw)
    }

    /// Rewrites every RHS into its collected normal form. A RHS over
    /// generators > k stays over generators > k, so the polycyclic shape is
    /// preserved; a conjugation RHS that collects to `g_j` alone becomes the
    /// implicit trivial action.
    fn canonicalize(&mut self) -> Result<()> {
        let d = self.num_generators();
        for k in 0..d {
            if !self.power_rhs[k].is_empty() {
                let nf = self.collect_letters(self.power_rhs[k].letters(), DEFAULT_COLLECT_BUDGET)?;
                debug_assert!(nf.exps[..=k].iter().all(|&e| e == 0));
                self.power_rhs[k] = exps_to_word(&nf.exps);
            }
        }
        for j in 0..d {
            for k in 0..j {
                if let Some(w) = self.conj_rhs[j * d + k].take() {
                    let nf = self.collect_letters(w.letters(), DEFAULT_COLLECT_BUDGET)?;
                    debug_assert!(nf.exps[..=k].iter().all(|&e| e == 0));
                    let canon = exps_to_word(&nf.exps);
                    let trivial = canon.letters() == [Letter { gen: j, exp: 1 }];
                    if !trivial {
                        self.conj_rhs[j * d + k] = Some(canon);
                    }
                }
            }
        }
        Ok(())
    }

    fn content_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.rel_orders.hash(&mut h);
        self.power_rhs.hash(&mut h);
        self.conj_rhs.hash(&mut h);
        h.finish()
    }

    pub fn num_generators(&self) -> usize {
        self.rel_orders.len()
    }

    pub fn rel_orders(&self) -> &[u64] {
        &self.rel_orders
    }

    pub fn rel_order(&self, k: usize) -> u64 {
        self.rel_orders[k]
    }

    /// Product of the relative orders. Equals the group order exactly when
    /// the presentation is consistent.
    pub fn order_product(&self) -> u64 {
        self.rel_orders.iter().product()
    }

    pub fn power_rhs(&self, k: usize) -> &Word {
        &self.power_rhs[k]
    }

    /// Stored conjugation RHS; `None` encodes the trivial action.
    pub fn conj_rhs(&self, j: usize, k: usize) -> Option<&Word> {
        debug_assert!(j > k);
        self.conj_rhs[j * self.num_generators() + k].as_ref()
    }

    /// Identifier derived from the canonical content; equal presentations
    /// share it within a process.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub(crate) fn cached_consistency(&self) -> &OnceLock<bool> {
        &self.consistent
    }

    pub fn identity(&self) -> Element {
        Element {
            pres_id: self.id,
            exps: vec![0; self.num_generators()],
        }
    }

    pub fn generator(&self, k: usize) -> Result<Element> {
        if k >= self.num_generators() {
            return Err(Error::IndexOutOfRange(k, self.num_generators()));
        }
        let mut e = self.identity();
        e.exps[k] = 1;
        Ok(e)
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.num_generators())
            .map(|k| self.generator(k).expect("index in range"))
            .collect()
    }

    pub fn element_from_exponents(&self, exps: &[u64]) -> Result<Element> {
        if exps.len() != self.num_generators() {
            return Err(Error::ArityMismatch {
                expected: self.num_generators(),
                got: exps.len(),
            });
        }
        for (k, &e) in exps.iter().enumerate() {
            if e >= self.rel_orders[k] {
                return Err(Error::InvalidParameter(format!(
                    "exponent {} at g{} exceeds relative order {}",
                    e,
                    k + 1,
                    self.rel_orders[k]
                )));
            }
        }
        Ok(Element {
            pres_id: self.id,
            exps: exps.to_vec(),
        })
    }

    pub(crate) fn check_owns(&self, e: &Element) -> Result<()> {
        if e.pres_id != self.id || e.exps.len() != self.num_generators() {
            return Err(Error::PresentationMismatch);
        }
        Ok(())
    }

    /// Normal-form word of an element.
    pub fn word_of(&self, e: &Element) -> Word {
        exps_to_word(&e.exps)
    }

    /// Collects an arbitrary word to its normal form.
    pub fn normalize(&self, w: &Word) -> Result<Element> {
        for l in w.letters() {
            if l.gen >= self.num_generators() {
                return Err(Error::IndexOutOfRange(l.gen, self.num_generators()));
            }
        }
        let c = self.collect_letters(w.letters(), DEFAULT_COLLECT_BUDGET)?;
        Ok(Element {
            pres_id: self.id,
            exps: c.exps,
        })
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_owns(a)?;
        self.check_owns(b)?;
        let mut letters = word_letters(&a.exps);
        letters.extend(word_letters(&b.exps));
        let c = self.collect_letters(&letters, DEFAULT_COLLECT_BUDGET)?;
        Ok(Element {
            pres_id: self.id,
            exps: c.exps,
        })
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        self.check_owns(a)?;
        let letters: Vec<Letter> = word_letters(&a.exps)
            .into_iter()
            .rev()
            .map(|l| Letter {
                gen: l.gen,
                exp: -l.exp,
            })
            .collect();
        let c = self.collect_letters(&letters, DEFAULT_COLLECT_BUDGET)?;
        Ok(Element {
            pres_id: self.id,
            exps: c.exps,
        })
    }

    /// `a^n` by binary exponentiation; negative `n` goes through the inverse.
    pub fn element_power(&self, a: &Element, n: i64) -> Result<Element> {
        self.check_owns(a)?;
        let mut base = if n < 0 { self.inverse(a)? } else { a.clone() };
        let mut n = n.unsigned_abs();
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.multiply(&acc, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.multiply(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `b^{-1} a b`.
    pub fn conjugate(&self, a: &Element, b: &Element) -> Result<Element> {
        let bi = self.inverse(b)?;
        let t = self.multiply(&bi, a)?;
        self.multiply(&t, b)
    }

    /// `a^{-1} b^{-1} a b`.
    pub fn commutator(&self, a: &Element, b: &Element) -> Result<Element> {
        let ai = self.inverse(a)?;
        let bi = self.inverse(b)?;
        let t = self.multiply(&ai, &bi)?;
        let t = self.multiply(&t, a)?;
        self.multiply(&t, b)
    }

    /// Least `n >= 1` with `a^n = 1`; always a power of two here. Repeated
    /// squaring diverging past 2^63 signals an inconsistent presentation.
    pub fn element_order(&self, a: &Element) -> Result<u64> {
        self.check_owns(a)?;
        let mut y = a.clone();
        let mut ord: u64 = 1;
        for _ in 0..64 {
            if y.is_identity() {
                return Ok(ord);
            }
            y = self.multiply(&y, &y)?;
            ord <<= 1;
        }
        Err(Error::Inconsistent)
    }

    /// Relation index used by tail bookkeeping: power relations first, then
    /// conjugation pairs in a fixed triangular order.
    pub(crate) fn relation_count(&self) -> usize {
        let d = self.num_generators();
        d + d * (d - 1) / 2
    }

    pub(crate) fn power_relation_index(&self, k: usize) -> usize {
        k
    }

    pub(crate) fn conj_relation_index(&self, j: usize, k: usize) -> usize {
        debug_assert!(j > k);
        self.num_generators() + j * (j - 1) / 2 + k
    }
}

pub(crate) fn word_letters(exps: &[u64]) -> Vec<Letter> {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(gen, &e)| Letter {
            gen,
            exp: e as i64,
        })
        .collect()
}

pub(crate) fn exps_to_word(exps: &[u64]) -> Word {
    Word::from_letters(word_letters(exps))
}
