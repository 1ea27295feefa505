//! Overlap (associativity) testing for power-commutator presentations.
//!
//! A presentation is consistent exactly when the group it presents has order
//! equal to the product of the relative orders, and that holds exactly when
//! all overlap identities collect to equal normal forms on both sides:
//!
//! - `(g_i g_j) g_k` vs `g_i (g_j g_k)` for i > j > k,
//! - `(g_j^{m_j}) g_k` vs `g_j^{m_j-1} (g_j g_k)` for j > k,
//! - `g_j (g_k^{m_k})` vs `(g_j g_k) g_k^{m_k-1}` for j > k,
//! - `g_k^{m_k} g_k` vs `g_k g_k^{m_k}`.
//!
//! Both sides of every identity are collected in full; no tail-condition
//! shortcuts. Overlaps are independent, so they are checked in parallel and
//! the violation list is reported in a canonical order.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::presentation::{exps_to_word, Element, PcPresentation, DEFAULT_COLLECT_BUDGET};
use super::word::Letter;

/// Which overlap identity a violation came from. Indices are 0-based; the
/// `Display` form is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OverlapId {
    /// `g_k^{m_k} g_k` vs `g_k g_k^{m_k}`
    PowerSelf { k: usize },
    /// `(g_j^{m_j}) g_k` vs `g_j^{m_j-1} (g_j g_k)`
    PowerLeft { j: usize, k: usize },
    /// `g_j (g_k^{m_k})` vs `(g_j g_k) g_k^{m_k-1}`
    PowerRight { j: usize, k: usize },
    /// `(g_i g_j) g_k` vs `g_i (g_j g_k)`
    Assoc { i: usize, j: usize, k: usize },
}

impl fmt::Display for OverlapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OverlapId::PowerSelf { k } => write!(f, "g{0}^m g{0} / g{0} g{0}^m", k + 1),
            OverlapId::PowerLeft { j, k } => {
                write!(f, "(g{0}^m) g{1} / g{0}^(m-1) (g{0} g{1})", j + 1, k + 1)
            }
            OverlapId::PowerRight { j, k } => {
                write!(f, "g{0} (g{1}^m) / (g{0} g{1}) g{1}^(m-1)", j + 1, k + 1)
            }
            OverlapId::Assoc { i, j, k } => write!(
                f,
                "(g{0} g{1}) g{2} / g{0} (g{1} g{2})",
                i + 1,
                j + 1,
                k + 1
            ),
        }
    }
}

/// One failed overlap identity with the two distinct normal forms.
#[derive(Debug, Clone)]
pub struct Violation {
    pub overlap: OverlapId,
    pub lhs: Element,
    pub rhs: Element,
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub violations: Vec<Violation>,
}

/// Both collected sides of one overlap identity, with the GF(2) masks of the
/// relations applied along the way (used by the central-extension tails).
pub(crate) struct OverlapSides {
    pub lhs: Vec<u64>,
    pub rhs: Vec<u64>,
    pub lhs_mask: u64,
    pub rhs_mask: u64,
}

fn letters(pairs: &[(usize, i64)]) -> Vec<Letter> {
    pairs
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|&(gen, exp)| Letter { gen, exp })
        .collect()
}

impl PcPresentation {
    /// Enumerates all overlap identities in canonical order.
    pub(crate) fn overlap_ids(&self) -> Vec<OverlapId> {
        let d = self.num_generators();
        let mut ids = Vec::new();
        for k in 0..d {
            ids.push(OverlapId::PowerSelf { k });
        }
        for j in 0..d {
            for k in 0..j {
                ids.push(OverlapId::PowerLeft { j, k });
                ids.push(OverlapId::PowerRight { j, k });
            }
        }
        for i in 0..d {
            for j in 0..i {
                for k in 0..j {
                    ids.push(OverlapId::Assoc { i, j, k });
                }
            }
        }
        ids
    }

    /// Collects both sides of one overlap identity.
    pub(crate) fn overlap_sides(&self, id: OverlapId) -> Result<OverlapSides> {
        let budget = DEFAULT_COLLECT_BUDGET;
        // Collect `prefix ++ nf(inner) ++ suffix`, returning the value and the
        // accumulated relation mask of both collection stages.
        let staged = |prefix: &[Letter], inner: &[Letter], suffix: &[Letter]| -> Result<(Vec<u64>, u64)> {
            let c1 = self.collect_letters(inner, budget)?;
            let mut w: Vec<Letter> = prefix.to_vec();
            w.extend(exps_to_word(&c1.exps).letters().iter().copied());
            w.extend_from_slice(suffix);
            let c2 = self.collect_letters(&w, budget)?;
            Ok((c2.exps, c1.tail_mask ^ c2.tail_mask))
        };
        let plain = |word: &[Letter]| -> Result<(Vec<u64>, u64)> {
            let c = self.collect_letters(word, budget)?;
            Ok((c.exps, c.tail_mask))
        };

        let (l, r) = match id {
            OverlapId::PowerSelf { k } => {
                let rhs_k = self.power_rhs(k).clone();
                let mut lw = rhs_k.letters().to_vec();
                lw.extend(letters(&[(k, 1)]));
                let mut rw = letters(&[(k, 1)]);
                rw.extend(rhs_k.letters().iter().copied());
                let mut l = plain(&lw)?;
                let mut r = plain(&rw)?;
                let bit = mask_bit(self.power_relation_index(k));
                l.1 ^= bit;
                r.1 ^= bit;
                (l, r)
            }
            OverlapId::PowerLeft { j, k } => {
                let m_j = self.rel_order(j) as i64;
                let mut lw = self.power_rhs(j).letters().to_vec();
                lw.extend(letters(&[(k, 1)]));
                let mut l = plain(&lw)?;
                l.1 ^= mask_bit(self.power_relation_index(j));
                let r = staged(&letters(&[(j, m_j - 1)]), &letters(&[(j, 1), (k, 1)]), &[])?;
                (l, r)
            }
            OverlapId::PowerRight { j, k } => {
                let m_k = self.rel_order(k) as i64;
                let mut lw = letters(&[(j, 1)]);
                lw.extend(self.power_rhs(k).letters().iter().copied());
                let mut l = plain(&lw)?;
                l.1 ^= mask_bit(self.power_relation_index(k));
                let r = staged(&[], &letters(&[(j, 1), (k, 1)]), &letters(&[(k, m_k - 1)]))?;
                (l, r)
            }
            OverlapId::Assoc { i, j, k } => {
                let l = staged(&[], &letters(&[(i, 1), (j, 1)]), &letters(&[(k, 1)]))?;
                let r = staged(&letters(&[(i, 1)]), &letters(&[(j, 1), (k, 1)]), &[])?;
                (l, r)
            }
        };
        Ok(OverlapSides {
            lhs: l.0,
            rhs: r.0,
            lhs_mask: l.1,
            rhs_mask: r.1,
        })
    }

    /// Runs every overlap test and reports the violations in canonical order.
    pub fn check_consistency(&self) -> Result<ConsistencyReport> {
        let ids = self.overlap_ids();
        let results: Vec<Result<Option<Violation>>> = ids
            .par_iter()
            .map(|&id| {
                let sides = self.overlap_sides(id)?;
                if sides.lhs == sides.rhs {
                    Ok(None)
                } else {
                    Ok(Some(Violation {
                        overlap: id,
                        lhs: Element {
                            pres_id: self.id(),
                            exps: sides.lhs,
                        },
                        rhs: Element {
                            pres_id: self.id(),
                            exps: sides.rhs,
                        },
                    }))
                }
            })
            .collect();
        let mut violations = Vec::new();
        for r in results {
            if let Some(v) = r? {
                violations.push(v);
            }
        }
        let consistent = violations.is_empty();
        let _ = self.cached_consistency().set(consistent);
        Ok(ConsistencyReport {
            consistent,
            violations,
        })
    }

    /// Cached consistency verdict; runs the full overlap check on first use.
    pub fn is_consistent(&self) -> Result<bool> {
        if let Some(&v) = self.cached_consistency().get() {
            return Ok(v);
        }
        Ok(self.check_consistency()?.consistent)
    }

    pub fn ensure_consistent(&self) -> Result<()> {
        if self.is_consistent()? {
            Ok(())
        } else {
            Err(Error::Inconsistent)
        }
    }

    /// GF(2) constraint rows for the central-extension tail system: for every
    /// overlap identity, the XOR of the relation-application masks of the two
    /// sides. Requires a consistent base presentation.
    pub(crate) fn overlap_tail_rows(&self) -> Result<Vec<u64>> {
        self.ensure_consistent()?;
        let ids = self.overlap_ids();
        let rows: Vec<Result<u64>> = ids
            .par_iter()
            .map(|&id| {
                let sides = self.overlap_sides(id)?;
                debug_assert_eq!(sides.lhs, sides.rhs);
                Ok(sides.lhs_mask ^ sides.rhs_mask)
            })
            .collect();
        let mut out = Vec::new();
        for r in rows {
            let row = r?;
            if row != 0 {
                out.push(row);
            }
        }
        Ok(out)
    }
}

fn mask_bit(idx: usize) -> u64 {
    if idx < 64 {
        1 << idx
    } else {
        0
    }
}
