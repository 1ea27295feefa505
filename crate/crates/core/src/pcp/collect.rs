//! Collection from the left.
//!
//! A word is a sequence of syllables `g^e`. The collector repeatedly finds
//! the leftmost violation of normal form — a zero or out-of-range exponent,
//! two adjacent syllables of the same generator, or an adjacent pair in the
//! wrong order — and rewrites it with the power and conjugation relations.
//! For a consistent presentation this terminates in the unique normal form;
//! a step budget turns divergence on malformed input into an error.
//!
//! Every rewrite that applies a relation an odd number of times XORs that
//! relation's bit into a mask. The mask is how central-extension tails are
//! evaluated: in an extension where relation r carries a tail `z^{eps_r}`
//! (z central of order 2), the z-exponent produced by collecting a word is
//! exactly the XOR of the tails of the relations applied.

use crate::error::{Error, Result};

use super::presentation::PcPresentation;
use super::word::Letter;

/// Result of a collection: the normal-form exponent vector plus the GF(2)
/// relation-application mask (meaningful only when the presentation has at
/// most 64 relations).
pub(crate) struct Collected {
    pub exps: Vec<u64>,
    pub tail_mask: u64,
}

/// Cap on letters materialized by one rewrite, guarding against inputs like
/// `g^(2^40)` over a nontrivial power relation.
const REWRITE_BLOWUP_CAP: i64 = 1 << 22;

enum Violation {
    Zero(usize),
    Range(usize),
    Merge(usize),
    Swap(usize),
}

impl PcPresentation {
    pub(crate) fn collect_letters(&self, input: &[Letter], budget: u64) -> Result<Collected> {
        let d = self.num_generators();
        let mut word: Vec<Letter> = input.iter().copied().filter(|l| l.exp != 0).collect();
        debug_assert!(word.iter().all(|l| l.gen < d));
        let mut mask: u64 = 0;
        let mut steps: u64 = 0;
        // Everything strictly left of `from` is violation-free.
        let mut from: usize = 0;

        let xor_rel = |mask: &mut u64, idx: usize| {
            if idx < 64 {
                *mask ^= 1 << idx;
            }
        };

        loop {
            let mut violation = None;
            let mut i = from;
            while i < word.len() {
                let Letter { gen, exp } = word[i];
                if exp == 0 {
                    violation = Some(Violation::Zero(i));
                    break;
                }
                let m = self.rel_order(gen) as i64;
                if exp < 0 || exp >= m {
                    violation = Some(Violation::Range(i));
                    break;
                }
                if i + 1 < word.len() {
                    let next = word[i + 1];
                    // A pair rewrite is only safe once the right syllable is
                    // itself reduced; a swap against a negative power would
                    // regress forever. Expand it first.
                    if next.exp == 0 {
                        violation = Some(Violation::Zero(i + 1));
                        break;
                    }
                    let m_next = self.rel_order(next.gen) as i64;
                    if next.gen == gen {
                        violation = Some(Violation::Merge(i));
                        break;
                    }
                    if gen > next.gen {
                        if next.exp < 0 || next.exp >= m_next {
                            violation = Some(Violation::Range(i + 1));
                        } else {
                            violation = Some(Violation::Swap(i));
                        }
                        break;
                    }
                }
                i += 1;
            }

            let Some(v) = violation else {
                let mut exps = vec![0u64; d];
                for l in &word {
                    exps[l.gen] = l.exp as u64;
                }
                return Ok(Collected {
                    exps,
                    tail_mask: mask,
                });
            };

            steps += 1;
            if steps > budget {
                return Err(Error::CollectBudget(budget));
            }

            match v {
                Violation::Zero(i) => {
                    word.remove(i);
                    from = i.saturating_sub(1);
                }
                Violation::Range(i) => {
                    let Letter { gen, exp } = word[i];
                    let m = self.rel_order(gen) as i64;
                    let q = exp.div_euclid(m);
                    let r = exp.rem_euclid(m);
                    let rhs = self.power_rhs(gen);
                    if q.rem_euclid(2) == 1 {
                        xor_rel(&mut mask, self.power_relation_index(gen));
                    }
                    let mut repl: Vec<Letter> = Vec::new();
                    if r != 0 {
                        repl.push(Letter { gen, exp: r });
                    }
                    if !rhs.is_empty() && q != 0 {
                        let copies = q.unsigned_abs() as i64;
                        if copies.saturating_mul(rhs.letters().len() as i64) > REWRITE_BLOWUP_CAP {
                            return Err(Error::ExponentOverflow);
                        }
                        if q > 0 {
                            for _ in 0..copies {
                                repl.extend_from_slice(rhs.letters());
                            }
                        } else {
                            let inv = rhs.inverse();
                            for _ in 0..copies {
                                repl.extend_from_slice(inv.letters());
                            }
                        }
                    }
                    word.splice(i..=i, repl);
                    from = i.saturating_sub(1);
                }
                Violation::Merge(i) => {
                    let e = word[i]
                        .exp
                        .checked_add(word[i + 1].exp)
                        .ok_or(Error::ExponentOverflow)?;
                    word[i].exp = e;
                    word.remove(i + 1);
                    from = i.saturating_sub(1);
                }
                Violation::Swap(i) => {
                    // word[i] = g_j^a (a already in range), word[i+1] = g_k^b, j > k.
                    let a = word[i];
                    let b = word[i + 1];
                    match self.conj_rhs(a.gen, b.gen) {
                        None => {
                            // Trivial action: the syllables commute. Moving
                            // g_k^b past g_j^a applies the relation a*b times.
                            if a.exp & 1 == 1 && b.exp.rem_euclid(2) == 1 {
                                xor_rel(&mut mask, self.conj_relation_index(a.gen, b.gen));
                            }
                            word[i] = b;
                            word[i + 1] = a;
                        }
                        Some(w) => {
                            // g_j^a g_k^b = g_k (g_j^{g_k})^a g_k^{b-1},
                            // and (g_j^{g_k})^a = w^a.
                            if a.exp & 1 == 1 {
                                xor_rel(&mut mask, self.conj_relation_index(a.gen, b.gen));
                            }
                            let mut repl = vec![Letter {
                                gen: b.gen,
                                exp: 1,
                            }];
                            if let [single] = w.letters() {
                                let e = single
                                    .exp
                                    .checked_mul(a.exp)
                                    .ok_or(Error::ExponentOverflow)?;
                                repl.push(Letter {
                                    gen: single.gen,
                                    exp: e,
                                });
                            } else {
                                if a.exp.saturating_mul(w.letters().len() as i64)
                                    > REWRITE_BLOWUP_CAP
                                {
                                    return Err(Error::ExponentOverflow);
                                }
                                for _ in 0..a.exp {
                                    repl.extend_from_slice(w.letters());
                                }
                            }
                            if b.exp != 1 {
                                repl.push(Letter {
                                    gen: b.gen,
                                    exp: b.exp - 1,
                                });
                            }
                            word.splice(i..=i + 1, repl);
                        }
                    }
                    from = i.saturating_sub(1);
                }
            }
        }
    }
}
