//! Central extensions by C2 via relation tails.
//!
//! Extending a consistent G by a new central generator z of order 2 means
//! giving every relation of G an optional factor z^eps. Collecting both
//! sides of each overlap identity applies the same relations as in G, so
//! the z-exponents of the two sides are GF(2)-linear forms in the tail
//! bits, and the extension is consistent exactly when they agree: the
//! consistent tail vectors are a nullspace. Replacing the lifts g_k by
//! g_k z^(delta_k) changes tails linearly without changing the extension,
//! so one representative per coset of that change subspace is enough; every
//! central extension of C2 by G still shows up.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf2::{nullspace, Gf2Basis};
use crate::pcp::{Letter, PcPresentation, Word};

/// Hard cap on the number of emitted representatives per base group.
pub const EXTENSION_CAP_BITS: usize = 20;

#[derive(Debug)]
pub struct TailSystem {
    base: Arc<PcPresentation>,
    solution_dim: usize,
    lift_dim: usize,
    /// Complement of the lift-change subspace inside the solution space;
    /// XOR-combinations enumerate one tail vector per extension-equivalence
    /// coset.
    rep_basis: Vec<u64>,
}

impl TailSystem {
    pub fn build(base: &Arc<PcPresentation>) -> Result<TailSystem> {
        base.ensure_consistent()?;
        let d = base.num_generators();
        let n_rel = base.relation_count();
        if n_rel > 64 {
            return Err(Error::InvalidParameter(format!(
                "{n_rel} relations exceed the 64-bit tail budget"
            )));
        }

        let constraints = base.overlap_tail_rows()?;
        let solutions = nullspace(&constraints, n_rel);

        // Lift-change image: column per generator delta.
        let mut lift = Gf2Basis::default();
        let mut solution_basis = Gf2Basis::default();
        for &s in &solutions {
            solution_basis.insert(s);
        }
        for k in 0..d {
            let mut col = 0u64;
            for j in 0..d {
                // power relation of g_j: sum of exponents of g_k in the rhs
                let parity = rhs_exponent_parity(base.power_rhs(j), k);
                if parity {
                    col ^= 1 << base.power_relation_index(j);
                }
            }
            for j in 0..d {
                for kk in 0..j {
                    // conj relation g_j^{g_kk}: delta_j + letters of g_k
                    let Some(w) = base.conj_rhs(j, kk) else {
                        continue; // trivial rhs g_j contributes delta_j twice
                    };
                    let mut parity = rhs_exponent_parity(w, k);
                    if j == k {
                        parity = !parity;
                    }
                    if parity {
                        col ^= 1 << base.conj_relation_index(j, kk);
                    }
                }
            }
            if col != 0 {
                debug_assert!(
                    solution_basis.contains(col),
                    "lift changes stay inside the solution space"
                );
                lift.insert(col);
            }
        }

        let mut extended = lift.clone();
        let mut rep_basis = Vec::new();
        for &s in &solutions {
            if extended.insert(s) {
                rep_basis.push(s);
            }
        }
        if rep_basis.len() > EXTENSION_CAP_BITS {
            return Err(Error::ExtensionBlowup {
                dim: rep_basis.len(),
                cap: EXTENSION_CAP_BITS,
            });
        }
        Ok(TailSystem {
            base: Arc::clone(base),
            solution_dim: solutions.len(),
            lift_dim: lift.rank(),
            rep_basis,
        })
    }

    pub fn solution_dim(&self) -> usize {
        self.solution_dim
    }

    pub fn lift_change_dim(&self) -> usize {
        self.lift_dim
    }

    pub fn representative_count(&self) -> u64 {
        1u64 << self.rep_basis.len()
    }

    /// Tail vectors, one per extension coset, in a fixed counter order.
    pub fn representatives(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.representative_count()).map(move |mask| {
            let mut v = 0u64;
            for (bit, basis) in self.rep_basis.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    v ^= basis;
                }
            }
            v
        })
    }

    /// The presentation with a new last central generator z of order 2 and
    /// tails per `tail_bits`. Consistent for every representative.
    pub fn materialize(&self, tail_bits: u64) -> Result<PcPresentation> {
        let p = self.base.as_ref();
        let d = p.num_generators();
        let z = d;
        let mut rel_orders = p.rel_orders().to_vec();
        rel_orders.push(2);

        let with_tail = |w: &Word, bit: usize| -> Word {
            let mut letters: Vec<Letter> = w.letters().to_vec();
            if tail_bits >> bit & 1 == 1 {
                letters.push(Letter { gen: z, exp: 1 });
            }
            Word::from_letters(letters)
        };

        let mut powers: Vec<Word> = (0..d)
            .map(|k| with_tail(p.power_rhs(k), p.power_relation_index(k)))
            .collect();
        powers.push(Word::identity());

        let mut conjs = Vec::new();
        for j in 0..d {
            for k in 0..j {
                let bit = p.conj_relation_index(j, k);
                let base_word = match p.conj_rhs(j, k) {
                    Some(w) => w.clone(),
                    None => Word::from_pairs(&[(j, 1)]),
                };
                let w = with_tail(&base_word, bit);
                let trivial = w.letters() == [Letter { gen: j, exp: 1 }];
                if !trivial {
                    conjs.push((j, k, w));
                }
            }
        }
        PcPresentation::from_parts(rel_orders, powers, conjs)
    }
}

fn rhs_exponent_parity(w: &Word, gen: usize) -> bool {
    w.letters()
        .iter()
        .filter(|l| l.gen == gen)
        .map(|l| l.exp)
        .sum::<i64>()
        .rem_euclid(2)
        == 1
}

/// One consistent order-2|G| presentation per central-extension
/// representative of the base group.
pub fn central_extensions(base: &Arc<PcPresentation>) -> Result<Vec<PcPresentation>> {
    let system = TailSystem::build(base)?;
    system
        .representatives()
        .map(|t| system.materialize(t))
        .collect()
}
