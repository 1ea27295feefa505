//! Refinement of a presentation to one where every relative order is 2, by
//! splitting a generator of relative order 2^e into the chain
//! g, g^2, g^4, ..., g^(2^(e-1)). Normal forms translate digit by digit: the
//! refined exponent vector is the binary expansion of the original one.

use crate::error::Result;

use super::presentation::PcPresentation;
use super::word::Word;

/// Refined presentation plus the images of the original generators as
/// exponent vectors of the new one.
pub(crate) fn refine_parts(p: &PcPresentation) -> Result<(PcPresentation, Vec<Vec<u64>>)> {
    p.ensure_consistent()?;
    let d = p.num_generators();
    let widths: Vec<usize> = (0..d)
        .map(|k| p.rel_order(k).trailing_zeros() as usize)
        .collect();
    let mut offset = vec![0usize; d + 1];
    for k in 0..d {
        offset[k + 1] = offset[k] + widths[k];
    }
    let nd = offset[d];

    let refined_word = |exps: &[u64]| -> Word {
        let mut w = Word::identity();
        for k in 0..d {
            let mut e = exps[k];
            let mut j = 0;
            while e != 0 {
                if e & 1 == 1 {
                    w.push(offset[k] + j, 1);
                }
                e >>= 1;
                j += 1;
            }
        }
        w
    };

    let mut powers: Vec<Word> = vec![Word::identity(); nd];
    for k in 0..d {
        for j in 0..widths[k] {
            if j + 1 < widths[k] {
                powers[offset[k] + j] = Word::from_pairs(&[(offset[k] + j + 1, 1)]);
            } else {
                // Last link in the chain carries the original power relation.
                let val = p.normalize(p.power_rhs(k))?;
                powers[offset[k] + j] = refined_word(val.exponents());
            }
        }
    }

    let mut conjs: Vec<(usize, usize, Word)> = Vec::new();
    for k in 0..d {
        for l in 0..k {
            // Conjugates of powers of g_k by powers of g_l, k > l. Powers of
            // the same original generator commute, so k == l pairs stay
            // trivial.
            for j in 0..widths[k] {
                for i in 0..widths[l] {
                    let a = p.element_power(&p.generator(k)?, 1 << j)?;
                    let b = p.element_power(&p.generator(l)?, 1 << i)?;
                    let c = p.conjugate(&a, &b)?;
                    let new_j = offset[k] + j;
                    let new_i = offset[l] + i;
                    let trivial =
                        c.exponents().iter().enumerate().all(|(t, &e)| {
                            (t == k && e == 1 << j) || (t != k && e == 0)
                        });
                    if !trivial {
                        conjs.push((new_j, new_i, refined_word(c.exponents())));
                    }
                }
            }
        }
    }

    let refined = PcPresentation::from_parts(vec![2; nd], powers, conjs)?;
    let images: Vec<Vec<u64>> = (0..d)
        .map(|k| {
            let mut exps = vec![0u64; nd];
            exps[offset[k]] = 1;
            exps
        })
        .collect();
    Ok((refined, images))
}
