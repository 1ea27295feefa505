//! Quotients G/N for verified-normal N, presented on the surviving part of
//! the polycyclic sequence.

use crate::error::{Error, Result};
use crate::pcp::{Element, PcPresentation, Word};

use super::subgroup::InducedSequence;

/// Consistent presentation of G/N. Each generator level k contributes
/// relative order m_k / (order of N's slice at level k); levels fully
/// absorbed by N disappear. Relations are the images of the original ones,
/// reduced to canonical coset representatives by sifting against N.
pub fn quotient(p: &PcPresentation, n: &InducedSequence) -> Result<PcPresentation> {
    p.ensure_consistent()?;
    n.check_pres(p)?;
    if !n.is_normal(p)? {
        return Err(Error::NotNormal);
    }
    let d = p.num_generators();

    let mut qord: Vec<u64> = (0..d).map(|k| p.rel_order(k)).collect();
    for u in n.members() {
        let (l, c) = u.leading().expect("nontrivial");
        qord[l] = 1 << c.trailing_zeros();
    }
    let kept: Vec<usize> = (0..d).filter(|&k| qord[k] >= 2).collect();
    let mut new_index = vec![usize::MAX; d];
    for (i, &k) in kept.iter().enumerate() {
        new_index[k] = i;
    }

    // Canonical coset representative: reduce each coordinate into
    // [0, qord_k) by multiplying with powers of N's member at that level.
    let reduce = |x: &Element| -> Result<Vec<u64>> {
        let mut r = x.clone();
        for (k, &qk) in qord.iter().enumerate() {
            let c = r.exponents()[k];
            let rem = c % qk;
            if rem != c {
                let u = n
                    .member_at_level(k)
                    .expect("excess coordinate implies N occupies this level");
                let lead = u.leading().expect("nontrivial").1;
                let q = ((c - rem) / lead) as i64;
                let u_pow = p.element_power(u, -q)?;
                r = p.multiply(&u_pow, &r)?;
                debug_assert_eq!(r.exponents()[k], rem);
            }
        }
        Ok(r.exponents().to_vec())
    };

    let to_word = |reduced: &[u64]| -> Word {
        let mut w = Word::identity();
        for (k, &e) in reduced.iter().enumerate() {
            if e != 0 {
                w.push(new_index[k], e as i64);
            }
        }
        w
    };

    let mut powers = Vec::with_capacity(kept.len());
    for &k in &kept {
        let x = p.element_power(&p.generator(k)?, qord[k] as i64)?;
        let reduced = reduce(&x)?;
        debug_assert!(reduced[..=k].iter().all(|&e| e == 0));
        powers.push(to_word(&reduced));
    }

    let mut conjs = Vec::new();
    for (jn, &j) in kept.iter().enumerate() {
        for &k in &kept[..jn] {
            let x = p.conjugate(&p.generator(j)?, &p.generator(k)?)?;
            let reduced = reduce(&x)?;
            debug_assert!(reduced[..=k].iter().all(|&e| e == 0));
            let w = to_word(&reduced);
            if w.letters() != [crate::pcp::Letter {
                gen: new_index[j],
                exp: 1,
            }] {
                conjs.push((new_index[j], new_index[k], w));
            }
        }
    }

    let rel_orders: Vec<u64> = kept.iter().map(|&k| qord[k]).collect();
    PcPresentation::from_parts(rel_orders, powers, conjs)
}
