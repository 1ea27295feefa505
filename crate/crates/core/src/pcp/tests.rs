use std::collections::HashMap;

use super::*;

pub(crate) const D8_TEXT: &str = "\
pcgroup 3
order 1 2
order 2 2
order 3 2
power 2 := g3
conj 2 1 := g2 g3
";

pub(crate) fn d8() -> PcPresentation {
    parse_pcp(D8_TEXT).unwrap()
}

/// K1-shaped order-2^(n+6) fixture with t of order 2^(n+1); `broken` swaps
/// g3^2 = t^-1 for g3^2 = 1, which breaks the overlap of g3's power relation
/// with conjugation by g1.
fn k1_shaped(n: u32, broken: bool) -> PcPresentation {
    let m = 1u64 << (n + 1);
    let g3_sq = if broken {
        "".to_string()
    } else {
        format!("power 3 := g6^{}\n", m - 1)
    };
    let text = format!(
        "pcgroup 6\n\
         order 1 2\norder 2 2\norder 3 2\norder 4 2\norder 5 2\norder 6 {m}\n\
         power 2 := g3 g6\n\
         {g3_sq}\
         conj 2 1 := g2 g3\n\
         conj 3 1 := g3 g6\n\
         conj 6 1 := g6^-1\n"
    );
    parse_pcp(&text).unwrap()
}

#[test]
fn d8_normalize_examples() {
    let p = d8();
    // g2 * g1 collects to g1 g2 g3
    let e = p.normalize(&Word::from_pairs(&[(1, 1), (0, 1)])).unwrap();
    assert_eq!(e.exponents(), &[1, 1, 1]);
    // empty word is the identity
    let id = p.normalize(&Word::identity()).unwrap();
    assert!(id.is_identity());
    // g2^2 = g3 by the power relation
    let e = p.normalize(&Word::from_pairs(&[(1, 2)])).unwrap();
    assert_eq!(e.exponents(), &[0, 0, 1]);
}

#[test]
fn d8_element_ops() {
    let p = d8();
    let g1 = p.generator(0).unwrap();
    let g2 = p.generator(1).unwrap();
    let g3 = p.generator(2).unwrap();
    for x in [&g1, &g2, &g3] {
        assert_eq!(p.multiply(&p.identity(), x).unwrap(), *x);
        assert_eq!(p.multiply(x, &p.identity()).unwrap(), *x);
        let inv = p.inverse(x).unwrap();
        assert!(p.multiply(x, &inv).unwrap().is_identity());
    }
    assert_eq!(p.element_order(&g2).unwrap(), 4);
    assert_eq!(p.element_order(&g1).unwrap(), 2);
    assert_eq!(p.commutator(&g2, &g1).unwrap(), g3);
}

/// Independent oracle: D8 as permutations of the square's vertices,
/// g1 = the reflection (2 4), g2 = the rotation (1 2 3 4), g3 = g2^2.
/// The presentation's arithmetic must agree with composing permutations.
#[test]
fn d8_matches_permutation_model() {
    type Perm = [usize; 4];
    const ID: Perm = [0, 1, 2, 3];
    fn compose(a: Perm, b: Perm) -> Perm {
        // x -> b(a(x)): products read left to right, like words
        let mut c = ID;
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = b[a[i]];
        }
        c
    }
    let rot: Perm = [1, 2, 3, 0];
    let refl: Perm = [0, 3, 2, 1];
    let gens = [refl, rot, compose(rot, rot)];

    let p = d8();
    let eval = |e: &Element| -> Perm {
        let mut acc = ID;
        for (k, &c) in e.exponents().iter().enumerate() {
            for _ in 0..c {
                acc = compose(acc, gens[k]);
            }
        }
        acc
    };

    // normal forms biject onto the 8 permutations
    let mut seen = HashMap::new();
    for a in 0..2u64 {
        for b in 0..2u64 {
            for c in 0..2u64 {
                let e = p.element_from_exponents(&[a, b, c]).unwrap();
                assert!(seen.insert(eval(&e), e).is_none());
            }
        }
    }
    assert_eq!(seen.len(), 8);

    // multiplication agrees everywhere
    for x in seen.values() {
        for y in seen.values() {
            let z = p.multiply(x, y).unwrap();
            assert_eq!(eval(&z), compose(eval(x), eval(y)));
        }
    }
}

#[test]
fn consistency_fixtures() {
    assert!(d8().check_consistency().unwrap().consistent);
    for e in 1..=6 {
        let text = format!("pcgroup 1\norder 1 {}\n", 1u64 << e);
        let c = parse_pcp(&text).unwrap();
        assert!(c.check_consistency().unwrap().consistent, "C_2^{e}");
    }
    assert!(k1_shaped(2, false).check_consistency().unwrap().consistent);
}

#[test]
fn broken_k1_violation() {
    let p = k1_shaped(2, true);
    let report = p.check_consistency().unwrap();
    assert!(!report.consistent);
    // the documented violation: overlap of g3's power relation with
    // conjugation by g1 gives g1 on one side and g1 t^2 on the other
    let v = report
        .violations
        .iter()
        .find(|v| v.overlap == OverlapId::PowerLeft { j: 2, k: 0 })
        .expect("expected violation on (g3^2) g1");
    let mut sides = [v.lhs.exponents().to_vec(), v.rhs.exponents().to_vec()];
    sides.sort();
    assert_eq!(sides[0], vec![1, 0, 0, 0, 0, 0]); // g1
    assert_eq!(sides[1], vec![1, 0, 0, 0, 0, 2]); // g1 t^2
}

#[test]
fn normalize_handles_negative_and_large_exponents() {
    let p = k1_shaped(3, false);
    let t = p.generator(5).unwrap();
    let m = 1i64 << 4;
    // t^-1 = t^(m-1)
    let e = p.normalize(&Word::from_pairs(&[(5, -1)])).unwrap();
    assert_eq!(p.element_power(&t, m - 1).unwrap(), e);
    // wild spellings of the identity
    for w in [
        Word::from_pairs(&[(5, 5 * m)]),
        Word::from_pairs(&[(0, 1), (0, -1)]),
        Word::from_pairs(&[(1, 3), (1, -3)]),
    ] {
        assert!(p.normalize(&w).unwrap().is_identity(), "word {w}");
    }
}

#[test]
fn argument_validation_errors() {
    use crate::error::Error;
    let p = d8();
    // out-of-range generator index in a word
    let err = p.normalize(&Word::from_pairs(&[(7, 1)])).unwrap_err();
    assert!(matches!(err, Error::IndexOutOfRange(7, 3)));
    // elements from another presentation are rejected
    let other = parse_pcp("pcgroup 1\norder 1 2\n").unwrap();
    let foreign = other.generator(0).unwrap();
    assert!(matches!(
        p.multiply(&p.identity(), &foreign),
        Err(Error::PresentationMismatch)
    ));
    // exponent vectors must respect the relative orders
    assert!(p.element_from_exponents(&[0, 3, 0]).is_err());
}

#[test]
fn serialize_round_trip_is_canonical() {
    let p = d8();
    let text = serialize_pcp(&p);
    let q = parse_pcp(&text).unwrap();
    assert_eq!(p, q);
    assert_eq!(serialize_pcp(&q), text);
    // negative exponents canonicalize into [1, m-1]
    let k1 = k1_shaped(2, false);
    let text = serialize_pcp(&k1);
    assert!(text.contains("power 3 := g6^7"), "{text}");
    assert_eq!(serialize_pcp(&parse_pcp(&text).unwrap()), text);
}

#[test]
fn parse_rejects_bad_input() {
    // conj rhs must reference generators after the conjugator
    let bad = "pcgroup 2\norder 1 2\norder 2 2\nconj 2 1 := g1\n";
    assert!(parse_pcp(bad).is_err());
    // non-power-of-two order
    let bad = "pcgroup 1\norder 1 6\n";
    assert!(parse_pcp(bad).is_err());
    // unknown keyword with position info
    let bad = "pcgroup 1\norder 1 2\nfrobnicate 1\n";
    let err = parse_pcp(bad).unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
}

#[test]
fn refine_fixed_point_and_c4() {
    // C4 refines to two generators a, b with a^2 = b
    let c4 = parse_pcp("pcgroup 1\norder 1 4\n").unwrap();
    let (r, images) = refine_parts(&c4).unwrap();
    assert_eq!(r.num_generators(), 2);
    assert_eq!(r.rel_orders(), &[2, 2]);
    assert_eq!(serialize_pcp(&r), "pcgroup 2\norder 1 2\norder 2 2\npower 1 := g2\n");
    assert_eq!(images, vec![vec![1, 0]]);
    // D8's fixture is already elementary: refinement is the identity
    let p = d8();
    let (r, _) = refine_parts(&p).unwrap();
    assert_eq!(r, p);
}

/// Deterministic pseudo-random words: normal forms are stable under
/// re-normalization, and multiplication built on collection is associative.
#[test]
fn randomized_collection_properties() {
    let mut rng = SplitMix64::new(0x5eed_c0c1a55);
    for p in [d8(), k1_shaped(2, false)] {
        let d = p.num_generators();
        for _ in 0..300 {
            let len = (rng.next() % 8) as usize;
            let mut w = Word::identity();
            for _ in 0..len {
                let gen = (rng.next() % d as u64) as usize;
                let exp = (rng.next() % 21) as i64 - 10;
                w.push(gen, exp);
            }
            let e = p.normalize(&w).unwrap();
            let again = p.normalize(&p.word_of(&e)).unwrap();
            assert_eq!(e, again);
        }
        // associativity on random triples
        let random_elem = |rng: &mut SplitMix64| {
            let exps: Vec<u64> = (0..d).map(|k| rng.next() % p.rel_order(k)).collect();
            p.element_from_exponents(&exps).unwrap()
        };
        for _ in 0..300 {
            let (a, b, c) = (random_elem(&mut rng), random_elem(&mut rng), random_elem(&mut rng));
            let ab_c = p.multiply(&p.multiply(&a, &b).unwrap(), &c).unwrap();
            let a_bc = p.multiply(&a, &p.multiply(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
        }
    }
}

pub(crate) struct SplitMix64(u64);

impl SplitMix64 {
    pub(crate) fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }
    pub(crate) fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}
