//! Constructors for the standard small-group fixtures and the parametrized
//! families the explorer reproduces: cyclic, abelian, dihedral, quaternion
//! and semidihedral 2-groups, direct products, the order-16 coclass-2
//! exception, finite quotients of the rank-one coclass-3 pro-2-group, the
//! six exceptional coclass-3 sequences K1..K6, and the 15-parameter
//! presentation template they all embed into.
//!
//! Everything is emitted through the text format and the collector, so each
//! constructor returns a canonicalized presentation. Consistency is
//! guaranteed for the named standard groups; for `k_group` and
//! `z2_presentation` it is part of what callers verify.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pcp::{parse_pcp, PcPresentation, Word};

fn expect_power_of_two(order: u64, min: u64, what: &str) -> Result<u32> {
    if order < min || !order.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "{what} needs a power of two >= {min}, got {order}"
        )));
    }
    Ok(order.trailing_zeros())
}

/// Cyclic group of 2-power order (order 1 gives the trivial group).
pub fn cyclic(order: u64) -> Result<PcPresentation> {
    if order == 1 {
        return parse_pcp("pcgroup 0\n");
    }
    expect_power_of_two(order, 2, "cyclic")?;
    parse_pcp(&format!("pcgroup 1\norder 1 {order}\n"))
}

/// Abelian group with the given invariant factors (each a 2-power >= 2).
pub fn abelian(invariants: &[u64]) -> Result<PcPresentation> {
    let mut text = format!("pcgroup {}\n", invariants.len());
    for (k, &m) in invariants.iter().enumerate() {
        expect_power_of_two(m, 2, "abelian invariant")?;
        let _ = writeln!(text, "order {} {}", k + 1, m);
    }
    parse_pcp(&text)
}

pub fn elementary_abelian(rank: u32) -> Result<PcPresentation> {
    abelian(&vec![2u64; rank as usize])
}

/// Dihedral group of order 2^n (n >= 3), on the elementary chain
/// s, r, r^2, ..., r^(2^(n-2)).
pub fn dihedral(order: u64) -> Result<PcPresentation> {
    let n = expect_power_of_two(order, 8, "dihedral")? as usize;
    let mut text = format!("pcgroup {n}\n");
    for k in 1..=n {
        let _ = writeln!(text, "order {k} 2");
    }
    for k in 2..n {
        let _ = writeln!(text, "power {k} := g{}", k + 1);
    }
    for k in 2..n {
        // r^(-2^(k-2)) = g_k g_{k+1} ... g_n
        let rhs: Vec<String> = (k..=n).map(|j| format!("g{j}")).collect();
        let _ = writeln!(text, "conj {k} 1 := {}", rhs.join(" "));
    }
    parse_pcp(&text)
}

/// Generalized quaternion group of order 2^n (n >= 3): dihedral chain with
/// s^2 = r^(2^(n-2)).
pub fn quaternion(order: u64) -> Result<PcPresentation> {
    let n = expect_power_of_two(order, 8, "quaternion")? as usize;
    let mut text = format!("pcgroup {n}\n");
    for k in 1..=n {
        let _ = writeln!(text, "order {k} 2");
    }
    let _ = writeln!(text, "power 1 := g{n}");
    for k in 2..n {
        let _ = writeln!(text, "power {k} := g{}", k + 1);
    }
    for k in 2..n {
        let rhs: Vec<String> = (k..=n).map(|j| format!("g{j}")).collect();
        let _ = writeln!(text, "conj {k} 1 := {}", rhs.join(" "));
    }
    parse_pcp(&text)
}

/// Semidihedral group of order 2^n (n >= 4): r^s = r^(2^(n-2) - 1).
pub fn semidihedral(order: u64) -> Result<PcPresentation> {
    let n = expect_power_of_two(order, 16, "semidihedral")? as usize;
    let mut text = format!("pcgroup {n}\n");
    for k in 1..=n {
        let _ = writeln!(text, "order {k} 2");
    }
    for k in 2..n {
        let _ = writeln!(text, "power {k} := g{}", k + 1);
    }
    // r^(2^(n-2)-1) = g2 ... g_{n-1}; deeper powers invert as in dihedral
    let rhs: Vec<String> = (2..n).map(|j| format!("g{j}")).collect();
    let _ = writeln!(text, "conj 2 1 := {}", rhs.join(" "));
    for k in 3..n {
        let rhs: Vec<String> = (k..=n).map(|j| format!("g{j}")).collect();
        let _ = writeln!(text, "conj {k} 1 := {}", rhs.join(" "));
    }
    parse_pcp(&text)
}

/// Direct product: generator lists concatenated, trivial cross action.
pub fn direct_product(a: &PcPresentation, b: &PcPresentation) -> Result<PcPresentation> {
    let da = a.num_generators();
    let db = b.num_generators();
    let mut rel_orders = a.rel_orders().to_vec();
    rel_orders.extend_from_slice(b.rel_orders());
    let shift = |w: &Word| -> Word {
        Word::from_pairs(
            &w.letters()
                .iter()
                .map(|l| (l.gen + da, l.exp))
                .collect::<Vec<_>>(),
        )
    };
    let mut powers: Vec<Word> = (0..da).map(|k| a.power_rhs(k).clone()).collect();
    powers.extend((0..db).map(|k| shift(b.power_rhs(k))));
    let mut conjs = Vec::new();
    for j in 0..da {
        for k in 0..j {
            if let Some(w) = a.conj_rhs(j, k) {
                conjs.push((j, k, w.clone()));
            }
        }
    }
    for j in 0..db {
        for k in 0..j {
            if let Some(w) = b.conj_rhs(j, k) {
                conjs.push((j + da, k + da, shift(w)));
            }
        }
    }
    PcPresentation::from_parts(rel_orders, powers, conjs)
}

/// The third coclass-2 exception: order 16, class 2, with b^c = a^2 b.
/// Encoded on pc generators c, b, a with a of relative order 4.
pub fn coclass2_exception() -> PcPresentation {
    parse_pcp("pcgroup 3\norder 1 2\norder 2 2\norder 3 4\nconj 2 1 := g2 g3^2\n")
        .expect("fixed text parses")
}

/// Finite quotient of the rank-one coclass-3 pro-2-group: generators
/// a, u, v, t with a inverting t, u and v central of order 2, and t of
/// relative order 2^(u-1). Order 2^(u+2), coclass 3 for every u >= 2.
pub fn family81_quotient(depth: u32) -> Result<PcPresentation> {
    if depth < 2 {
        return Err(Error::InvalidParameter(format!(
            "quotient depth must be >= 2, got {depth}"
        )));
    }
    if depth > 32 {
        return Err(Error::InvalidParameter(format!(
            "quotient depth {depth} exceeds the supported range"
        )));
    }
    let m = 1u64 << (depth - 1);
    let text = format!(
        "pcgroup 4\norder 1 2\norder 2 2\norder 3 2\norder 4 {m}\nconj 4 1 := g4^{}\n",
        m - 1
    );
    parse_pcp(&text)
}

/// Which of the six exceptional coclass-3 sequences, and the level n >= 1
/// (the last generator t has relative order 2^(n+1); the group has order
/// 2^(n+6)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KFamilyId {
    pub i: u8,
    pub n: u32,
}

impl KFamilyId {
    pub fn new(i: u8, n: u32) -> Result<KFamilyId> {
        if !(1..=6).contains(&i) {
            return Err(Error::InvalidParameter(format!(
                "sequence index must be 1..=6, got {i}"
            )));
        }
        if n == 0 || n > 24 {
            return Err(Error::InvalidParameter(format!(
                "sequence level must be 1..=24, got {n}"
            )));
        }
        Ok(KFamilyId { i, n })
    }
}

/// Member of one of the six exceptional coclass-3 sequences, exactly as
/// printed: generators g1..g5, t with t^g1 = t^-1, g3^2 = t^-1 and
/// t^(2^(n+1)) = 1. Consistency is not assumed here; callers check it.
pub fn k_group(id: KFamilyId) -> Result<PcPresentation> {
    let KFamilyId { i, n } = KFamilyId::new(id.i, id.n).map(|_| id)?;
    let m = 1u64 << (n + 1);
    let two_n = 1u64 << n;
    let g1_sq: u64 = match i {
        3 | 6 => two_n,
        _ => 0,
    };
    let g2_sq: u64 = match i {
        2 | 5 => 1 + two_n,
        _ => 1,
    };
    let g5_conj_g4 = matches!(i, 4..=6);

    let mut text = String::from("pcgroup 6\n");
    for k in 1..=5 {
        let _ = writeln!(text, "order {k} 2");
    }
    let _ = writeln!(text, "order 6 {m}");
    if g1_sq != 0 {
        let _ = writeln!(text, "power 1 := g6^{g1_sq}");
    }
    let _ = writeln!(text, "power 2 := g3 g6^{g2_sq}");
    let _ = writeln!(text, "power 3 := g6^{}", m - 1);
    let _ = writeln!(text, "conj 2 1 := g2 g3");
    let _ = writeln!(text, "conj 3 1 := g3 g6");
    if g5_conj_g4 {
        let _ = writeln!(text, "conj 5 4 := g5 g6^{two_n}");
    }
    let _ = writeln!(text, "conj 6 1 := g6^{}", m - 1);
    parse_pcp(&text)
}

/// Parameter vector for the 15-parameter template: x1..x15 reduced modulo
/// 2^(8+offset).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamVector {
    pub values: [u64; 15],
    pub offset: u32,
}

impl ParamVector {
    pub fn new(values: [u64; 15], offset: u32) -> Result<ParamVector> {
        if offset > 22 {
            return Err(Error::InvalidParameter(format!(
                "offset {offset} exceeds the supported range 0..=22"
            )));
        }
        let modulus = 1u64 << (8 + offset);
        if let Some(bad) = values.iter().find(|&&v| v >= modulus) {
            return Err(Error::InvalidParameter(format!(
                "parameter {bad} not reduced modulo {modulus}"
            )));
        }
        Ok(ParamVector { values, offset })
    }

    pub fn modulus(&self) -> u64 {
        1u64 << (8 + self.offset)
    }
}

/// The 15-parameter presentation on g1..g5, t with t of relative order
/// 2^(8+offset). Consistency depends on the parameters and is reported by
/// the checker, not assumed.
pub fn z2_presentation(x: &ParamVector) -> Result<PcPresentation> {
    let x = ParamVector::new(x.values, x.offset).map(|_| *x)?;
    let m = x.modulus();
    let v = |j: usize| x.values[j - 1]; // paper-style 1-based x_j
    let mut text = String::from("pcgroup 6\n");
    for k in 1..=5 {
        let _ = writeln!(text, "order {k} 2");
    }
    let _ = writeln!(text, "order 6 {m}");
    let _ = writeln!(text, "power 1 := g6^{}", v(1));
    let _ = writeln!(text, "power 2 := g3 g6^{}", v(3));
    let _ = writeln!(text, "power 3 := g6^{}", v(6));
    let _ = writeln!(text, "power 4 := g6^{}", v(10));
    let _ = writeln!(text, "power 5 := g6^{}", v(15));
    let _ = writeln!(text, "conj 2 1 := g2 g3 g6^{}", v(2));
    let _ = writeln!(text, "conj 3 1 := g3 g6^{}", v(4));
    let _ = writeln!(text, "conj 3 2 := g3 g6^{}", v(5));
    let _ = writeln!(text, "conj 4 1 := g4 g6^{}", v(7));
    let _ = writeln!(text, "conj 4 2 := g4 g6^{}", v(8));
    let _ = writeln!(text, "conj 4 3 := g4 g6^{}", v(9));
    let _ = writeln!(text, "conj 5 1 := g5 g6^{}", v(11));
    let _ = writeln!(text, "conj 5 2 := g5 g6^{}", v(12));
    let _ = writeln!(text, "conj 5 3 := g5 g6^{}", v(13));
    let _ = writeln!(text, "conj 5 4 := g5 g6^{}", v(14));
    let _ = writeln!(text, "conj 6 1 := g6^{}", m - 1);
    parse_pcp(&text)
}

/// The template vector that reproduces the first exceptional sequence:
/// g2^2 = g3 t, g3^g1 = g3 t, g3^2 = t^-1, everything else plain. At a
/// given offset it presents the same group as `k_group(1, 7 + offset)`.
pub fn k1_z2_vector(offset: u32) -> Result<ParamVector> {
    let modulus = 1u64 << (8 + offset);
    let mut values = [0u64; 15];
    values[2] = 1; // x3
    values[3] = 1; // x4
    values[5] = modulus - 1; // x6
    ParamVector::new(values, offset)
}

/// CLI-facing constructor grammar:
/// `cyclic:<2^e>`, `dihedral:<2^n>`, `quaternion:<2^n>`,
/// `semidihedral:<2^n>`, `elemab:<k>`, `prod(<spec>,<spec>)`,
/// `cc2-exception`, `fam81:<u>`, `K<i>:<n>`, `z2:<i>:<x1,...,x15>`.
pub fn parse_family_spec(spec: &str) -> Result<PcPresentation> {
    let spec = spec.trim();
    let bad = |msg: String| Error::InvalidParameter(msg);
    if spec == "cc2-exception" {
        return Ok(coclass2_exception());
    }
    if let Some(rest) = spec.strip_prefix("prod(").and_then(|s| s.strip_suffix(')')) {
        // split at the top-level comma
        let mut depth = 0usize;
        let mut split = None;
        for (idx, ch) in rest.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    split = Some(idx);
                    break;
                }
                _ => {}
            }
        }
        let split = split.ok_or_else(|| bad(format!("prod needs two arguments: {spec}")))?;
        let a = parse_family_spec(&rest[..split])?;
        let b = parse_family_spec(&rest[split + 1..])?;
        return direct_product(&a, &b);
    }
    if let Some(rest) = spec.strip_prefix('K') {
        if let Some((i, n)) = rest.split_once(':') {
            let i: u8 = i.parse().map_err(|_| bad(format!("bad sequence index in {spec}")))?;
            let n: u32 = n.parse().map_err(|_| bad(format!("bad level in {spec}")))?;
            return k_group(KFamilyId::new(i, n)?);
        }
    }
    if let Some((head, rest)) = spec.split_once(':') {
        match head {
            "cyclic" | "dihedral" | "quaternion" | "semidihedral" | "elemab" | "fam81" => {
                let v: u64 = rest
                    .parse()
                    .map_err(|_| bad(format!("bad numeric argument in {spec}")))?;
                return match head {
                    "cyclic" => cyclic(v),
                    "dihedral" => dihedral(v),
                    "quaternion" => quaternion(v),
                    "semidihedral" => semidihedral(v),
                    "elemab" => elementary_abelian(v as u32),
                    "fam81" => family81_quotient(v as u32),
                    _ => unreachable!(),
                };
            }
            "z2" => {
                let (i, xs) = rest
                    .split_once(':')
                    .ok_or_else(|| bad(format!("z2 needs z2:<i>:<x1,...,x15>: {spec}")))?;
                let offset: u32 = i.parse().map_err(|_| bad(format!("bad offset in {spec}")))?;
                let parts: Vec<&str> = xs.split(',').collect();
                if parts.len() != 15 {
                    return Err(bad(format!("z2 needs 15 parameters, got {}", parts.len())));
                }
                let mut values = [0u64; 15];
                for (slot, part) in values.iter_mut().zip(&parts) {
                    *slot = part
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("bad parameter `{part}` in {spec}")))?;
                }
                return z2_presentation(&ParamVector::new(values, offset)?);
            }
            _ => {}
        }
    }
    Err(bad(format!("unrecognized family spec `{spec}`")))
}
