//! Dense element tables for small consistent groups.
//!
//! Elements of a consistent presentation are ranked by their normal-form
//! exponent vector in mixed radix, most significant digit first, so rank
//! order is lexicographic order of normal forms. For each generator the
//! table stores the permutations `x -> x * g_k^(2^j)`, which makes a full
//! multiplication a handful of array lookups. Everything order-sensitive at
//! small scale (element-order census, conjugacy classes, centralizers,
//! automorphism search) runs on ranks.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pcp::{Element, PcPresentation};

/// Largest group order for which dense tables are built.
pub const TABLE_CEILING: u64 = 1 << 13;

#[derive(Debug)]
pub(crate) struct ElementTable {
    pub order: u64,
    pub strides: Vec<u64>,
    /// `step[k][j][x]` = rank of `x * g_k^(2^j)`, flattened per generator.
    step: Vec<Vec<Vec<u32>>>,
    /// Rank of each generator.
    pub gen_rank: Vec<u32>,
    /// Element order per rank (a power of two).
    pub elem_order: Vec<u32>,
    /// Rank of the inverse per rank.
    pub inv: Vec<u32>,
}

impl ElementTable {
    pub fn build(p: &PcPresentation) -> Result<ElementTable> {
        p.ensure_consistent()?;
        let order = p.order_product();
        if order > TABLE_CEILING {
            return Err(Error::OrderCeiling {
                order,
                ceiling: TABLE_CEILING,
            });
        }
        let d = p.num_generators();
        let n = order as usize;
        let mut strides = vec![1u64; d];
        for k in (0..d.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * p.rel_order(k + 1);
        }

        let unrank = |x: u64| -> Vec<u64> {
            let mut exps = vec![0u64; d];
            let mut rem = x;
            for k in 0..d {
                exps[k] = rem / strides[k];
                rem %= strides[k];
            }
            exps
        };

        // Base step tables x -> x * g_k, then doubled powers by composition.
        let mut step: Vec<Vec<Vec<u32>>> = Vec::with_capacity(d);
        for k in 0..d {
            let mut base = vec![0u32; n];
            for x in 0..n as u64 {
                let exps = unrank(x);
                let e = p.element_from_exponents(&exps)?;
                let g = p.generator(k)?;
                let y = p.multiply(&e, &g)?;
                base[x as usize] = rank_of(&strides, y.exponents()) as u32;
            }
            let levels = p.rel_order(k).trailing_zeros() as usize;
            let mut tables = vec![base];
            for j in 1..levels {
                let prev = &tables[j - 1];
                let next: Vec<u32> = (0..n).map(|x| prev[prev[x] as usize]).collect();
                tables.push(next);
            }
            step.push(tables);
        }

        let mut t = ElementTable {
            order,
            strides,
            step,
            gen_rank: Vec::new(),
            elem_order: Vec::new(),
            inv: Vec::new(),
        };
        t.gen_rank = (0..d)
            .map(|k| {
                let mut exps = vec![0u64; d];
                exps[k] = 1;
                t.rank(&exps) as u32
            })
            .collect();

        let mut elem_order = vec![0u32; n];
        for (x, slot) in elem_order.iter_mut().enumerate() {
            let mut y = x as u32;
            let mut ord = 1u32;
            while y != 0 {
                y = t.mul(y, y);
                ord = ord.checked_mul(2).ok_or(Error::Inconsistent)?;
            }
            *slot = ord;
        }
        t.elem_order = elem_order;

        let mut inv = vec![0u32; n];
        for (x, slot) in inv.iter_mut().enumerate() {
            *slot = t.pow(x as u32, (t.elem_order[x] - 1) as u64);
        }
        t.inv = inv;
        Ok(t)
    }

    pub fn len(&self) -> usize {
        self.order as usize
    }

    pub fn rank(&self, exps: &[u64]) -> u32 {
        rank_of(&self.strides, exps) as u32
    }

    pub fn unrank(&self, x: u32) -> Vec<u64> {
        let mut exps = vec![0u64; self.strides.len()];
        let mut rem = x as u64;
        for (e, &stride) in exps.iter_mut().zip(&self.strides) {
            *e = rem / stride;
            rem %= stride;
        }
        exps
    }

    /// `x * g_k^e` for `0 <= e < m_k`, via the binary digits of `e`.
    pub fn mul_gen_pow(&self, x: u32, k: usize, e: u64) -> u32 {
        let mut x = x;
        let mut e = e;
        let mut j = 0;
        while e != 0 {
            if e & 1 == 1 {
                x = self.step[k][j][x as usize];
            }
            e >>= 1;
            j += 1;
        }
        x
    }

    /// Full product `x * y` by folding y's normal form digit by digit.
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        let mut acc = x;
        let mut rem = y as u64;
        for k in 0..self.strides.len() {
            let e = rem / self.strides[k];
            rem %= self.strides[k];
            if e != 0 {
                acc = self.mul_gen_pow(acc, k, e);
            }
        }
        acc
    }

    pub fn pow(&self, x: u32, mut n: u64) -> u32 {
        let mut base = x;
        let mut acc = 0u32;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn conj(&self, x: u32, by: u32) -> u32 {
        self.mul(self.mul(self.inv[by as usize], x), by)
    }

    pub fn commutator(&self, x: u32, y: u32) -> u32 {
        let a = self.mul(self.inv[x as usize], self.inv[y as usize]);
        self.mul(self.mul(a, x), y)
    }

    pub fn element(&self, p: &PcPresentation, x: u32) -> Element {
        p.element_from_exponents(&self.unrank(x))
            .expect("rank within bounds")
    }

    pub fn rank_element(&self, e: &Element) -> u32 {
        self.rank(e.exponents())
    }
}

fn rank_of(strides: &[u64], exps: &[u64]) -> u64 {
    exps.iter().zip(strides).map(|(&e, &s)| e * s).sum()
}

impl PcPresentation {
    /// Lazily built dense table; errors above [`TABLE_CEILING`].
    pub(crate) fn table(&self) -> Result<Arc<ElementTable>> {
        if let Some(cached) = self.table_cache.get() {
            return match cached {
                Some(t) => Ok(Arc::clone(t)),
                None => Err(Error::OrderCeiling {
                    order: self.order_product(),
                    ceiling: TABLE_CEILING,
                }),
            };
        }
        let built = ElementTable::build(self);
        match built {
            Ok(t) => {
                let arc = Arc::new(t);
                let _ = self.table_cache.set(Some(Arc::clone(&arc)));
                Ok(arc)
            }
            Err(Error::OrderCeiling { order, ceiling }) => {
                let _ = self.table_cache.set(None);
                Err(Error::OrderCeiling { order, ceiling })
            }
            Err(e) => Err(e),
        }
    }
}
