//! Backtracking over generator images.
//!
//! Source generators are assigned in presentation order; candidate images
//! are the target elements sharing the source generator's invariant cell
//! (element order, conjugacy class size, depths in the lower central, upper
//! central and power series, derived and Frattini membership). A partial
//! assignment is pruned when a relation with fully assigned support fails,
//! or when the image span in the target's Frattini quotient stops matching
//! the source side — by the Burnside basis theorem the images generate the
//! target exactly when their span there is full, so accepted leaves are
//! precisely the verified bijective maps and counting leaves counts them.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::pcp::PcPresentation;
use crate::structure::{derived_subgroup, lower_central_series, subgroup_closure};
use crate::table::ElementTable;

use super::hom::{all_relations, RelationId};

/// Node and wall-clock limits for one search.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_wall: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 1_000_000_000,
            max_wall: None,
        }
    }
}

/// Invariant cell key of an element; equal for corresponding elements under
/// any isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Sig {
    order: u32,
    class_size: u32,
    gamma_depth: u8,
    upper_depth: u8,
    power_depth: u8,
    in_derived: bool,
    in_frattini: bool,
}

#[derive(Debug)]
pub(crate) struct GroupData {
    pub pres: Arc<PcPresentation>,
    pub table: Arc<ElementTable>,
    pub sig: Vec<Sig>,
    pub cells: BTreeMap<Sig, Vec<u32>>,
    /// Coordinate of each rank in G/Φ(G) as a GF(2) bit vector.
    pub frat_coord: Vec<u32>,
    pub frat_rank: u32,
    /// Rank of span{coord(g_0..g_k)} for each prefix.
    pub prefix_rank: Vec<u32>,
    /// Relations checkable once generator k is assigned.
    pub rels_by_depth: Vec<Vec<RelationId>>,
}

fn rank_set(table: &ElementTable, elements: &[crate::pcp::Element]) -> Vec<bool> {
    let mut set = vec![false; table.len()];
    for e in elements {
        set[table.rank_element(e) as usize] = true;
    }
    set
}

impl GroupData {
    pub fn build(pres: &Arc<PcPresentation>) -> Result<GroupData> {
        let p = pres.as_ref();
        let table = p.table()?;
        let n = table.len();
        let d = p.num_generators();

        // Lower central depth per element.
        let series = lower_central_series(p)?;
        let mut gamma_depth = vec![0u8; n];
        for term in &series.terms {
            for e in term.elements(p)? {
                gamma_depth[table.rank_element(&e) as usize] += 1;
            }
        }

        let derived = rank_set(&table, &derived_subgroup(p)?.elements(p)?);

        // Upper central depth: least i with x in Z_i.
        let mut upper_depth = vec![u8::MAX; n];
        upper_depth[0] = 0;
        let mut level = 0u8;
        let mut covered = 1usize;
        while covered < n {
            level += 1;
            let next: Vec<u32> = (0..n as u32)
                .filter(|&x| {
                    upper_depth[x as usize] == u8::MAX
                        && table
                            .gen_rank
                            .iter()
                            .all(|&g| upper_depth[table.commutator(x, g) as usize] < level)
                })
                .collect();
            if next.is_empty() {
                return Err(Error::Inconsistent);
            }
            for x in next {
                upper_depth[x as usize] = level;
                covered += 1;
            }
        }

        // Power subgroup depth: greatest i with x in <y^(2^i) : y in G>.
        let mut power_depth = vec![0u8; n];
        let mut i = 1u32;
        loop {
            let powers: Vec<crate::pcp::Element> = (0..n as u32)
                .map(|x| table.element(p, table.pow(x, 1u64 << i)))
                .collect();
            let sub = subgroup_closure(p, &powers)?;
            if sub.is_trivial() {
                break;
            }
            for e in sub.elements(p)? {
                power_depth[table.rank_element(&e) as usize] = i as u8;
            }
            i += 1;
            if i > 40 {
                return Err(Error::Inconsistent);
            }
        }
        power_depth[0] = i as u8; // identity sits below the whole chain

        // Conjugacy class sizes by orbit closure under generator conjugation.
        let mut class_size = vec![0u32; n];
        let mut seen = vec![false; n];
        for x in 0..n as u32 {
            if seen[x as usize] {
                continue;
            }
            let mut orbit = vec![x];
            seen[x as usize] = true;
            let mut idx = 0;
            while idx < orbit.len() {
                let y = orbit[idx];
                idx += 1;
                for &g in &table.gen_rank {
                    let z = table.conj(y, g);
                    if !seen[z as usize] {
                        seen[z as usize] = true;
                        orbit.push(z);
                    }
                }
            }
            for &y in &orbit {
                class_size[y as usize] = orbit.len() as u32;
            }
        }

        // Frattini quotient coordinates. Φ(G) = G^2 [G,G]; cosets form an
        // elementary abelian quotient, coordinates assigned by BFS from the
        // generators that step outside the running span.
        let mut frat_gens: Vec<crate::pcp::Element> = (0..n as u32)
            .map(|x| table.element(p, table.pow(x, 2)))
            .collect();
        for e in derived_subgroup(p)?.elements(p)? {
            frat_gens.push(e);
        }
        let frattini = subgroup_closure(p, &frat_gens)?;
        let frat_set = rank_set(&table, &frattini.elements(p)?);
        // label cosets by their least member
        let mut coset_label = vec![u32::MAX; n];
        for x in 0..n as u32 {
            if coset_label[x as usize] != u32::MAX {
                continue;
            }
            let mut orbit = vec![x];
            coset_label[x as usize] = x;
            let mut idx = 0;
            while idx < orbit.len() {
                let y = orbit[idx];
                idx += 1;
                for (f, is_in) in frat_set.iter().enumerate() {
                    if *is_in {
                        let z = table.mul(y, f as u32);
                        if coset_label[z as usize] == u32::MAX {
                            coset_label[z as usize] = x;
                            orbit.push(z);
                        }
                    }
                }
            }
        }
        let mut frat_coord = vec![u32::MAX; n];
        frat_coord[0] = 0;
        let mut basis_count = 0u32;
        let mut frontier = vec![0u32];
        // assign coordinates generator by generator
        for k in 0..d {
            let g = table.gen_rank[k];
            if frat_coord[coset_label[g as usize] as usize] != u32::MAX {
                continue;
            }
            let e_k = 1u32 << basis_count;
            basis_count += 1;
            let mut new_frontier = Vec::new();
            for &x in &frontier {
                let y = coset_label[table.mul(x, g) as usize];
                debug_assert_eq!(frat_coord[y as usize], u32::MAX);
                frat_coord[y as usize] = frat_coord[coset_label[x as usize] as usize] ^ e_k;
                new_frontier.push(y);
            }
            frontier.extend(new_frontier);
        }
        // spread labels' coordinates to all elements
        let frat_coord: Vec<u32> = (0..n)
            .map(|x| frat_coord[coset_label[x] as usize])
            .collect();
        debug_assert!(frat_coord.iter().all(|&c| c != u32::MAX));
        let frat_rank = basis_count;

        let sig: Vec<Sig> = (0..n)
            .map(|x| Sig {
                order: table.elem_order[x],
                class_size: class_size[x],
                gamma_depth: gamma_depth[x],
                upper_depth: upper_depth[x],
                power_depth: power_depth[x],
                in_derived: derived[x],
                in_frattini: frat_set[x],
            })
            .collect();
        let mut cells: BTreeMap<Sig, Vec<u32>> = BTreeMap::new();
        for x in 0..n as u32 {
            cells.entry(sig[x as usize]).or_default().push(x);
        }

        let mut prefix_rank = Vec::with_capacity(d);
        let mut span = Echelon::default();
        for k in 0..d {
            span.insert(frat_coord[table.gen_rank[k] as usize]);
            prefix_rank.push(span.rank());
        }

        let mut rels_by_depth: Vec<Vec<RelationId>> = vec![Vec::new(); d];
        for rel in all_relations(p) {
            let support_max = match rel {
                RelationId::Power { gen } => p
                    .power_rhs(gen)
                    .max_gen()
                    .map(|m| m.max(gen))
                    .unwrap_or(gen),
                RelationId::Conjugation { j, k } => match p.conj_rhs(j, k) {
                    Some(w) => w.max_gen().map(|m| m.max(j)).unwrap_or(j),
                    None => j,
                },
            };
            rels_by_depth[support_max].push(rel);
        }

        Ok(GroupData {
            pres: Arc::clone(pres),
            table,
            sig,
            cells,
            frat_coord,
            frat_rank,
            prefix_rank,
            rels_by_depth,
        })
    }

    /// Sorted (cell signature, size) multiset: equal for isomorphic groups.
    pub fn cell_profile(&self) -> Vec<(Sig, usize)> {
        self.cells.iter().map(|(s, v)| (*s, v.len())).collect()
    }
}

/// Tiny GF(2) echelon over u32 bit vectors.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Echelon {
    rows: [u32; 16],
    len: u8,
}

impl Echelon {
    /// Reduce and insert; returns true if the rank grew.
    pub fn insert(&mut self, mut v: u32) -> bool {
        for i in 0..self.len as usize {
            let lead = 1u32 << (31 - self.rows[i].leading_zeros());
            if v & lead != 0 {
                v ^= self.rows[i];
            }
        }
        if v == 0 {
            return false;
        }
        self.rows[self.len as usize] = v;
        self.len += 1;
        true
    }

    pub fn rank(&self) -> u32 {
        self.len as u32
    }
}

/// Evaluates one source relation under candidate images, in the target's
/// rank arithmetic.
fn relation_holds_ranks(
    src: &PcPresentation,
    dst: &ElementTable,
    images: &[u32],
    rel: RelationId,
) -> bool {
    let eval_word = |w: &crate::pcp::Word| -> u32 {
        let mut acc = 0u32;
        for l in w.letters() {
            debug_assert!(l.exp > 0);
            acc = dst.mul(acc, dst.pow(images[l.gen], l.exp as u64));
        }
        acc
    };
    match rel {
        RelationId::Power { gen } => {
            dst.pow(images[gen], src.rel_order(gen)) == eval_word(src.power_rhs(gen))
        }
        RelationId::Conjugation { j, k } => {
            let lhs = dst.conj(images[j], images[k]);
            match src.conj_rhs(j, k) {
                Some(w) => lhs == eval_word(w),
                None => lhs == images[j],
            }
        }
    }
}

pub(crate) enum LeafAction {
    Continue,
    Stop,
}

#[derive(Debug)]
pub(crate) struct SearchResult {
    pub leaves: u64,
    pub nodes: u64,
}

/// Depth-first search over all generator-image assignments src -> dst.
/// Every accepted leaf is a verified bijective homomorphism; the visitor
/// decides whether to keep going. Candidates are tried in ascending rank
/// order, so leaves arrive in lexicographic image order.
pub(crate) fn dfs<F>(
    src: &GroupData,
    dst: &GroupData,
    budget: &SearchBudget,
    on_leaf: F,
) -> Result<SearchResult>
where
    F: FnMut(&[u32]) -> Result<LeafAction>,
{
    let d = src.pres.num_generators();
    if src.frat_rank != dst.frat_rank {
        return Ok(SearchResult { leaves: 0, nodes: 0 });
    }
    let empty: Vec<u32> = Vec::new();
    let candidates: Vec<&Vec<u32>> = (0..d)
        .map(|k| {
            let s = src.sig[src.table.gen_rank[k] as usize];
            dst.cells.get(&s).unwrap_or(&empty)
        })
        .collect();

    struct Ctx<'a, F> {
        src: &'a GroupData,
        dst: &'a GroupData,
        candidates: Vec<&'a Vec<u32>>,
        budget: &'a SearchBudget,
        started: Instant,
        nodes: u64,
        leaves: u64,
        images: Vec<u32>,
        on_leaf: F,
    }

    enum Flow {
        Continue,
        StopAll,
    }

    impl<F> Ctx<'_, F>
    where
        F: FnMut(&[u32]) -> Result<LeafAction>,
    {
        fn go(&mut self, depth: usize, span: Echelon) -> Result<Flow> {
            let d = self.src.pres.num_generators();
            if depth == d {
                self.leaves += 1;
                return match (self.on_leaf)(&self.images)? {
                    LeafAction::Continue => Ok(Flow::Continue),
                    LeafAction::Stop => Ok(Flow::StopAll),
                };
            }
            for &cand in self.candidates[depth] {
                self.nodes += 1;
                if self.nodes > self.budget.max_nodes {
                    return Err(Error::SearchBudget {
                        visited: self.nodes,
                    });
                }
                if self.nodes.is_multiple_of(8192) {
                    if let Some(wall) = self.budget.max_wall {
                        if self.started.elapsed() > wall {
                            return Err(Error::SearchBudget {
                                visited: self.nodes,
                            });
                        }
                    }
                }
                let mut next_span = span;
                next_span.insert(self.dst.frat_coord[cand as usize]);
                if next_span.rank() != self.src.prefix_rank[depth] {
                    continue;
                }
                self.images.push(cand);
                let ok = self.src.rels_by_depth[depth]
                    .iter()
                    .all(|&rel| {
                        relation_holds_ranks(&self.src.pres, &self.dst.table, &self.images, rel)
                    });
                if ok {
                    match self.go(depth + 1, next_span)? {
                        Flow::Continue => {}
                        Flow::StopAll => {
                            self.images.pop();
                            return Ok(Flow::StopAll);
                        }
                    }
                }
                self.images.pop();
            }
            Ok(Flow::Continue)
        }
    }

    let mut ctx = Ctx {
        src,
        dst,
        candidates,
        budget,
        started: Instant::now(),
        nodes: 0,
        leaves: 0,
        images: Vec::with_capacity(d),
        on_leaf,
    };
    let _ = ctx.go(0, Echelon::default())?;
    Ok(SearchResult {
        leaves: ctx.leaves,
        nodes: ctx.nodes,
    })
}

/// Full permutation of the target induced by a complete image assignment.
pub(crate) fn permutation(src: &GroupData, dst: &GroupData, images: &[u32]) -> Vec<u32> {
    let n = src.table.len();
    let d = images.len();
    // φ(g_k)^e precomputed for every digit value
    let mut pows: Vec<Vec<u32>> = Vec::with_capacity(d);
    for (k, &img) in images.iter().enumerate() {
        let m = src.pres.rel_order(k);
        let mut row = Vec::with_capacity(m as usize);
        let mut acc = 0u32;
        row.push(acc);
        for _ in 1..m {
            acc = dst.table.mul(acc, img);
            row.push(acc);
        }
        pows.push(row);
    }
    (0..n as u32)
        .map(|x| {
            let exps = src.table.unrank(x);
            let mut acc = 0u32;
            for (k, &e) in exps.iter().enumerate() {
                if e != 0 {
                    acc = dst.table.mul(acc, pows[k][e as usize]);
                }
            }
            acc
        })
        .collect()
}

pub(crate) fn perm_is_identity(perm: &[u32]) -> bool {
    perm.iter().enumerate().all(|(i, &v)| v as usize == i)
}

/// π^(2^s) with 2^s >= |domain|: the odd-order part of π. Identity exactly
/// when π has 2-power order.
pub(crate) fn perm_odd_part(perm: &[u32]) -> Vec<u32> {
    let mut s = 0;
    while (1usize << s) < perm.len() {
        s += 1;
    }
    let mut cur = perm.to_vec();
    for _ in 0..s {
        cur = cur.iter().map(|&v| cur[v as usize]).collect();
    }
    cur
}

/// True when every cycle length is odd, i.e. the permutation has odd order.
pub(crate) fn perm_order_is_odd(perm: &[u32]) -> bool {
    let mut seen = vec![false; perm.len()];
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut x = start;
        loop {
            seen[x] = true;
            len += 1;
            x = perm[x] as usize;
            if x == start {
                break;
            }
        }
        if len.is_multiple_of(2) {
            return false;
        }
    }
    true
}

