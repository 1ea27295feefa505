//! Bottom-up construction of the coclass graph G(2,r), r <= 3.
//!
//! Level by level in the order, every kept node (coclass <= r) is extended
//! centrally by C2; children with coclass <= r survive, are deduplicated by
//! fingerprint buckets plus isomorphism tests, and become the next level.
//! Keeping the full coclass <= r set is what makes the walk complete: a
//! central order-2 quotient lowers coclass by at most one, so every group
//! of coclass <= r sits above some kept parent. The graph's vertices are
//! the kept nodes of coclass exactly r; a vertex H of class c has an
//! incoming edge exactly when its last nontrivial lower-central term has
//! order 2, and then the parent is H modulo that term.

mod tails;

pub use tails::{central_extensions, TailSystem, EXTENSION_CAP_BITS};

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::morphisms::{automorphism_order, isomorphism, AutReport, SearchBudget};
use crate::pcp::PcPresentation;
use crate::structure::{
    class_and_coclass, fingerprint, lower_central_series, quotient, Fingerprint, InducedSequence,
};

/// Default ceiling on the build order.
pub const ORDER_CEILING: u64 = 1 << 9;

#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub order_ceiling: u64,
    pub search_budget: SearchBudget,
    pub parallel: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            order_ceiling: ORDER_CEILING,
            search_budget: SearchBudget::default(),
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoclassNode {
    pub id: u32,
    pub pres: Arc<PcPresentation>,
    pub order: u64,
    pub class: u32,
    pub coclass: u32,
    pub fingerprint: Fingerprint,
    /// Lazily annotated; `None` means not yet computed or out of budget.
    pub aut: Option<AutReport>,
}

#[derive(Debug, Clone)]
pub struct CoclassEdge {
    pub parent: u32,
    pub child: u32,
    /// The order-2 normal subgroup of the child with child/N = parent: its
    /// last nontrivial lower-central term.
    pub n_subgroup: InducedSequence,
}

#[derive(Debug)]
pub struct CoclassGraph {
    pub r: u32,
    pub max_order: u64,
    pub nodes: Vec<CoclassNode>,
    pub edges: Vec<CoclassEdge>,
}

/// Outcome of checking the edge-propagation property: along every edge,
/// a 2-group automorphism group upstairs forces one downstairs.
#[derive(Debug, Default)]
pub struct LemmaOutcome {
    pub violations: Vec<(u32, u32)>,
    /// Edges with an endpoint whose Aut is not annotated yet.
    pub unchecked: Vec<(u32, u32)>,
}

#[derive(Debug, Default, Clone)]
pub struct OrderExceptions {
    pub vertex_count: usize,
    pub exceptional: Vec<u32>,
    pub unchecked: Vec<u32>,
}

/// Per-order counts of coclass-r vertices whose automorphism group is not
/// a 2-group.
pub type ExceptionsReport = BTreeMap<u64, OrderExceptions>;

pub fn build_graph(r: u32, max_order: u64, cfg: &BuildConfig) -> Result<CoclassGraph> {
    if !(1..=3).contains(&r) {
        return Err(Error::InvalidParameter(format!(
            "coclass must be 1, 2 or 3, got {r}"
        )));
    }
    if !max_order.is_power_of_two() || max_order < 2 {
        return Err(Error::InvalidParameter(format!(
            "max order must be a power of two >= 2, got {max_order}"
        )));
    }
    if max_order > cfg.order_ceiling {
        return Err(Error::OrderCeiling {
            order: max_order,
            ceiling: cfg.order_ceiling,
        });
    }

    let mut graph = CoclassGraph {
        r,
        max_order,
        nodes: Vec::new(),
        edges: Vec::new(),
    };

    // Root level: the unique group of order 2.
    let c2 = Arc::new(crate::families::cyclic(2)?);
    push_node(&mut graph, c2)?;

    let mut level_order = 2u64;
    while level_order < max_order {
        let child_order = level_order * 2;
        let parents: Vec<Arc<PcPresentation>> = graph
            .nodes
            .iter()
            .filter(|n| n.order == level_order)
            .map(|n| Arc::clone(&n.pres))
            .collect();

        // All extension candidates in deterministic (parent, solution) order.
        let mut candidates: Vec<PcPresentation> = Vec::new();
        for parent in &parents {
            candidates.extend(central_extensions(parent)?);
        }

        // Class, coclass and fingerprint per candidate, in parallel.
        let assess = |p: PcPresentation| -> Result<Option<(PcPresentation, u32, u32, Fingerprint)>> {
            let report = p.check_consistency()?;
            debug_assert!(report.consistent, "tail solutions are consistent");
            if !report.consistent {
                return Err(Error::Inconsistent);
            }
            let (class, coclass) = class_and_coclass(&p)?;
            if coclass > r {
                return Ok(None);
            }
            let fp = fingerprint(&p)?;
            Ok(Some((p, class, coclass, fp)))
        };
        let assessed: Vec<Option<(PcPresentation, u32, u32, Fingerprint)>> = if cfg.parallel {
            candidates
                .into_par_iter()
                .map(assess)
                .collect::<Result<_>>()?
        } else {
            candidates
                .into_iter()
                .map(assess)
                .collect::<Result<_>>()?
        };

        // Sequential dedup in candidate order keeps ids deterministic.
        let mut buckets: BTreeMap<String, Vec<u32>> = BTreeMap::new();
        for entry in assessed.into_iter().flatten() {
            let (pres, class, coclass, fp) = entry;
            let key = fp.canonical_json();
            let pres = Arc::new(pres);
            let mut known = false;
            for &id in buckets.get(&key).into_iter().flatten() {
                if isomorphism(&graph.nodes[id as usize].pres, &pres, &cfg.search_budget)?
                    .is_some()
                {
                    known = true;
                    break;
                }
            }
            if !known {
                let id = graph.nodes.len() as u32;
                graph.nodes.push(CoclassNode {
                    id,
                    pres,
                    order: child_order,
                    class,
                    coclass,
                    fingerprint: fp,
                    aut: None,
                });
                buckets.entry(key).or_default().push(id);
            }
        }

        // Edges into the new vertices (coclass exactly r).
        let child_ids: Vec<u32> = graph
            .nodes
            .iter()
            .filter(|n| n.order == child_order && n.coclass == r)
            .map(|n| n.id)
            .collect();
        for id in child_ids {
            let child = &graph.nodes[id as usize];
            let series = lower_central_series(&child.pres)?;
            if series.terms.len() < 2 {
                continue; // trivial or class-0; no edge
            }
            let last = series.terms[series.terms.len() - 2].clone();
            if last.order(&child.pres) != 2 {
                continue; // no same-coclass parent exists
            }
            let parent_pres = Arc::new(quotient(&child.pres, &last)?);
            let (_, parent_coclass) = class_and_coclass(&parent_pres)?;
            if parent_coclass != r {
                continue;
            }
            let parent_id = graph
                .nodes
                .iter()
                .filter(|n| n.order == level_order && n.coclass == r)
                .find_map(|n| {
                    isomorphism(&n.pres, &parent_pres, &cfg.search_budget)
                        .transpose()
                        .map(|res| res.map(|_| n.id))
                })
                .transpose()?;
            let Some(parent_id) = parent_id else {
                return Err(Error::InvalidParameter(
                    "internal: parent of a vertex is missing from the previous level".into(),
                ));
            };
            graph.edges.push(CoclassEdge {
                parent: parent_id,
                child: id,
                n_subgroup: last,
            });
        }

        level_order = child_order;
    }
    Ok(graph)
}

fn push_node(graph: &mut CoclassGraph, pres: Arc<PcPresentation>) -> Result<()> {
    let (class, coclass) = class_and_coclass(&pres)?;
    let fp = fingerprint(&pres)?;
    let id = graph.nodes.len() as u32;
    graph.nodes.push(CoclassNode {
        id,
        pres: Arc::clone(&pres),
        order: pres.order_product(),
        class,
        coclass,
        fingerprint: fp,
        aut: None,
    });
    Ok(())
}

impl CoclassGraph {
    /// The coclass-exactly-r nodes.
    pub fn vertices(&self) -> impl Iterator<Item = &CoclassNode> {
        let r = self.r;
        self.nodes.iter().filter(move |n| n.coclass == r)
    }

    pub fn node(&self, id: u32) -> &CoclassNode {
        &self.nodes[id as usize]
    }

    /// Computes Aut for every vertex (coclass-r node). Budget exhaustion
    /// leaves a node unchecked instead of failing the run.
    pub fn annotate_auts(&mut self, budget: &SearchBudget, parallel: bool) -> Result<()> {
        let todo: Vec<usize> = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.coclass == self.r && n.aut.is_none())
            .map(|(i, _)| i)
            .collect();
        let compute = |&i: &usize| -> Result<(usize, Option<AutReport>)> {
            match automorphism_order(&self.nodes[i].pres, budget) {
                Ok(report) => Ok((i, Some(report))),
                Err(Error::SearchBudget { .. }) => Ok((i, None)),
                Err(e) => Err(e),
            }
        };
        let results: Vec<(usize, Option<AutReport>)> = if parallel {
            todo.par_iter().map(compute).collect::<Result<_>>()?
        } else {
            todo.iter().map(compute).collect::<Result<_>>()?
        };
        for (i, report) in results {
            self.nodes[i].aut = report;
        }
        Ok(())
    }

    /// Every edge where the parent has 2-group Aut but the child does not.
    /// The propagation property says this list is empty.
    pub fn lemma_check(&self) -> LemmaOutcome {
        let mut out = LemmaOutcome::default();
        for e in &self.edges {
            let parent = &self.nodes[e.parent as usize];
            let child = &self.nodes[e.child as usize];
            match (&parent.aut, &child.aut) {
                (Some(pa), Some(ca)) => {
                    if pa.is_2_group() && !ca.is_2_group() {
                        out.violations.push((e.parent, e.child));
                    }
                }
                _ => out.unchecked.push((e.parent, e.child)),
            }
        }
        out
    }

    /// Per-order vertex counts and ids of exceptions (vertices whose Aut is
    /// not a 2-group), with unchecked vertices flagged separately.
    pub fn exceptions_report(&self) -> ExceptionsReport {
        let mut report = ExceptionsReport::new();
        for n in self.vertices() {
            let entry = report.entry(n.order).or_default();
            entry.vertex_count += 1;
            match &n.aut {
                Some(a) if !a.is_2_group() => entry.exceptional.push(n.id),
                Some(_) => {}
                None => entry.unchecked.push(n.id),
            }
        }
        report
    }

    /// Number of immediate descendants (same-coclass children) of a vertex.
    /// Read off the built edges when the next level exists, computed on
    /// demand otherwise.
    pub fn capability(&self, node_id: u32, cfg: &BuildConfig) -> Result<usize> {
        let node = self.node(node_id);
        if node.coclass != self.r {
            return Err(Error::InvalidParameter(format!(
                "node {node_id} has coclass {}, not {}",
                node.coclass, self.r
            )));
        }
        if node.order * 2 <= self.max_order {
            return Ok(self
                .edges
                .iter()
                .filter(|e| e.parent == node_id)
                .count());
        }
        Ok(immediate_descendants(&node.pres, self.r, cfg)?.len())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .map(|n| {
                json!({
                    "id": n.id,
                    "order": n.order,
                    "class": n.class,
                    "coclass": n.coclass,
                    "fingerprint": serde_json::from_str::<serde_json::Value>(
                        &n.fingerprint.canonical_json()
                    )
                    .expect("fingerprint json"),
                    "pcp": n.pres.to_text(),
                    "aut": n.aut.as_ref().map(|a| a.to_json()),
                })
            })
            .collect();
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                json!({
                    "parent": e.parent,
                    "child": e.child,
                    "n_subgroup": e
                        .n_subgroup
                        .members()
                        .iter()
                        .map(|m| m.exponents().to_vec())
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "r": self.r,
            "max_order": self.max_order,
            "nodes": nodes,
            "edges": edges,
        })
    }
}

/// Immediate descendants of a coclass-r group: central extensions whose
/// class grew by one, up to isomorphism.
pub fn immediate_descendants(
    p: &Arc<PcPresentation>,
    r: u32,
    cfg: &BuildConfig,
) -> Result<Vec<Arc<PcPresentation>>> {
    let (class, coclass) = class_and_coclass(p)?;
    if coclass != r {
        return Err(Error::InvalidParameter(format!(
            "group has coclass {coclass}, expected {r}"
        )));
    }
    let candidates = central_extensions(p)?;
    let assess = |q: PcPresentation| -> Result<Option<(PcPresentation, Fingerprint)>> {
        let (c, _) = class_and_coclass(&q)?;
        if c != class + 1 {
            return Ok(None);
        }
        let fp = fingerprint(&q)?;
        Ok(Some((q, fp)))
    };
    let assessed: Vec<Option<(PcPresentation, Fingerprint)>> = if cfg.parallel {
        candidates
            .into_par_iter()
            .map(assess)
            .collect::<Result<_>>()?
    } else {
        candidates.into_iter().map(assess).collect::<Result<_>>()?
    };
    let mut kept: Vec<(String, Arc<PcPresentation>)> = Vec::new();
    'outer: for (pres, fp) in assessed.into_iter().flatten() {
        let key = fp.canonical_json();
        let pres = Arc::new(pres);
        for (k, rep) in &kept {
            if *k == key && isomorphism(rep, &pres, &cfg.search_budget)?.is_some() {
                continue 'outer;
            }
        }
        kept.push((key, pres));
    }
    Ok(kept.into_iter().map(|(_, p)| p).collect())
}

#[cfg(test)]
mod tests;
