//! Rule base for minimum semidefinite rank facts.
//!
//! Every fact names the rule that produced it and the ids of the facts it
//! was derived from, so a value can be traced back to base cases.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cactus::TreeCoverBounds;
use crate::cert::verify::GramCertificate;
use crate::chordal::{clique_cover_chordal, is_chordal};
use crate::error::{Error, Result};
use crate::graph::{block_decomposition, Graph};

pub const GRAPH_ID: &str = "G";
pub const COMPLEMENT_ID: &str = "complement";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Msr,
    /// Maximum positive semidefinite nullity `M+`.
    MaxNullity,
    TreeCover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Exact,
    UpperBound,
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `msr(T) = |T| - 1` for a tree.
    Tree,
    /// `msr(C_n) = n - 2`.
    Cycle,
    /// `msr(G) = msr(G - v) + 1` for a pendant vertex `v`.
    Pendant,
    /// `msr(G) = cc(G)` for connected chordal `G`.
    Chordal,
    /// `msr` is additive over the blocks of a graph (the cut vertex rule
    /// applied at every cut vertex).
    CutVertex,
    /// `msr(G) = |G| - T(G)` for outerplanar `G`.
    OuterplanarIdentity,
    /// `msr(H) <= |H| - δ(H)` for a δ-graph `H`, applied to the complement
    /// of a graph with a validated C-δ labeling.
    DeltaGraphBound,
    /// `msr` is at most the rank of a verified orthogonal representation.
    OrthogonalRepresentation,
    /// `msr + M+ = |G|`.
    RankNullity,
    /// Tree cover bounds implied by the number of cycles of a cactus.
    CactusCycleCount,
    /// Exhaustive minimum tree cover.
    TreeCoverSearch,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("rule serializes");
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MsrFact {
    pub id: usize,
    pub graph_id: String,
    pub quantity: Quantity,
    pub value_kind: ValueKind,
    pub value: usize,
    pub rule: Rule,
    pub premises: Vec<usize>,
}

/// Everything the rules may draw on besides the graph itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct RuleInputs<'a> {
    /// Present only for cacti, which are outerplanar.
    pub tree_cover: Option<TreeCoverBounds>,
    /// Verified representation of the complement.
    pub certificate: Option<&'a GramCertificate>,
    /// A C-δ labeling of the graph that has been validated.
    pub cdelta_validated: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactBase {
    pub facts: Vec<MsrFact>,
}

impl FactBase {
    fn add(&mut self, graph_id: &str, quantity: Quantity, kind: ValueKind, value: usize, rule: Rule, premises: Vec<usize>) -> usize {
        let id = self.facts.len();
        self.facts.push(MsrFact {
            id,
            graph_id: graph_id.to_string(),
            quantity,
            value_kind: kind,
            value,
            rule,
            premises,
        });
        id
    }

    fn msr(&mut self, graph_id: &str, kind: ValueKind, value: usize, rule: Rule, premises: Vec<usize>) -> usize {
        self.add(graph_id, Quantity::Msr, kind, value, rule, premises)
    }

    pub fn get(&self, id: usize) -> &MsrFact {
        &self.facts[id]
    }

    pub fn about<'s>(&'s self, graph_id: &'s str, quantity: Quantity) -> impl Iterator<Item = &'s MsrFact> + 's {
        self.facts.iter().filter(move |f| f.graph_id == graph_id && f.quantity == quantity)
    }

    /// The strongest fact usable as an upper bound: an exact value if one
    /// exists, otherwise the smallest upper bound. Ties go to the earliest.
    pub fn best_upper<'s>(&'s self, graph_id: &'s str, quantity: Quantity) -> Option<&'s MsrFact> {
        let facts: Vec<&MsrFact> = self.about(graph_id, quantity).collect();
        facts
            .iter()
            .find(|f| f.value_kind == ValueKind::Exact)
            .or_else(|| {
                facts
                    .iter()
                    .filter(|f| f.value_kind == ValueKind::UpperBound)
                    .min_by_key(|f| (f.value, f.id))
            })
            .copied()
    }

    /// Rules along the derivation of `id`, depth first, premises after the
    /// fact they support.
    pub fn rule_chain(&self, id: usize) -> Vec<Rule> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(i) = stack.pop() {
            let f = &self.facts[i];
            out.push(f.rule);
            stack.extend(f.premises.iter().rev());
        }
        out
    }

    /// Fails if exact values disagree or some lower bound exceeds some upper
    /// bound for the same graph and quantity.
    pub fn check_consistency(&self) -> Result<()> {
        // strongest lower and upper bound per graph and quantity
        let mut groups: BTreeMap<(&str, Quantity), Bounds<'_>> = BTreeMap::new();
        for f in &self.facts {
            let (lo, hi) = groups.entry((f.graph_id.as_str(), f.quantity)).or_default();
            if matches!(f.value_kind, ValueKind::Exact | ValueKind::LowerBound)
                && lo.is_none_or(|l| f.value > l.value)
            {
                *lo = Some(f);
            }
            if matches!(f.value_kind, ValueKind::Exact | ValueKind::UpperBound)
                && hi.is_none_or(|h| f.value < h.value)
            {
                *hi = Some(f);
            }
        }
        for ((graph_id, quantity), (lo, hi)) in groups {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if lo.value > hi.value {
                    return Err(Error::Contradiction {
                        graph_id: graph_id.to_string(),
                        detail: format!(
                            "{quantity:?}: fact {} ({}) gives at least {}, fact {} ({}) gives at most {}",
                            lo.id, lo.rule, lo.value, hi.id, hi.rule, hi.value
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

type Bounds<'a> = (Option<&'a MsrFact>, Option<&'a MsrFact>);

fn subgraph_id(labels: &[usize]) -> String {
    let parts: Vec<String> = labels.iter().map(usize::to_string).collect();
    format!("G[{}]", parts.join(","))
}

/// Exact msr of a graph that is a tree, a cycle or chordal, by the first
/// rule that applies.
fn base_fact(fb: &mut FactBase, h: &Graph, id: &str) -> Option<usize> {
    let n = h.n();
    if h.is_tree() {
        return Some(fb.msr(id, ValueKind::Exact, n - 1, Rule::Tree, vec![]));
    }
    if h.is_cycle() {
        return Some(fb.msr(id, ValueKind::Exact, n - 2, Rule::Cycle, vec![]));
    }
    if h.is_connected() {
        if let Ok(cc) = clique_cover_chordal(h) {
            return Some(fb.msr(id, ValueKind::Exact, cc, Rule::Chordal, vec![]));
        }
    }
    None
}

/// Sums exact block values over the block decomposition. `labels` maps
/// vertices of `h` to vertices of the input graph.
fn block_sum(fb: &mut FactBase, h: &Graph, labels: &[usize], id: &str) -> Option<usize> {
    let bd = block_decomposition(h).ok()?;
    if bd.blocks.len() < 2 {
        return None;
    }
    let mut premises = Vec::with_capacity(bd.blocks.len());
    let mut total = 0;
    for block in &bd.blocks {
        let sub = h.induced_subgraph(&block.vertices).ok()?;
        let sub_labels: Vec<usize> = block.vertices.iter().map(|&v| labels[v]).collect();
        let f = base_fact(fb, &sub, &subgraph_id(&sub_labels))?;
        total += fb.get(f).value;
        premises.push(f);
    }
    Some(fb.msr(id, ValueKind::Exact, total, Rule::CutVertex, premises))
}

/// Applies every rule that fits. Rules whose hypotheses fail emit nothing.
pub fn msr_rules(g: &Graph, inputs: &RuleInputs<'_>) -> FactBase {
    let mut fb = FactBase::default();
    let n = g.n();
    let labels: Vec<usize> = (0..n).collect();
    let connected = n > 0 && g.is_connected();

    if connected {
        if g.is_tree() {
            fb.msr(GRAPH_ID, ValueKind::Exact, n - 1, Rule::Tree, vec![]);
        }
        if g.is_cycle() {
            fb.msr(GRAPH_ID, ValueKind::Exact, n - 2, Rule::Cycle, vec![]);
        }
        if is_chordal(g) {
            let cc = clique_cover_chordal(g).expect("chordal");
            fb.msr(GRAPH_ID, ValueKind::Exact, cc, Rule::Chordal, vec![]);
        }
        block_sum(&mut fb, g, &labels, GRAPH_ID);

        // one pendant reduction, then blocks or a base case for the rest
        if n >= 2 {
            if let Some(v) = (0..n).find(|&v| g.degree(v) == 1) {
                let rest: Vec<usize> = (0..n).filter(|&u| u != v).collect();
                let h = g.induced_subgraph(&rest).expect("in range");
                let rid = subgraph_id(&rest);
                let sub = block_sum(&mut fb, &h, &rest, &rid).or_else(|| base_fact(&mut fb, &h, &rid));
                if let Some(p) = sub {
                    let value = fb.get(p).value + 1;
                    fb.msr(GRAPH_ID, ValueKind::Exact, value, Rule::Pendant, vec![p]);
                }
            }
        }
    }

    if let Some(t) = inputs.tree_cover {
        let rule = if t.exact.is_some() && (t.lower != t.upper) { Rule::TreeCoverSearch } else { Rule::CactusCycleCount };
        let tc = |fb: &mut FactBase, kind, value, rule| fb.add(GRAPH_ID, Quantity::TreeCover, kind, value, rule, vec![]);
        match t.exact {
            Some(e) => {
                let id = tc(&mut fb, ValueKind::Exact, e, rule);
                fb.msr(GRAPH_ID, ValueKind::Exact, n - e, Rule::OuterplanarIdentity, vec![id]);
                if rule == Rule::TreeCoverSearch {
                    tc(&mut fb, ValueKind::LowerBound, t.lower, Rule::CactusCycleCount);
                    tc(&mut fb, ValueKind::UpperBound, t.upper, Rule::CactusCycleCount);
                }
            }
            None => {
                let lo = tc(&mut fb, ValueKind::LowerBound, t.lower, Rule::CactusCycleCount);
                let hi = tc(&mut fb, ValueKind::UpperBound, t.upper, Rule::CactusCycleCount);
                fb.msr(GRAPH_ID, ValueKind::UpperBound, n.saturating_sub(t.lower), Rule::OuterplanarIdentity, vec![lo]);
                fb.msr(GRAPH_ID, ValueKind::LowerBound, n.saturating_sub(t.upper), Rule::OuterplanarIdentity, vec![hi]);
            }
        }
    }

    if let Some(c) = inputs.certificate.filter(|c| c.pattern_ok) {
        fb.msr(COMPLEMENT_ID, ValueKind::UpperBound, c.rank, Rule::OrthogonalRepresentation, vec![]);
    }
    if inputs.cdelta_validated {
        let (_, max_degree) = g.degree_stats();
        fb.msr(COMPLEMENT_ID, ValueKind::UpperBound, max_degree + 1, Rule::DeltaGraphBound, vec![]);
    }

    let msr_facts: Vec<MsrFact> = fb.facts.iter().filter(|f| f.quantity == Quantity::Msr).cloned().collect();
    for f in msr_facts {
        if !(f.graph_id == GRAPH_ID || f.graph_id == COMPLEMENT_ID) {
            continue;
        }
        let kind = match f.value_kind {
            ValueKind::Exact => ValueKind::Exact,
            ValueKind::UpperBound => ValueKind::LowerBound,
            ValueKind::LowerBound => ValueKind::UpperBound,
        };
        fb.add(&f.graph_id, Quantity::MaxNullity, kind, n - f.value, Rule::RankNullity, vec![f.id]);
    }
    fb
}
