//! Assembly of complement inequality reports and their replay.

use log::debug;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cactus::{
    recognize_cactus, tree_cover_bounds, tree_cover_oracle, CactusClass, CactusProfile, TreeCoverBounds,
    TREE_COVER_ORACLE_LIMIT,
};
use crate::cert::rules::{msr_rules, MsrFact, Quantity, Rule, RuleInputs, ValueKind, COMPLEMENT_ID, GRAPH_ID};
use crate::cert::verify::{verify_representation, GramCertificate};
use crate::error::{Error, Result};
use crate::format::{to_json, JsonGraph};
use crate::graph::Graph;
use crate::ordering::validate_cdelta_graph;
use crate::ortho::{build_representation, representation_to_json, DimPolicy, OrthoRepresentation, RepresentationJson};
use crate::Rational;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub dim: DimPolicy,
    pub seed: u64,
    /// Run the exhaustive tree cover search when the graph is small enough.
    pub oracle: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { dim: DimPolicy::Auto, seed: 0, oracle: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportedValue {
    pub value: usize,
    pub value_kind: ValueKind,
    pub fact: usize,
    pub rule_chain: Vec<Rule>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GccReport {
    pub graph_id: String,
    pub graph: JsonGraph,
    pub n: usize,
    pub class: CactusClass,
    pub cycle_count: usize,
    pub ordering: Vec<usize>,
    pub representation_ref: String,
    pub representation: RepresentationJson,
    pub dim: usize,
    pub fallback_from: Option<usize>,
    pub certificate: GramCertificate,
    pub tree_cover: TreeCoverBounds,
    pub cdelta_labeling: bool,
    pub msr_g: Option<ReportedValue>,
    pub msr_comp_bound: Option<usize>,
    pub msr_comp: Option<ReportedValue>,
    pub inequality: Option<Inequality>,
    pub verdict: Verdict,
    pub reason: Option<String>,
    pub provenance: Vec<MsrFact>,
    pub options: CertifyOptions,
    pub seed: u64,
    pub version: String,
}

impl GccReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Content address of a graph, stable across runs.
pub fn graph_id(g: &Graph) -> String {
    format!("g-{}", &sha256_hex(to_json(g).as_bytes())[..16])
}

pub fn representation_ref(rep: &OrthoRepresentation<Rational>) -> String {
    format!("sha256:{}", sha256_hex(representation_to_json(rep).as_bytes()))
}

/// Certifies `msr(G) + msr(complement(G)) <= |G| + 2` for a connected cactus.
pub fn gcc_check(g: &Graph, options: &CertifyOptions) -> Result<GccReport> {
    let profile = require_cactus(g)?;
    let rep = build_representation(g, options.dim, options.seed)?;
    assemble(g, &profile, &rep, options)
}

fn require_cactus(g: &Graph) -> Result<CactusProfile> {
    if g.n() == 0 {
        return Err(Error::TooSmall { n: 0, min: 1 });
    }
    let profile = recognize_cactus(g)?;
    if !profile.is_cactus {
        return Err(Error::NotCactus);
    }
    Ok(profile)
}

/// Re-runs verification and the rule base from the serialized graph and
/// representation in `report`.
pub fn replay_report(report: &GccReport) -> Result<GccReport> {
    let g = Graph::try_from(&report.graph)?;
    let profile = require_cactus(&g)?;
    let mut rep = report.representation.clone().into_representation(&g)?;
    rep.fallback_from = report.fallback_from;
    if representation_ref(&rep) != report.representation_ref {
        return Err(Error::InvalidRepresentation("representation digest mismatch".into()));
    }
    assemble(&g, &profile, &rep, &report.options)
}

/// Builds a report around an existing representation of the complement.
pub fn assemble(
    g: &Graph,
    profile: &CactusProfile,
    rep: &OrthoRepresentation<Rational>,
    options: &CertifyOptions,
) -> Result<GccReport> {
    let n = g.n();
    let certificate = verify_representation(rep, &g.complement())?;
    let mut tree_cover = tree_cover_bounds(profile)?;
    if options.oracle {
        if n <= TREE_COVER_ORACLE_LIMIT {
            tree_cover = tree_cover.with_oracle(&tree_cover_oracle(g)?);
        } else {
            debug!("tree cover search skipped for n = {n}");
        }
    }
    let cdelta_labeling = n >= 4 && validate_cdelta_graph(g, &rep.ordering).unwrap_or(false);
    let facts = msr_rules(
        g,
        &RuleInputs { tree_cover: Some(tree_cover), certificate: Some(&certificate), cdelta_validated: cdelta_labeling },
    );
    facts.check_consistency()?;

    let reported = |f: &MsrFact| ReportedValue {
        value: f.value,
        value_kind: f.value_kind,
        fact: f.id,
        rule_chain: facts.rule_chain(f.id),
    };
    let msr_g = facts.best_upper(GRAPH_ID, Quantity::Msr).map(reported);
    let msr_comp = facts
        .about(COMPLEMENT_ID, Quantity::Msr)
        .find(|f| f.rule == Rule::OrthogonalRepresentation)
        .map(reported);
    let inequality = match (&msr_g, &msr_comp) {
        (Some(a), Some(b)) => {
            let lhs = a.value + b.value;
            Some(Inequality { lhs, rhs: n + 2, holds: lhs <= n + 2 })
        }
        _ => None,
    };

    let reason = if !certificate.pattern_ok {
        Some(format!(
            "representation disagrees with the complement on {} pairs",
            certificate.mismatches.len()
        ))
    } else if msr_g.is_none() {
        Some("no rule gives an upper bound on msr(G)".to_string())
    } else {
        match inequality {
            Some(i) if i.holds => None,
            Some(i) => Some(match rep.fallback_from {
                Some(d0) => format!(
                    "no dimension {d0} representation was found; the dimension {} bound gives {} > {}",
                    rep.dim, i.lhs, i.rhs
                ),
                None => format!("bound {} exceeds {}", i.lhs, i.rhs),
            }),
            None => Some("no bound on msr of the complement".to_string()),
        }
    };

    Ok(GccReport {
        graph_id: graph_id(g),
        graph: JsonGraph::from(g),
        n,
        class: profile.class,
        cycle_count: profile.cycle_count,
        ordering: rep.ordering.clone(),
        representation_ref: representation_ref(rep),
        representation: RepresentationJson::from(rep),
        dim: rep.dim,
        fallback_from: rep.fallback_from,
        msr_comp_bound: msr_comp.as_ref().map(|c| c.value),
        certificate,
        tree_cover,
        cdelta_labeling,
        msr_g,
        msr_comp,
        inequality,
        verdict: if reason.is_none() { Verdict::Certified } else { Verdict::NotCertified },
        reason,
        provenance: facts.facts,
        options: *options,
        seed: options.seed,
        version: VERSION.to_string(),
    })
}
