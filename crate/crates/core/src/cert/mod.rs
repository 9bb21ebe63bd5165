//! Verification of representations, the msr rule base and complement
//! inequality reports.

pub mod report;
pub mod rules;
pub mod verify;

pub use report::{gcc_check, replay_report, CertifyOptions, GccReport, Verdict};
pub use rules::{msr_rules, FactBase, MsrFact, Quantity, Rule, RuleInputs, ValueKind};
pub use verify::{verify_representation, GramCertificate};
