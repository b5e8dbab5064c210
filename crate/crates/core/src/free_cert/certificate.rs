use serde::Serialize;

use crate::farey_model::{MappingClass, Slope};
use crate::free_cert::projective::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    TwistPingpong,
    ProjectivePingpong,
    OracleOnly,
}

/// One verified link of an inequality chain, with both sides as text so
/// that exact integers and rationals print without loss.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub claim: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl ChainStep {
    pub fn new(claim: impl Into<String>, lhs: impl ToString, rhs: impl ToString, holds: bool) -> Self {
        ChainStep {
            claim: claim.into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds,
        }
    }
}

/// Evidence for the twist ping-pong on curves:
/// `X_a = {γ : i(γ,α) < i(γ,β)}`, `X_b = {γ : i(γ,β) < i(γ,α)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistPingPongEvidence {
    pub alpha: Slope,
    pub beta: Slope,
    pub a_power: i64,
    pub b_power: i64,
    pub alpha_beta_intersection: String,
    /// Inequalities that hold for every curve and every nonzero exponent.
    pub universal_chain: Vec<ChainStep>,
    pub sample_size: usize,
    pub sampled_in_xa: usize,
    pub sampled_in_xb: usize,
    /// Sampled `(γ, k)` pairs whose containment chain was replayed exactly.
    pub instances_replayed: usize,
}

/// Evidence for ping-pong on the projective line: closed arcs around the
/// attracting and repelling fixed points of each generator, with exact
/// rational endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectivePingPongEvidence {
    pub a_attracting: Arc,
    pub a_repelling: Arc,
    pub b_attracting: Arc,
    pub b_repelling: Arc,
    pub checks: Vec<ChainStep>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum CertificateParameters {
    Twist(TwistPingPongEvidence),
    Projective(ProjectivePingPongEvidence),
    Oracle { depth: usize },
}

/// Evidence that two mapping classes generate a rank-2 free group.
///
/// Twist and projective certificates are proofs. An oracle-only certificate
/// only asserts that no relation of length at most `depth` exists.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeCertificate {
    pub kind: CertificateKind,
    pub generators: [MappingClass; 2],
    pub parameters: CertificateParameters,
    /// Depth to which the relation oracle confirmed the absence of relations.
    pub oracle_cross_check_depth: Option<usize>,
}

impl FreeCertificate {
    pub fn is_proof(&self) -> bool {
        !matches!(self.kind, CertificateKind::OracleOnly)
    }
}
