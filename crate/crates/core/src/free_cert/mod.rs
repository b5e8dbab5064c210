//! Free subgroup certificates.
//!
//! Two ping-pong engines produce proofs: one on curves for pairs of twists,
//! one on the projective line for pseudo-Anosov pairs. A brute-force relation
//! oracle cross-checks both. On top sits the pipeline that purifies a
//! generating set and extracts short free generators.

mod certificate;
pub mod oracle;
pub mod pipeline;
pub mod projective;
pub mod purify;

pub use certificate::{
    CertificateKind, CertificateParameters, ChainStep, FreeCertificate, ProjectivePingPongEvidence,
    TwistPingPongEvidence,
};
pub use oracle::{relation_oracle, relation_oracle_tree, Letter, Relation, Word};
pub use pipeline::{
    find_short_independent, theorem1_constants, DispatchCase, FindConfig, IndependenceResult,
    Theorem1Constants,
};
pub use projective::{projective_pingpong_cert, Arc, ProjPoint};
pub use purify::{purify, GenWord, PurifiedGenerators, SchreierGenerator};
