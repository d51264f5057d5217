//! Exact divisor theory on dual graphs of semistable curves.
//!
//! The crate covers graph Laplacians and twists ([`graph`]), Baker–Norine
//! rank via Dhar's burning algorithm ([`rank`]), numerical and abelian rank
//! brackets on graphs with vertex genera together with a constructive Clifford
//! bound ([`augmented`]), and Chabauty–Coleman point-count bounds with the
//! Newton-polygon correction ([`chabauty`]).

pub mod augmented;
pub mod chabauty;
pub mod error;
pub mod families;
pub mod graph;
pub mod io;
pub mod rank;

pub use augmented::{
    canonical_multidegree, clifford_certificate, enumerate_effective_twists, r_ab, r_ab_at_least, r_num,
    rank_hierarchy, twist_general_position_profile, AugmentedCurve, CertificateBranch, CliffordCertificate, ProfileRow,
    RankBounds, SectionOracle, TwistWitness,
};
pub use chabauty::{
    chabauty_bound, delta, delta_property_audit, residue_class_bound, ChabautyInputs, ChabautyReport, DeltaAudit,
    LocalArithmetic, Theorem,
};
pub use error::{Error, Result};
pub use graph::{
    canonical_graph_divisor, graph_genus, laplacian, multidegree_identity_check, GraphDivisor, Multigraph, Twist,
};
pub use rank::{
    graph_clifford_check, graph_divisor_rank, graph_rr_defect, is_equivalent_to_effective, is_linearly_equivalent,
    q_reduce, q_reduce_with_script, rank_with_witness, RankWitness, ReducedDivisor, Reduction,
};
