//! Exact computation and certification of approximate-degree bounds for
//! promise Boolean functions on one-hot matrix domains, plus a classical
//! simulator of a Grover-based permutation-testing algorithm.

pub mod cert;
pub mod domain;
pub mod embed;
pub mod error;
pub mod limits;
pub mod lp;
pub mod pipeline;
pub mod poly;
pub mod rational;
pub mod report;
pub mod sim;
pub mod simplex;
pub mod symmetry;
pub mod witness;
pub mod zoo;

pub use cert::{verify_witness, Failure, VerifyReport};
pub use domain::DomainPoint;
pub use embed::{Embedding, EmbeddingKind, RowSource};
pub use error::{Error, Result};
pub use lp::{approx_degree, extract_dual, min_error_at_degree, ApproxDegree, LpOptions, LpResult, Sided};
pub use pipeline::{Bundle, CertifiedBound, TraceStep};
pub use poly::{Monomial, SparsePolynomial};
pub use rational::{format_rational, parse_rational, Rational};
pub use sim::{AlgoParams, SimReport, SweepConfig, SweepResult};
pub use symmetry::{GroupElement, Symmetry};
pub use witness::{DualWitness, Orth};
pub use zoo::{Family, PromiseFunction};
