//! Exact computational group theory for rank two sphere actions.
//!
//! Given a finite group by permutation generators, this crate decides rank
//! and `Qd(p)`-freeness, searches for fusion-stable `p`-effective characters
//! of Sylow subgroups, assembles them into compatible families over the
//! prime-power subgroups, and derives fixed-point dimension functions and a
//! verifiable certificate.

pub mod certifier;
pub mod chartab;
pub mod cyclotomic;
pub mod effective;
pub mod error;
pub mod family;
pub mod perm;
pub mod permgroup;
pub mod pstructure;
pub mod spheremodel;

pub use error::{Error, Result};
pub use perm::Permutation;
pub use permgroup::{build_group, PermutationGroup, ScaleLimit, SubgroupHandle};
pub use certifier::{certify, verify_certificate, Certificate, CertifyOptions, Verdict};
