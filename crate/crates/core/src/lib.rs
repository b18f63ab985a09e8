//! Exact algebra for product decompositions of finite zero sets over finite
//! fields, and for the degree filtrations `V_{F,i}` that bound how hard such
//! systems are to solve.
//!
//! Layout, bottom up:
//! - [`gf`]: finite fields `F_{(p^m)^e}` and univariate polynomials
//! - [`exactla`]: dense exact linear algebra (rref, kernels, span membership)
//! - [`mpoly`]: sparse multivariate polynomials, linear maps and pullbacks
//! - [`points`]: point sets, zero sets, vanishing-ideal slices
//! - [`lastfall`]: the `V_{F,i}` filtration, last fall degree, rational points
//! - [`fieldeq`]: field equations and their expanded p-power chains
//! - [`decomp`]: generating, detecting, verifying and canonicalizing decompositions
//! - [`text`]: line-oriented file formats
//! - [`cli`]: the `proddecomp` command

pub mod cli;
pub mod decomp;
pub mod error;
pub mod exactla;
pub mod fieldeq;
pub mod gf;
pub mod lastfall;
pub mod limits;
pub mod mpoly;
pub mod points;
pub mod text;

pub use error::{Error, Result};
pub use gf::{Field, FieldElement, UniPoly};
pub use limits::Limits;
