//! Geometry of projections in finite-dimensional normed spaces.
//!
//! The central object is a certificate: finitely many functional/vector
//! pairs (f_j, y_j) with unit-ball functionals and sum y_j f_j^T equal to
//! the identity. Such a certificate factors the identity through a
//! max-norm space and proves that any convex body containing the zonotope
//! spanned by the y_j catches the image of a norm-one projection from any
//! enveloping space. The crate builds, verifies, transforms, searches, and
//! renders these certificates and the convex bodies they live on.

pub mod body;
pub mod box_recovery;
pub mod certificate;
pub mod disc_strip;
pub mod error;
pub mod euclidean;
pub mod geometry;
pub mod group;
pub mod linalg;
pub mod lp;
pub mod minvol;
pub mod net;
pub mod prism;
pub mod projection;
pub mod render;
pub mod rotation;
pub mod search;
pub mod space;
pub mod tol;

pub use body::Body;
pub use error::{Error, Result};
pub use space::NormedSpace;
pub use tol::TolerancePolicy;
