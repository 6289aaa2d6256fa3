//! Bimodules over the radical-square-zero cyclic Nakayama algebra `Q_n`.
//!
//! Indecomposable `A`-`A`-bimodules come in three families (strings, bands
//! and `k`-split bimodules). This crate describes them symbolically,
//! realizes them as representations of the torus quiver, tensors them both
//! by closed-form rules and by brute-force linear algebra, and computes the
//! left, right and two-sided cell structure of the resulting multisemigroup.

pub mod algebra;
pub mod cells;
pub mod certify;
pub mod decompose;
pub mod descriptors;
pub mod error;
pub mod linalg;
pub mod rational;
pub mod realize;
pub mod tensor_oracle;
pub mod tensor_rules;

pub use algebra::{AlgebraContext, CoveringVertex, TorusVertex};
pub use descriptors::{
    BandDescriptor, DecompositionMultiset, Descriptor, OneSided, Side, SplitDescriptor,
    StringDescriptor, StringType,
};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use rational::Q;
pub use realize::ConcreteBimodule;
