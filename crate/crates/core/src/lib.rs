//! Arithmetic over double (split-complex) and dual numbers, projective lines
//! over these rings, Möbius maps, and one-parameter subgroups of GL₂ and SL₂
//! with their orbit equations.

pub mod algebra;
pub mod error;
pub mod matrix2;
pub mod moebius;
pub mod orbits;
pub mod projline;
pub mod subgroups;
pub mod verify;

pub use algebra::{AlgebraKind, ElementClass, Hypercomplex, Sigma, Tolerances, TAU_ALG, TAU_ZERO};
pub use error::{Error, Result};
pub use matrix2::{Element, GroupMembership, Mat2, RealMat2};
pub use projline::{CanonicalClass, OrbitLabel, PrFamily, ProjPoint, RealRatio};
pub use moebius::{FixedFamily, FixedPoints, KernelRing, MapClass, MapReport, MapType, MoebiusMap};
pub use orbits::{OrbitEquation, OrbitRow, OrbitSample, StartPoint};
pub use subgroups::{CentralizerSolution, SigmaKind, SubgroupSpec, SubgroupType};
pub use verify::{VerifyConfig, VerifyReport};
