//! Exact arithmetic for multiplicative Horn divisibilities of finite torsion
//! modules over a principal ideal domain.
//!
//! A torsion module `R^N / diag(θ₁, …, θ_N) R^N` with `θ_{n+1} | θ_n` plays the
//! role of a Jordan operator; a submodule plays the role of an invariant
//! subspace. The crate provides:
//!
//! * [`valuation`]: divisibility of PID elements up to units (exponent vectors
//!   over abstract atoms) and partitions;
//! * [`ring`], [`matrix`], [`snf`], [`linalg`]: exact matrices over the
//!   integers or `F_p[x]`, Smith and Hermite forms, fraction-field elimination;
//! * [`module`]: torsion modules, submodules, quotients, bases, complements;
//! * [`lr`]: Littlewood–Richardson coefficients and Horn triples;
//! * [`schubert`]: flags, Schubert conditions and triple-intersection witnesses;
//! * [`horn`]: the end-to-end divisibility certificate for a (module,
//!   submodule, triple);
//! * [`inverse`]: feasibility and realization of prescribed invariant data.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod finite;
pub mod horn;
pub mod inverse;
pub mod linalg;
pub mod lr;
pub mod matrix;
pub mod module;
pub mod ring;
pub mod schubert;
pub mod snf;
pub mod valuation;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use ring::{Field, Frac, GfPoly, Integer, Pid, Ring};
pub use valuation::{Atom, ExponentVector, Partition, PerAtom};
