//! Exact algebra for constacyclic codes of length 3p^s over
//! R = F_{p^m}[u, v]/(u^2, v^2, uv - vu).
//!
//! Fields, ring elements and polynomials are plain values; arithmetic goes
//! through context objects ([`FieldCtx`], [`RingR`], [`QuotientCtx`]) that
//! implement [`Ring`].

pub mod codes;
pub mod error;
pub mod gf;
pub mod json;
pub mod oracle;
pub mod poly;
pub mod quotient;
pub mod ring_r;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElem, FieldOp};
pub use poly::{AdicForm, Digit, FPoly, Poly, PolyRing, RPoly, Ring};
pub use quotient::{Case, Nilpotency, QElem, QuotientCtx};
pub use ring_r::{RElem, RingR};
pub use oracle::{Oracle, Subspace};
pub use codes::{
    CodeDescriptor, CodeKind, CodeSpec, Diagnostic, DualOptions, DualSpec, DualStatus, ZDigit, ZSeries,
};
