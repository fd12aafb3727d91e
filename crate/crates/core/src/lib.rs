//! Fillability of zero-twisting contact structures on small Seifert fibered
//! spaces `M(-1; r1, r2, r3)`.
//!
//! The pipeline reads a three-legged contact surgery presentation, translates it
//! into a planar open book, and decides Stein fillability by searching for a
//! sublink of the surgery link that presents tight `S^1 x S^2`. Fillable
//! verdicts carry a constructive positive factorization of the sublink
//! monodromy (iterated daisy relations) and an abelianized feasibility witness
//! for the full monodromy. Non-fillable verdicts carry an obstruction.
//!
//! All arithmetic is exact.

pub mod abmap;
pub mod cf;
mod error;
pub mod factorization;
pub mod fillability;
pub mod openbook;
pub mod presentation;

pub use abmap::{ab_class, ab_equal, lantern_decompose, positive_feasible, AbClass, FeasibilityResult, FeasibilityStatus};
pub use cf::{Chain, FramedChain, Rational};
pub use error::{Error, Result};
pub use factorization::{daisy_rewrite, extract_bpattern, verify_certificate, BPattern, DaisyTrace, SublinkBook};
pub use fillability::{decide, find_sublinks, obstruction_trace, q_condition, SublinkChoice, Verdict};
pub use openbook::{translate, Hole, HoleKind, OpenBook, Sign, SignedTwist};
pub use presentation::{Leg, Presentation};
