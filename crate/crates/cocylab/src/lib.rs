//! Exact-arithmetic toolkit for bounded 2-cocycles, central and twisted
//! group extensions, quasi-characters on free and free-product groups,
//! Steinberg-type symbols over ordered fields, and certified split/non-split
//! decisions on Cayley balls.
//!
//! Everything is computed over `BigInt`/`BigRational`; there are no floats
//! and no tolerances anywhere. Audits that sample randomly are all seeded,
//! so every reported number is reproducible bit for bit.
//!
//! Module map:
//! - [`words`]: reduced words in free groups and free products of cyclics.
//! - [`quasichar`]: counting quasi-characters, their defects, and witness
//!   families with unbounded defect behaviour.
//! - [`group`]: a small runtime-typed group layer shared by every module.
//! - [`cocycle`]: bounded 2-cocycles, coboundaries, quotient induction,
//!   pullbacks, and seeded identity audits.
//! - [`sl2`]: integral 2x2 machinery — the sign cocycle, generator
//!   decompositions, the explicit rational splitting function, congruence
//!   and Chevalley-style helpers.
//! - [`steinberg`]: symbol axioms over ordered fields and auditors that
//!   distinguish genuine symbols from near misses.
//! - [`extension`]: extension groups built from a cocycle, equivalence of
//!   cocycles via rational cochains, and braid-lift experiments.
//! - [`solver`]: exact linear solvers over the integers and rationals used
//!   by the certification pipeline.
//! - [`splitcert`]: Cayley-ball construction, split/non-split certification
//!   with machine-checkable certificates, and thickness tests.
//! - [`encode`]: canonical text/JSON encodings and parsers for every
//!   element kind.
//! - [`sample`]: seeded random generation of words, matrices, rationals.
//! - [`report`]: audit report structures serialized by the CLI.

pub mod cocycle;
pub mod encode;
pub mod extension;
pub mod group;
pub mod quasichar;
pub mod report;
pub mod sample;
pub mod sl2;
pub mod solver;
pub mod splitcert;
pub mod steinberg;
pub mod words;
