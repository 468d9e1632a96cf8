//! Exact decision procedures for knots and links presented by diagrams.
//!
//! This crate decides three classical problems about a link given only a
//! diagram (PD code or JSON): whether a knot diagram presents the unknot,
//! whether a link diagram presents a splittable link, and the genus of a
//! knot.  All three run the same engine: triangulate the link complement,
//! set up the cone of normal-surface coordinate vectors, enumerate the
//! minimal vertex solutions of that cone with exact integer arithmetic, and
//! scan the resulting surfaces for a witness (an essential disk, a splitting
//! sphere, or a minimal-genus spanning surface).  Positive answers come with
//! compact certificates that an independent verifier can check in polynomial
//! time.
//!
//! The main entry points are [`diagram::LinkDiagram::parse`],
//! [`triangulation::build_complement`], [`cone::HakenCone`],
//! [`decide::decide_unknotted`], [`decide::decide_splittable`],
//! [`decide::compute_genus`], and the certificate pair
//! [`certificate::emit_certificate`] / [`certificate::verify_certificate`].
//!
//! The `examples/` directory walks through every major capability:
//!
//! ```text
//! examples/
//!   parse_diagrams.rs        parsing, validation, crossing measure
//!   grid_embedding.rs        planar straight-line embedding on an integer grid
//!   triangulate_complement.rs  complement triangulations, markings, hashing
//!   enumerate_surfaces.rs    the normal-surface cone and vertex solutions
//!   classify_surfaces.rs     Euler characteristic, orientability, boundary
//!   recognize_unknot.rs      the unknot decision end to end
//!   split_links.rs           splittability with marked-arc parity tests
//!   knot_genus.rs            genus via spanning-surface search
//!   certify_and_verify.rs    certificate emission and verification
//! ```
//!
//! Run one with `cargo run --release --example recognize_unknot`.

pub mod diagram;
pub mod linalg;
pub mod oracle;
pub mod triangulation;
