//! Fourier-algebra norms of idempotents and induced homomorphisms on finite
//! groups, plus a desk-scale model of `A(Z)`.

pub mod fourier;
pub mod group;
pub mod hom;
pub mod report;
pub mod groupspec;
pub mod search;
pub mod svd;
pub mod zline;
