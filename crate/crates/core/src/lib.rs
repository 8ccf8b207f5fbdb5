//! Exact symbolic toolkit for multiplicity computations on smooth affine
//! ambients: Rees algebras and their singular loci, blow-up charts,
//! characteristic-zero elimination algebras of monic polynomials, local
//! presentations of the maximal multiplicity locus, and a small driver that
//! runs blow-up scripts and resolves plane curves.
//!
//! All arithmetic is exact (rationals or residues modulo a prime `p <= 97`).

pub mod blowup;
pub mod driver;
pub mod elimination;
pub mod error;
pub mod json;
pub mod monic;
pub mod poly;
pub mod presentation;
pub mod rees;
pub mod selftest;

pub use blowup::{make_charts, Center, Chart};
pub use error::{Error, Result};
pub use monic::{strict_transform_monic, MonicPoly};
pub use presentation::Presentation;
pub use poly::{parse, Order, Polynomial, Ring, RingCtx};
pub use rees::{Generator, Grid, ReesAlgebra, SingIdeal};
