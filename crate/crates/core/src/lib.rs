//! Exact and numerical tools for modular forms of level 1, 2 and 4,
//! including level-one forms for the real character `chi` of PSL2(Z) with
//! `chi(S) = chi(T) = -1`.

pub mod analytic;
pub mod exactseries;
pub mod generators;
pub mod heckeforms;
pub mod linalg;
pub mod report;
pub mod sl2words;
