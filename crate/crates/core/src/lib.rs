//! Weighted Orlicz convolution algebras on ascending chains of finite groups.
//!
//! A locally elliptic group is modeled by a [`group::GroupChain`]
//! `K_1 ≤ K_2 ≤ …` of finite groups. On top of it the crate provides Young
//! functions and Orlicz norms, weight constructions, the convolution algebra
//! with exact spectra and Gelfand sequences, a smooth functional calculus and
//! a reproducible experiment driver.

pub mod convalg;
pub mod element;
pub mod error;
pub mod experiments;
pub mod funcalc;
pub mod group;
pub mod norms;
pub mod numeric;
pub mod weights;
pub mod young;

pub use element::FinSuppFun;
pub use error::{Error, Result};
pub use group::{Elem, GroupChain, Haar, MeasureModel, ShellModel};
pub use norms::Norm;
pub use weights::Weight;
pub use young::YoungFunction;
