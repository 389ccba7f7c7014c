//! Morphisms of the derived category and their composition.
#![allow(unused)]
use crate::holo::DbObject;
use crate::numerics::C64;

#[derive(Debug, Clone)]
pub enum HoloDeg0 {
    Theta { coeffs: Vec<C64> },
}

#[derive(Debug, Clone)]
pub enum HoloBlock {
    Deg0(HoloDeg0),
}

#[derive(Debug, Clone)]
pub struct HoloMorphism {
    pub source: DbObject,
    pub target: DbObject,
}

pub fn compose_db() {}
pub fn hom_dim_db() {}
