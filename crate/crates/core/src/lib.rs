//! Exact computations for genus-2 canonical-pencil surfaces cut out as a
//! complete intersection of a quadric and a sextic in a weighted projective
//! bundle over the line.

pub mod census;
pub mod chow;
pub mod exactpoly;
pub mod family;
pub mod gring;
pub mod ledger;
pub mod relcan;
