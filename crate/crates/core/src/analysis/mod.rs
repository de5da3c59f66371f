//! Cycle statistics of Tanner graphs and pseudo-codeword tools.

mod cycles;
mod pseudo;

pub use cycles::{conv_cycle_spectrum, cycle_spectrum, girth, CycleSpectrum};
pub use pseudo::{
    active_part_has_cycle, fundamental_polytope_contains, project_pseudocodeword, pseudoweights,
    PseudoCodeword, PseudoWeights, MAX_POLYTOPE_ROW_WEIGHT,
};
