//! Quantum operations: instruments, POVMs, complete positivity, causal
//! structure of bipartite measurements, teleportation and CHSH.

mod causality;
mod chsh;
mod kraus;
mod locc;
mod teleport;

pub use causality::*;
pub use chsh::*;
pub use kraus::*;
pub use locc::*;
pub use teleport::*;
