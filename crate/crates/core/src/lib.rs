//! p-adic continued fractions generated by the Schneider map, with their
//! thermodynamic formalism and Monte Carlo checks.

pub mod montecarlo;
pub mod oracle;
pub mod padic;
pub mod schneider;
pub mod thermo;
pub mod verify;

pub use padic::{ExactRational, PadicError, PadicInt, Prime};
pub use schneider::{Convergent, DigitPair, DigitStream, Expansion, ExpansionStatus, SchneiderError, TailStatus};
