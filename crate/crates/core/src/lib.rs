//! Almost-disjunct group testing matrices from error-correcting codes and designs.
//!
//! The crate is organised bottom-up:
//!
//! * [`galois`]: GF(p^m) arithmetic.
//! * [`codes`]: Reed-Solomon, BCH fixed-weight subcodes, block designs and the
//!   Kautz-Singleton map producing [`codes::TestMatrix`] values; [`formats`]
//!   holds their text file forms.
//! * [`spectra`]: exact distance distributions, Krawtchouk/Hahn dual
//!   transforms and moment identities.
//! * [`bounds`]: closed-form upper bounds on the false-positive probability.
//! * [`testing`]: exact and Monte Carlo measurement of that probability and
//!   COMP decoding.
//! * [`instances`]: small reference matrices.
//! * [`verify`]: applicable-bound tables and the built-in invariant suite.

pub mod bounds;
pub mod codes;
pub mod formats;
pub mod galois;
pub mod instances;
pub mod rational;
pub mod spectra;
pub mod testing;
pub mod verify;

mod par;

pub use par::with_workers;

use serde::{Deserialize, Serialize};

/// Explicit work limits. Exceeding one is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Maximum number of codewords an enumerated q-ary code may have.
    pub code_size: u64,
    /// Maximum `C(n, w)` candidates scanned by a fixed-weight subcode search.
    pub subcode: u64,
    /// Maximum code size for exact pair-count spectra.
    pub spectrum_size: u64,
    /// Maximum `C(N,t) (N-t) w` support operations for exhaustive disjunctness checks.
    pub disjunct_ops: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            code_size: 1_000_000,
            subcode: 10_000_000,
            spectrum_size: 10_000,
            disjunct_ops: 100_000_000,
        }
    }
}

/// Seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_2017_0000_0001;
