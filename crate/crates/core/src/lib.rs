//! Exact supremum-location laws for stationary shift processes.
//!
//! The crate turns a candidate density for the location of the supremum of
//! a stationary process on `[0, T]` into a concrete process realizing it,
//! and back:
//!
//! * [`density`] — exact step densities and the necessary conditions
//!   (bounded variation against the endpoint limits, positive infimum,
//!   mass deficit, the universal envelope bound, and the window-shrinking
//!   inequalities).
//! * [`blocks`] — decomposition of admissible grid densities into proper
//!   collections of base/left/right/central blocks, and recomposition.
//! * [`assembly`] — synthesis of the periodic piecewise-linear path whose
//!   uniform shift realizes a collection, plus the structural audit.
//! * [`oracle`] — the exact law of the leftmost supremum location by an
//!   upper-envelope sweep over the shift, and an independent brute-force
//!   grid law.
//! * [`approx`] — quantization of general cadlag candidate densities onto
//!   value grids and measured convergence of realized laws.
//! * [`simulate`] — Monte Carlo sampling of supremum locations for shift
//!   processes and a strongly mixing moving-average family, with
//!   uniformity diagnostics for long windows.
//! * [`io`] — JSON schemas for densities, collections, paths, and laws.

pub mod approx;
pub mod assembly;
pub mod blocks;
pub mod density;
pub mod error;
pub mod io;
pub mod oracle;
pub mod rat;
pub mod simulate;

pub use error::{Error, Result};
pub use rat::Rat;
