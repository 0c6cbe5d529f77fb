//! End-to-end constructions on top of the geometry and PL layers.

mod approximate;
mod boundary;
mod certificate;
mod extend;
mod interval;
mod kill;
mod lp;
mod strip;

pub use approximate::{approximate_pl, grid_resolution, Approximation};
pub use boundary::{boundary_square_approx, AffineCell, BoundaryLog, BoundaryOptions, BoundaryRoot, F1Entry, F1Rule, SquareApproxResult};
pub use certificate::{
    verify_no_root_certificate, verify_report, CheckOutcome, InjectivityLedger, NoRootCertificate,
    FULL_DIMENSIONAL_PREIMAGE,
};
pub use extend::{extend_to_square, kuhn_cells, ExtendedSquare, SIMPLEX_BUDGET};
pub use interval::{interval_even_root_obstruction, Interval, IntervalAnalysis, IntervalVerdict};
pub use kill::{kill_square_root, KillOptions, KillOutcome, KillReport};
pub use lp::{lp_bound, lp_denseness_check, LpCheck, QUADRATURE_TOLERANCE};
pub use strip::{strip_rotation_example, strip_target, StripExample, StripMap, StripPiece};
