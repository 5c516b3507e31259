//! Multi-parameter conformal mapping of ship sections onto the unit circle.
//!
//! A section is given as ordered offsets. [`fit::fit_section`] finds the
//! scale factor and coefficients of the map together with the angle on the
//! unit circle corresponding to each offset point;
//! [`optimizer::search_optimum`] chooses the number of coefficients.
//!
//! ```
//! use hullmap::{parse_offsets, FitConfig, fit_section};
//!
//! let text = "symmetric\n0,1\n0.5,0.95\n0.9,0.6\n1,0\n";
//! let section = parse_offsets(text).unwrap();
//! let fit = fit_section(&section, &FitConfig::symmetric(3, 1e-3)).unwrap();
//! assert!(fit.error_e.is_finite());
//! ```

pub mod error;
pub mod fit;
pub mod lsq;
pub mod mapping;
pub mod metrics;
pub mod optimizer;
pub mod section;
pub mod theta;

pub use error::{Error, Result};
pub use fit::{compute_error, fit_section, FitConfig, FitResult, FitStatus};
pub use mapping::{
    breadth_and_draft, evaluate_boundary, evaluate_offset_contour, lewis_initial_guess,
    MappingCoefficients, ScaledCoefficients,
};
pub use metrics::{build_report, nash_sutcliffe, AccuracyReport, CoefficientReport, Report};
pub use optimizer::{search_optimum, SearchConfig, SearchReport};
pub use section::{parse_offsets, Point, SectionOffsets};
pub use theta::{assign_thetas, ThetaAssignment};
