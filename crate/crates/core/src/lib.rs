//! Multi-sided transfinite surface patches.
//!
//! A patch fills an `n`-sided loop of boundary curves (3 to 8 sides), each
//! carrying a cross-derivative function, with a surface that interpolates
//! the boundaries and matches the cross-derivatives to first order. Four
//! schemes are provided:
//!
//! * [`Scheme::Cb`] blends side-based ribbons with plain distance parameters.
//! * [`Scheme::Gc`] does the same with constrained distance parameters.
//! * [`Scheme::Mp`] blends corner interpolants with a central control point.
//! * [`Scheme::Mc`] is the midpoint patch rebuilt on side ribbons and the
//!   constrained parameterization, which is cheaper to evaluate.
//!
//! ```
//! use transfinite::{bundled, Patch, PatchConfig, Scheme, Uv};
//!
//! let net = bundled::network(5);
//! let patch = Patch::regular(Scheme::Mc, net, PatchConfig::default()).unwrap();
//! let centre = patch.eval(Uv::zeros()).unwrap();
//! assert!(centre.iter().all(|c| c.is_finite()));
//! ```

pub mod bench;
pub mod bundled;
pub mod curvenet;
pub mod domain;
mod error;
pub mod paramlines;
pub mod patch;
pub mod tessellation;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/networks.md")]
    mod networks {}
    #[doc = include_str!("../../../book/src/parameterization.md")]
    mod parameterization {}
    #[doc = include_str!("../../../book/src/schemes.md")]
    mod schemes {}
    #[doc = include_str!("../../../book/src/fullness.md")]
    mod fullness {}
    #[doc = include_str!("../../../book/src/tessellation.md")]
    mod tessellation {}
    #[doc = include_str!("../../../book/src/benchmarking.md")]
    mod benchmarking {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub use curvenet::{
    corner_twist, gamma, validate_network, BezierCurve, CurveNetwork, Point3, Side, Tolerances,
    ValidationReport, ValidationStatus, Vec3,
};
pub use domain::{
    constrained_distance, kato_blend4, local_params, regular_polygon, side_point, wachspress,
    BarycentricCoords, DistanceSource, DomainPolygon, LocalParams, Uv,
};
pub use error::{Error, Result};
pub use patch::{eval_patch, CenterControl, Patch, PatchConfig, Scheme};
pub use tessellation::{
    deviation, mean_curvature, surface_deviation, tessellate, triangulate_domain, DeviationStats, DomainMesh,
    SurfaceMesh,
};
