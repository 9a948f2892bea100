//! Blending functions and the four patch constructions.
//!
//! | scheme | interpolants | blends |
//! |--------|--------------|--------|
//! | CB     | corner `I_{i,i-1}` | `B_{i,i-1}` (squared distance products) |
//! | GC     | ribbons `R_i` minus corrections `Q_{i,i-1}` | `B_{i,i-1}` |
//! | MP     | corner `I_{i,i-1}` plus centre point `P_0` | `B*_{i,i-1}`, `B*_0` |
//! | MC     | ribbons `R_i` minus corrections plus `P_0` | `B*_{i,i-1}`, `B*_0` |
//!
//! Corner interpolants need two ribbon evaluations each, the side-based
//! schemes one per side, which is where GC and MC save time. Terms whose
//! weight falls below [`SKIP_WEIGHT`] are not evaluated at all.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curvenet::{corner_twist, gamma_unchecked, CurveNetwork, Point3, Vec3, MAX_SIDES};
use crate::domain::{DistanceSource, DomainPolygon, LocalParams, Uv, CORNER_EPSILON};
use crate::error::{Error, Result};

/// Interpolants whose blend weight is below this are skipped.
pub const SKIP_WEIGHT: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Corner-based Gregory patch.
    #[serde(rename = "CB")]
    Cb,
    /// Generalized Coons patch.
    #[serde(rename = "GC")]
    Gc,
    /// Midpoint patch: corner-based with a central control point.
    #[serde(rename = "MP")]
    Mp,
    /// Midpoint Coons patch: side-based with a central control point.
    #[serde(rename = "MC")]
    Mc,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Cb, Scheme::Gc, Scheme::Mp, Scheme::Mc];

    /// Whether the scheme has a central control point.
    pub fn has_center(self) -> bool {
        matches!(self, Scheme::Mp | Scheme::Mc)
    }

    /// Distance parameter fed to ribbons and blends.
    pub fn distance_source(self) -> DistanceSource {
        match self {
            Scheme::Cb | Scheme::Mp => DistanceSource::Barycentric,
            Scheme::Gc | Scheme::Mc => DistanceSource::Constrained,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Cb => "CB",
            Scheme::Gc => "GC",
            Scheme::Mp => "MP",
            Scheme::Mc => "MC",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CB" => Ok(Scheme::Cb),
            "GC" => Ok(Scheme::Gc),
            "MP" => Ok(Scheme::Mp),
            "MC" => Ok(Scheme::Mc),
            _ => Err(Error::Structure(format!(
                "unknown scheme {s:?}, expected one of CB, GC, MP, MC"
            ))),
        }
    }
}

/// Placement of the central control point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum CenterControl {
    /// Mean of the corner interpolants at `(0.5, 0.5)`.
    #[default]
    Default,
    Override(Point3),
    /// Displacement added to the default location.
    Offset(Vec3),
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PatchConfig {
    pub center: CenterControl,
}

impl PatchConfig {
    pub fn with_override(p: Point3) -> Self {
        PatchConfig {
            center: CenterControl::Override(p),
        }
    }

    pub fn with_offset(v: Vec3) -> Self {
        PatchConfig {
            center: CenterControl::Offset(v),
        }
    }
}

/// Corner weights `B_{i,i-1}` (index `i` is the corner at the start of
/// side `i`) and the central weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlendVector {
    n: usize,
    corner: [f64; MAX_SIDES],
    pub center: f64,
}

impl BlendVector {
    pub fn corner(&self) -> &[f64] {
        &self.corner[..self.n]
    }

    /// Side weight `B_i = B_{i,i-1} + B_{i+1,i}`.
    pub fn side(&self, i: usize) -> f64 {
        self.corner[i] + self.corner[(i + 1) % self.n]
    }

    pub fn total(&self) -> f64 {
        self.corner().iter().sum::<f64>() + self.center
    }

    fn unit_corner(n: usize, i: usize) -> Self {
        let mut corner = [0.0; MAX_SIDES];
        corner[i] = 1.0;
        BlendVector {
            n,
            corner,
            center: 0.0,
        }
    }
}

/// Cubic Hermite blend `(1-x)^3 + 3(1-x)^2 x`: 1 at 0, 0 at 1, flat at both.
#[inline]
pub fn hermite(x: f64) -> f64 {
    debug_assert!((-1e-12..=1.0 + 1e-12).contains(&x), "hermite({x})");
    let y = 1.0 - x;
    y * y * (1.0 + 2.0 * x)
}

/// Corner blends `D_{i,i-1} / sum D` with `D_{i,i-1} = prod_{k != i, i-1} d_k^2`.
pub fn blend_cb(params: &LocalParams, source: DistanceSource) -> BlendVector {
    let d = params.distance(source);
    let n = d.len();
    let mut sq = [0.0; MAX_SIDES];
    for (s, x) in sq.iter_mut().zip(d) {
        *s = x * x;
    }
    let mut corner = [0.0; MAX_SIDES];
    let mut total = 0.0;
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let mut p = 1.0;
        for (k, s) in sq[..n].iter().enumerate() {
            if k != i && k != prev {
                p *= s;
            }
        }
        corner[i] = p;
        total += p;
    }
    assert!(total > 0.0, "all corner blend products vanish");
    for c in &mut corner[..n] {
        *c /= total;
    }
    BlendVector {
        n,
        corner,
        center: 0.0,
    }
}

/// Midpoint blends
/// `B*_{i,i-1} = (d_i H(1 - s_{i-1}) H(d_{i-1}) + d_{i-1} H(s_i) H(d_i)) / (d_i + d_{i-1})`
/// with the central weight as the complement to 1.
///
/// Where `d_i + d_{i-1}` vanishes (the corner itself) the limit is a unit
/// weight on that corner.
pub fn blend_mp(params: &LocalParams, source: DistanceSource) -> BlendVector {
    let d = params.distance(source);
    let s = params.s();
    let n = d.len();
    let mut corner = [0.0; MAX_SIDES];
    let mut total = 0.0;
    for i in 0..n {
        let prev = (i + n - 1) % n;
        let (di, dp) = (d[i], d[prev]);
        let denom = di + dp;
        if denom <= 0.0 {
            return BlendVector::unit_corner(n, i);
        }
        let w = (di * hermite(1.0 - s[prev]) * hermite(dp) + dp * hermite(s[i]) * hermite(di))
            / denom;
        corner[i] = w;
        total += w;
    }
    BlendVector {
        n,
        corner,
        center: 1.0 - total,
    }
}

/// Values at the corner where side `i - 1` meets side `i` that the
/// correction patch needs.
#[derive(Clone, Copy, Debug, PartialEq)]
struct CornerFrame {
    /// `P_i(0)`
    origin: Point3,
    /// `T_i(0)`
    cross_this: Vec3,
    /// `T_{i-1}(1)`
    cross_prev: Vec3,
    twist: Vec3,
}

impl CornerFrame {
    fn new(net: &CurveNetwork, i: usize) -> Self {
        let this = &net.sides()[i];
        let prev = &net.sides()[net.cyclic(i, -1)];
        CornerFrame {
            origin: this.boundary.start(),
            cross_this: this.cross.start(),
            cross_prev: prev.cross.end(),
            twist: corner_twist(net, i).expect("index in range"),
        }
    }

    /// `Q_{i,i-1}(s_i, s_{i-1})`.
    #[inline]
    fn correction(&self, s_this: f64, s_prev: f64) -> Point3 {
        let g_this = gamma_unchecked(1.0 - s_prev);
        let g_prev = gamma_unchecked(s_this);
        self.origin
            + self.cross_this * g_this
            + self.cross_prev * g_prev
            + self.twist * (g_this * g_prev)
    }
}

/// Correction patch at the corner where side `i - 1` meets side `i`:
/// `P_i(0) + g(1 - s_{i-1}) T_i(0) + g(s_i) T_{i-1}(1) + g(s_i) g(1 - s_{i-1}) W`.
pub fn corner_correction(net: &CurveNetwork, i: usize, s_i: f64, s_im1: f64) -> Result<Point3> {
    net.side(i)?;
    Ok(CornerFrame::new(net, i).correction(s_i, s_im1))
}

/// Boolean sum of the two ribbons at the start of side `i`.
pub fn corner_interpolant(net: &CurveNetwork, i: usize, params: &LocalParams) -> Result<Point3> {
    if net.len() != params.len() {
        return Err(Error::SideCountMismatch {
            network: net.len(),
            domain: params.len(),
        });
    }
    net.side(i)?;
    let frame = CornerFrame::new(net, i);
    let s = params.s();
    Ok(interpolant(net, &frame, i, s[i], s[params.prev(i)]))
}

#[inline]
fn interpolant(net: &CurveNetwork, frame: &CornerFrame, i: usize, s_this: f64, s_prev: f64) -> Point3 {
    let sides = net.sides();
    let prev = net.cyclic(i, -1);
    sides[prev].ribbon_at(s_prev, s_this) + sides[i].ribbon_at(s_this, 1.0 - s_prev)
        - frame.correction(s_this, s_prev)
}

/// Default central control point: the mean of all corner interpolants at
/// `s_i = s_{i-1} = 0.5`.
pub fn default_midpoint(net: &CurveNetwork) -> Point3 {
    let n = net.len();
    let sum: Vec3 = (0..n)
        .map(|i| interpolant(net, &CornerFrame::new(net, i), i, 0.5, 0.5))
        .sum();
    sum / n as f64
}

/// A patch ready for repeated evaluation: corner data and the central
/// control point are computed once.
#[derive(Clone, Debug)]
pub struct Patch {
    scheme: Scheme,
    network: CurveNetwork,
    domain: DomainPolygon,
    corners: Vec<CornerFrame>,
    default_center: Option<Point3>,
    center: Option<Point3>,
}

impl Patch {
    pub fn new(
        scheme: Scheme,
        network: CurveNetwork,
        config: PatchConfig,
        domain: DomainPolygon,
    ) -> Result<Self> {
        if network.len() != domain.len() {
            return Err(Error::SideCountMismatch {
                network: network.len(),
                domain: domain.len(),
            });
        }
        let corners = (0..network.len())
            .map(|i| CornerFrame::new(&network, i))
            .collect();
        let (default_center, center) = if scheme.has_center() {
            let p0 = default_midpoint(&network);
            let used = match config.center {
                CenterControl::Default => p0,
                CenterControl::Override(p) => p,
                CenterControl::Offset(v) => p0 + v,
            };
            (Some(p0), Some(used))
        } else {
            if config.center != CenterControl::Default {
                return Err(Error::Structure(format!(
                    "scheme {scheme} has no central control point"
                )));
            }
            (None, None)
        };
        Ok(Patch {
            scheme,
            network,
            domain,
            corners,
            default_center,
            center,
        })
    }

    /// Patch over the regular domain polygon with as many sides as the network.
    pub fn regular(scheme: Scheme, network: CurveNetwork, config: PatchConfig) -> Result<Self> {
        let domain = DomainPolygon::regular(network.len())?;
        Self::new(scheme, network, config, domain)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn network(&self) -> &CurveNetwork {
        &self.network
    }

    pub fn domain(&self) -> &DomainPolygon {
        &self.domain
    }

    /// Default central control point (MP and MC only).
    pub fn default_center(&self) -> Option<Point3> {
        self.default_center
    }

    /// Central control point in use (MP and MC only).
    pub fn center(&self) -> Option<Point3> {
        self.center
    }

    /// Surface point at domain point `p`.
    pub fn eval(&self, p: Uv) -> Result<Point3> {
        if let Some(k) = self.domain.near_vertex(p, CORNER_EPSILON) {
            // Vertex k is where side k + 1 starts.
            let side = (k + 1) % self.network.len();
            return Ok(self.network.sides()[side].boundary.start());
        }
        let bc = self.domain.wachspress(p)?;
        let mut params = LocalParams::from_barycentric(&bc);
        Ok(self.eval_params(&mut params))
    }

    /// Blend weights the scheme applies at `p`.
    pub fn blend_at(&self, p: Uv) -> Result<BlendVector> {
        let bc = self.domain.wachspress(p)?;
        let mut params = LocalParams::from_barycentric(&bc);
        Ok(self.blend(&mut params))
    }

    fn blend(&self, params: &mut LocalParams) -> BlendVector {
        let source = self.scheme.distance_source();
        if source == DistanceSource::Constrained {
            params.fill_constrained();
        }
        match self.scheme {
            Scheme::Cb | Scheme::Gc => blend_cb(params, DistanceSource::Barycentric),
            Scheme::Mp | Scheme::Mc => blend_mp(params, source),
        }
    }

    /// Evaluates the scheme for precomputed side and distance parameters.
    /// Constrained distances are filled in here when the scheme needs them.
    pub(crate) fn eval_params(&self, params: &mut LocalParams) -> Point3 {
        let blend = self.blend(params);
        let mut point = match self.scheme {
            Scheme::Cb | Scheme::Mp => self.corner_sum(params, &blend),
            Scheme::Gc | Scheme::Mc => self.side_sum(params, &blend),
        };
        if let Some(p0) = self.center {
            point += p0 * blend.center;
        }
        point
    }

    fn corner_sum(&self, params: &LocalParams, blend: &BlendVector) -> Point3 {
        let s = params.s();
        let mut sum = Vec3::zeros();
        for (i, (&w, frame)) in blend.corner().iter().zip(&self.corners).enumerate() {
            if w.abs() < SKIP_WEIGHT {
                continue;
            }
            sum += interpolant(&self.network, frame, i, s[i], s[params.prev(i)]) * w;
        }
        sum
    }

    fn side_sum(&self, params: &LocalParams, blend: &BlendVector) -> Point3 {
        let s = params.s();
        let d = params.distance(self.scheme.distance_source());
        let sides = self.network.sides();
        let mut sum = Vec3::zeros();
        for i in 0..sides.len() {
            let w = blend.side(i);
            if w.abs() >= SKIP_WEIGHT {
                sum += sides[i].ribbon_at(s[i], d[i]) * w;
            }
            let c = blend.corner()[i];
            if c.abs() >= SKIP_WEIGHT {
                sum -= self.corners[i].correction(s[i], s[params.prev(i)]) * c;
            }
        }
        sum
    }
}

/// One-shot evaluation. Builds a [`Patch`] per call; use [`Patch`] directly
/// for many points.
pub fn eval_patch(
    scheme: Scheme,
    net: &CurveNetwork,
    config: PatchConfig,
    poly: &DomainPolygon,
    p: Uv,
) -> Result<Point3> {
    Patch::new(scheme, net.clone(), config, poly.clone())?.eval(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::domain::local_params;
    use approx::assert_relative_eq;

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0.0), 1.0);
        assert_eq!(hermite(1.0), 0.0);
        assert_eq!(hermite(0.5), 0.5);
        for k in 1..100 {
            let x = k as f64 / 100.0;
            assert!(hermite(x) < hermite(x - 0.01));
            assert_relative_eq!(hermite(x) + hermite(1.0 - x), 1.0, epsilon = 1e-15);
        }
        let h = 1e-6;
        assert!((hermite(h) - 1.0).abs() / h < 1e-5);
        assert!(hermite(1.0 - h) / h < 1e-5);
    }

    #[test]
    fn scheme_names() {
        for s in Scheme::ALL {
            assert_eq!(s.as_str().parse::<Scheme>().unwrap(), s);
        }
        assert_eq!("mc".parse::<Scheme>().unwrap(), Scheme::Mc);
        assert!("XX".parse::<Scheme>().is_err());
    }

    #[test]
    fn cb_blend_at_corners_and_center() {
        for n in 3..=8 {
            let poly = DomainPolygon::regular(n).unwrap();
            for k in 0..n {
                let p = local_params(&poly, poly.vertices()[k]).unwrap();
                let b = blend_cb(&p, DistanceSource::Barycentric);
                // Vertex k starts side k + 1.
                for (i, w) in b.corner().iter().enumerate() {
                    assert_eq!(*w, if i == (k + 1) % n { 1.0 } else { 0.0 });
                }
            }
            let p = local_params(&poly, Uv::zeros()).unwrap();
            for w in blend_cb(&p, DistanceSource::Barycentric).corner() {
                assert_relative_eq!(*w, 1.0 / n as f64, epsilon = 1e-14);
            }
        }
    }

    /// Independent product-form oracle: on side i only the two corners of
    /// that side carry weight.
    #[test]
    fn cb_blend_on_sides() {
        let poly = DomainPolygon::regular(6).unwrap();
        for k in 0..20 {
            let tau = (k as f64 + 0.5) / 20.0;
            let i = k % 6;
            let p = local_params(&poly, poly.side_point(i, tau)).unwrap();
            let b = blend_cb(&p, DistanceSource::Barycentric);
            assert_relative_eq!(b.side(i), 1.0, epsilon = 1e-12);
            let d = p.d();
            let oracle = |c: usize| -> f64 {
                (0..6)
                    .filter(|&k| k != c && k != (c + 5) % 6)
                    .map(|k| d[k] * d[k])
                    .product()
            };
            let total: f64 = (0..6).map(oracle).sum();
            for c in 0..6 {
                assert_relative_eq!(b.corner()[c], oracle(c) / total, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn mp_blend_on_sides_and_corners() {
        for n in 3..=8 {
            let poly = DomainPolygon::regular(n).unwrap();
            for k in 0..20 {
                let tau = (k as f64 + 0.5) / 20.0;
                let i = k % n;
                let p = local_params(&poly, poly.side_point(i, tau)).unwrap();
                for source in [DistanceSource::Barycentric, DistanceSource::Constrained] {
                    let b = blend_mp(&p, source);
                    let s = p.s()[i];
                    for (c, w) in b.corner().iter().enumerate() {
                        let want = if c == i {
                            hermite(s)
                        } else if c == (i + 1) % n {
                            hermite(1.0 - s)
                        } else {
                            0.0
                        };
                        assert!((w - want).abs() <= 1e-10, "n={n} side {i} corner {c}: {w} vs {want}");
                    }
                    assert!(b.center.abs() <= 1e-10);
                }
            }
            for k in 0..n {
                let p = local_params(&poly, poly.vertices()[k]).unwrap();
                let b = blend_mp(&p, DistanceSource::Barycentric);
                assert_eq!(b.corner()[(k + 1) % n], 1.0);
                assert_eq!(b.center, 0.0);
            }
            let p = local_params(&poly, Uv::zeros()).unwrap();
            let b = blend_mp(&p, DistanceSource::Barycentric);
            for w in b.corner() {
                assert_relative_eq!(*w, b.corner()[0], epsilon = 1e-14);
            }
            // At the centre s = 1/2 and d = 1 - 2/n, so the central weight is
            // negative for triangles and vanishes for quads.
            let want = 1.0 - n as f64 * 0.5 * hermite(1.0 - 2.0 / n as f64);
            assert_relative_eq!(b.center, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn correction_patch_values() {
        let net = bundled::network(5);
        let side = &net.sides()[2];
        let corner = side.boundary.start();
        assert_relative_eq!(corner_correction(&net, 2, 0.0, 1.0).unwrap(), corner, epsilon = 1e-15);
        assert_relative_eq!(
            corner_correction(&net, 2, 0.0, 0.0).unwrap(),
            corner + side.cross.start() / 3.0,
            epsilon = 1e-12
        );
        let planar = bundled::planar_network(4);
        let twist = corner_twist(&planar, 1).unwrap();
        assert!(twist.norm() < 1e-12);
        let p = &planar.sides()[1];
        let q = &planar.sides()[0];
        assert_relative_eq!(
            corner_correction(&planar, 1, 0.5, 0.5).unwrap(),
            p.boundary.start() + p.cross.start() * 0.25 + q.cross.end() * 0.25,
            epsilon = 1e-12
        );
    }

    #[test]
    fn corner_interpolant_reduces_to_boundaries() {
        let net = bundled::network(6);
        for k in 0..20 {
            let tau = k as f64 / 19.0;
            for i in 0..6 {
                let prev = (i + 5) % 6;
                let got = interpolant(&net, &CornerFrame::new(&net, i), i, tau, 1.0);
                let want = net.sides()[i].boundary.eval(tau).unwrap();
                assert!((got - want).norm() < 1e-12, "{got} vs {want}");

                let got = interpolant(&net, &CornerFrame::new(&net, i), i, 0.0, tau);
                let want = net.sides()[prev].boundary.eval(tau).unwrap();
                assert!((got - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn default_midpoint_properties() {
        let planar = bundled::planar_network(5);
        let p0 = default_midpoint(&planar);
        let (normal, offset) = bundled::PLANE;
        assert!((p0.dot(&Vec3::from(normal)) - offset).abs() < 1e-10);

        // The symmetric bowl is invariant under rotation about the z axis.
        for n in 3..=8 {
            let p0 = default_midpoint(&bundled::symmetric_network(n));
            assert!(p0.x.abs() < 1e-10 && p0.y.abs() < 1e-10, "n={n}: {p0}");
        }

        let net = bundled::network(7);
        let poly = DomainPolygon::regular(7).unwrap();
        let half = {
            let mut p = local_params(&poly, Uv::zeros()).unwrap();
            p.s.iter_mut().for_each(|s| *s = 0.5);
            p
        };
        let mean: Vec3 = (0..7)
            .map(|i| corner_interpolant(&net, i, &half).unwrap())
            .sum::<Vec3>()
            / 7.0;
        assert_relative_eq!(default_midpoint(&net), mean, epsilon = 1e-12);
    }

    #[test]
    fn identity_override_matches_default() {
        let net = bundled::network(5);
        let p0 = default_midpoint(&net);
        let a = Patch::regular(Scheme::Mp, net.clone(), PatchConfig::default()).unwrap();
        let b = Patch::regular(Scheme::Mp, net, PatchConfig::with_override(p0)).unwrap();
        for p in [Uv::new(0.1, 0.3), Uv::zeros(), Uv::new(-0.5, 0.2)] {
            assert_eq!(a.eval(p).unwrap(), b.eval(p).unwrap());
        }
    }

    #[test]
    fn center_only_for_midpoint_schemes() {
        let net = bundled::network(4);
        let cfg = PatchConfig::with_offset(Vec3::z());
        assert!(Patch::regular(Scheme::Cb, net.clone(), cfg).is_err());
        assert!(Patch::regular(Scheme::Gc, net.clone(), cfg).is_err());
        assert!(Patch::regular(Scheme::Mc, net.clone(), cfg).is_ok());
        assert!(Patch::regular(Scheme::Cb, net.clone(), PatchConfig::default())
            .unwrap()
            .center()
            .is_none());
        let mismatch = Patch::new(
            Scheme::Mc,
            net,
            PatchConfig::default(),
            DomainPolygon::regular(5).unwrap(),
        );
        assert!(matches!(mismatch, Err(Error::SideCountMismatch { .. })));
    }

    /// The 0/0 side parameter at vertices only multiplies vanishing weights.
    #[test]
    fn degenerate_side_parameter_is_unobservable() {
        for n in 3..=8 {
            let poly = DomainPolygon::regular(n).unwrap();
            let net = bundled::network(n);
            for scheme in Scheme::ALL {
                let patch = Patch::regular(scheme, net.clone(), PatchConfig::default()).unwrap();
                for k in 0..n {
                    let bc = poly.wachspress(poly.vertices()[k]).unwrap();
                    let values: Vec<Point3> = [0.0, 0.5, 1.0]
                        .iter()
                        .map(|&fill| {
                            let mut p = LocalParams::from_barycentric_with(&bc, fill);
                            patch.eval_params(&mut p)
                        })
                        .collect();
                    assert_eq!(values[0], values[1], "{scheme} n={n} vertex {k}");
                    assert_eq!(values[1], values[2], "{scheme} n={n} vertex {k}");
                    let corner = patch.eval(poly.vertices()[k]).unwrap();
                    assert!((values[1] - corner).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn outside_points_are_rejected() {
        let patch = Patch::regular(Scheme::Mc, bundled::network(5), PatchConfig::default()).unwrap();
        assert!(matches!(patch.eval(Uv::new(3.0, 0.0)), Err(Error::OutsideDomain { .. })));
    }
}
