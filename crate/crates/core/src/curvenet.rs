//! Boundary data of a multi-sided patch: Bézier boundary curves, their
//! cross-derivative fields, ribbons built from the two, and the corner
//! checks that make a curve loop usable as patch input.
//!
//! Sides are indexed from 0 and ordered counterclockwise. Side `i` ends
//! where side `i + 1` starts, and its cross-derivative points toward the
//! interior of the patch.

use std::fs;
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
/// Positions share the vector type; the alias only documents intent.
pub type Point3 = Vector3<f64>;

/// Smallest and largest supported side counts.
pub const MIN_SIDES: usize = 3;
pub const MAX_SIDES: usize = 8;

/// A polynomial Bézier curve over `[0, 1]`, point- or vector-valued.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct BezierCurve {
    controls: Vec<Vec3>,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    degree: usize,
    controls: Vec<[f64; 3]>,
}

impl TryFrom<RawCurve> for BezierCurve {
    type Error = Error;

    fn try_from(raw: RawCurve) -> Result<Self> {
        if raw.controls.len() != raw.degree + 1 {
            return Err(Error::Structure(format!(
                "degree {} curve needs {} control points, got {}",
                raw.degree,
                raw.degree + 1,
                raw.controls.len()
            )));
        }
        BezierCurve::new(raw.controls.into_iter().map(Vec3::from).collect())
    }
}

impl From<BezierCurve> for RawCurve {
    fn from(curve: BezierCurve) -> Self {
        RawCurve {
            degree: curve.degree(),
            controls: curve.controls.iter().map(|c| [c.x, c.y, c.z]).collect(),
        }
    }
}

impl BezierCurve {
    pub fn new(controls: Vec<Vec3>) -> Result<Self> {
        if controls.is_empty() {
            return Err(Error::Structure("curve without control points".into()));
        }
        if controls.iter().any(|c| !c.iter().all(|x| x.is_finite())) {
            return Err(Error::Structure("non-finite control point".into()));
        }
        Ok(BezierCurve { controls })
    }

    pub fn degree(&self) -> usize {
        self.controls.len() - 1
    }

    pub fn controls(&self) -> &[Vec3] {
        &self.controls
    }

    /// Evaluates the curve with de Casteljau's algorithm.
    ///
    /// Endpoints are reproduced exactly.
    pub fn eval(&self, t: f64) -> Result<Vec3> {
        check_unit("t", t)?;
        Ok(self.point_at(t))
    }

    /// First derivative with respect to `t`. A constant curve has a zero
    /// derivative.
    pub fn derivative(&self, t: f64) -> Result<Vec3> {
        check_unit("t", t)?;
        Ok(self.derivative_at(t))
    }

    /// Unchecked evaluation used on hot paths, where `t` comes from a
    /// parameterization that already guarantees the range.
    #[inline]
    pub(crate) fn point_at(&self, t: f64) -> Vec3 {
        de_casteljau(&self.controls, t)
    }

    pub(crate) fn derivative_at(&self, t: f64) -> Vec3 {
        let n = self.degree();
        if n == 0 {
            return Vec3::zeros();
        }
        let diffs: SmallVec<[Vec3; 8]> = self
            .controls
            .windows(2)
            .map(|w| (w[1] - w[0]) * n as f64)
            .collect();
        de_casteljau(&diffs, t)
    }

    pub fn start(&self) -> Vec3 {
        self.controls[0]
    }

    pub fn end(&self) -> Vec3 {
        self.controls[self.controls.len() - 1]
    }
}

#[inline]
fn de_casteljau(controls: &[Vec3], t: f64) -> Vec3 {
    let last = controls.len() - 1;
    // Exact endpoints: the lerps below are not exact at t == 1.
    if last == 0 || t == 0.0 {
        return controls[0];
    }
    if t == 1.0 {
        return controls[last];
    }
    if last == 1 {
        return controls[0] * (1.0 - t) + controls[1] * t;
    }
    let mut work: SmallVec<[Vec3; 8]> = SmallVec::from_slice(controls);
    let u = 1.0 - t;
    for level in (1..=last).rev() {
        for k in 0..level {
            work[k] = work[k] * u + work[k + 1] * t;
        }
    }
    work[0]
}

fn check_unit(what: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value,
            expected: "[0, 1]",
        })
    }
}

/// Scaling of the cross-derivative along the distance parameter,
/// `d / (2d + 1)`. It starts at 0 with unit slope and stays below 1/2.
pub fn gamma(d: f64) -> Result<f64> {
    if !(d >= 0.0) {
        return Err(Error::Domain {
            what: "d",
            value: d,
            expected: "[0, inf)",
        });
    }
    Ok(gamma_unchecked(d))
}

#[inline]
pub(crate) fn gamma_unchecked(d: f64) -> f64 {
    d / (2.0 * d + 1.0)
}

/// One side of the loop: boundary curve `P(s)` and cross-derivative `T(s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub boundary: BezierCurve,
    pub cross: BezierCurve,
}

impl Side {
    pub fn new(boundary: BezierCurve, cross: BezierCurve) -> Result<Self> {
        if boundary.degree() < 1 {
            return Err(Error::Structure(
                "boundary curve must have degree >= 1".into(),
            ));
        }
        Ok(Side { boundary, cross })
    }

    /// The ribbon `P(s) + gamma(d) T(s)`.
    #[inline]
    pub(crate) fn ribbon_at(&self, s: f64, d: f64) -> Point3 {
        self.boundary.point_at(s) + self.cross.point_at(s) * gamma_unchecked(d)
    }
}

/// A closed loop of sides. The constructor checks per-side structure only;
/// corner compatibility is reported by [`validate_network`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNetwork")]
pub struct CurveNetwork {
    pub name: String,
    sides: Vec<Side>,
}

#[derive(Deserialize)]
struct RawNetwork {
    name: String,
    sides: Vec<Side>,
}

impl TryFrom<RawNetwork> for CurveNetwork {
    type Error = Error;

    fn try_from(raw: RawNetwork) -> Result<Self> {
        raw.sides
            .into_iter()
            .map(|s| Side::new(s.boundary, s.cross))
            .collect::<Result<Vec<_>>>()
            .map(|sides| CurveNetwork::new(raw.name, sides))
    }
}

impl CurveNetwork {
    pub fn new(name: impl Into<String>, sides: Vec<Side>) -> Self {
        CurveNetwork {
            name: name.into(),
            sides,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn side(&self, i: usize) -> Result<&Side> {
        self.sides.get(i).ok_or(Error::SideIndex {
            index: i,
            n: self.sides.len(),
        })
    }

    /// Index of side `i + offset` around the loop (offset may be negative).
    #[inline]
    pub fn cyclic(&self, i: usize, offset: isize) -> usize {
        let n = self.sides.len() as isize;
        (i as isize + offset).rem_euclid(n) as usize
    }

    /// Evaluates ribbon `i` at side parameter `s` and distance `d`.
    pub fn ribbon(&self, i: usize, s: f64, d: f64) -> Result<Point3> {
        let side = self.side(i)?;
        check_unit("s", s)?;
        gamma(d)?;
        Ok(side.ribbon_at(s, d))
    }

    /// Axis-aligned bounds of all boundary control points.
    pub fn bounding_box(&self) -> (Point3, Point3) {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for c in self.sides.iter().flat_map(|s| s.boundary.controls()) {
            lo = lo.inf(c);
            hi = hi.sup(c);
        }
        (lo, hi)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    /// Mixed partials of the two ribbons meeting at the start of side `i`,
    /// each taken with respect to parameters running away from the corner:
    /// `T_i'(0)` and `-T_{i-1}'(1)`.
    pub(crate) fn corner_mixed_partials(&self, i: usize) -> (Vec3, Vec3) {
        let prev = &self.sides[self.cyclic(i, -1)];
        let this = &self.sides[i];
        (this.cross.derivative_at(0.0), -prev.cross.derivative_at(1.0))
    }
}

/// Twist at the corner where side `i - 1` meets side `i`.
///
/// The average of the two one-sided mixed partials; with twist-compatible
/// data both are equal and this is the common twist.
pub fn corner_twist(net: &CurveNetwork, i: usize) -> Result<Vec3> {
    net.side(i)?;
    let (a, b) = net.corner_mixed_partials(i);
    Ok((a + b) * 0.5)
}

/// Relative tolerances for [`validate_network`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Position gaps are compared against this times the bounding-box diagonal.
    pub geometry: f64,
    /// Twist gaps are compared against this times the largest `|T'|` or `|T|`
    /// at a corner. The `|T|` floor keeps flat data from failing on round-off.
    pub twist: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            geometry: 1e-8,
            twist: 1e-4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerReport {
    /// The corner between side `side` and the previous side.
    pub side: usize,
    /// `|P_{i-1}(1) - P_i(0)|`.
    pub position_gap: f64,
    /// Distance between the two one-sided mixed partials.
    pub twist_gap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValidationStatus {
    Pass,
    /// Corners are closed but some twists disagree. Evaluation is still allowed.
    PassWithWarning,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub corners: Vec<CornerReport>,
    pub geometry_epsilon: f64,
    pub twist_epsilon: f64,
    pub status: ValidationStatus,
}

impl ValidationReport {
    /// True unless a position gap is too large.
    pub fn usable(&self) -> bool {
        self.status != ValidationStatus::Fail
    }

    pub fn max_position_gap(&self) -> f64 {
        self.corners.iter().map(|c| c.position_gap).fold(0.0, f64::max)
    }

    pub fn max_twist_gap(&self) -> f64 {
        self.corners.iter().map(|c| c.twist_gap).fold(0.0, f64::max)
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.corners {
            writeln!(
                f,
                "corner {:>2}: position gap {:.3e}, twist gap {:.3e}",
                c.side, c.position_gap, c.twist_gap
            )?;
        }
        let status = match self.status {
            ValidationStatus::Pass => "pass",
            ValidationStatus::PassWithWarning => "pass (twist-incompatible corners)",
            ValidationStatus::Fail => "FAIL",
        };
        write!(
            f,
            "{} (eps_geom {:.3e}, eps_twist {:.3e})",
            status, self.geometry_epsilon, self.twist_epsilon
        )
    }
}

/// Checks corner closure and twist compatibility.
///
/// Open corners fail; twist mismatches only warn. Side counts outside
/// `3..=8` are a structural error.
pub fn validate_network(net: &CurveNetwork, tol: Tolerances) -> Result<ValidationReport> {
    let n = net.len();
    if !(MIN_SIDES..=MAX_SIDES).contains(&n) {
        return Err(Error::Structure(format!(
            "networks must have {MIN_SIDES} to {MAX_SIDES} sides, got {n}"
        )));
    }
    let geometry_epsilon = tol.geometry * net.bbox_diagonal();
    let mut max_twist: f64 = 0.0;
    let corners: Vec<CornerReport> = (0..n)
        .map(|i| {
            let prev = &net.sides[net.cyclic(i, -1)];
            let (a, b) = net.corner_mixed_partials(i);
            let cross = net.sides[i].cross.start().norm().max(prev.cross.end().norm());
            max_twist = max_twist.max(a.norm()).max(b.norm()).max(cross);
            CornerReport {
                side: i,
                position_gap: (prev.boundary.end() - net.sides[i].boundary.start()).norm(),
                twist_gap: (a - b).norm(),
            }
        })
        .collect();
    let twist_epsilon = tol.twist * max_twist;
    let status = if corners.iter().any(|c| c.position_gap > geometry_epsilon) {
        ValidationStatus::Fail
    } else if corners.iter().any(|c| c.twist_gap > twist_epsilon) {
        ValidationStatus::PassWithWarning
    } else {
        ValidationStatus::Pass
    };
    Ok(ValidationReport {
        corners,
        geometry_epsilon,
        twist_epsilon,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn curve(points: &[[f64; 3]]) -> BezierCurve {
        BezierCurve::new(points.iter().copied().map(Vec3::from).collect()).unwrap()
    }

    fn cubic() -> BezierCurve {
        curve(&[[0., 0., 0.], [0., 1., 0.], [1., 1., 0.], [1., 0., 0.]])
    }

    /// Unit square in z = 0 with constant cross-derivatives (0, 0, 1) unless
    /// `cross` is given.
    fn square(cross: impl Fn(usize) -> BezierCurve) -> CurveNetwork {
        let corners = [[0., 0., 0.], [1., 0., 0.], [1., 1., 0.], [0., 1., 0.]];
        let sides = (0..4)
            .map(|i| {
                let b = curve(&[corners[i], corners[(i + 1) % 4]]);
                Side::new(b, cross(i)).unwrap()
            })
            .collect();
        CurveNetwork::new("square", sides)
    }

    fn up(_: usize) -> BezierCurve {
        curve(&[[0., 0., 1.]])
    }

    #[test]
    fn bezier_values() {
        let line = curve(&[[0., 0., 0.], [1., 0., 0.]]);
        assert_eq!(line.eval(0.5).unwrap(), Vec3::new(0.5, 0., 0.));
        assert_eq!(cubic().eval(0.0).unwrap(), Vec3::zeros());
        assert_eq!(cubic().eval(1.0).unwrap(), Vec3::new(1., 0., 0.));
        // Hand subdivision: (0,0)(0,1)(1,1)(1,0) -> (0,.5)(.5,1)(1,.5) -> (.25,.75)(.75,.75) -> (.5,.75)
        assert_eq!(cubic().eval(0.5).unwrap(), Vec3::new(0.5, 0.75, 0.));
        assert!(matches!(cubic().eval(1.5), Err(Error::Domain { .. })));
        assert!(matches!(cubic().eval(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn bezier_derivatives() {
        let line = curve(&[[0., 0., 0.], [2., 0., 0.]]);
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(line.derivative(t).unwrap(), Vec3::new(2., 0., 0.));
        }
        assert_eq!(cubic().derivative(0.0).unwrap(), Vec3::new(0., 3., 0.));
        assert_eq!(cubic().derivative(1.0).unwrap(), Vec3::new(0., -3., 0.));
        assert_eq!(curve(&[[1., 2., 3.]]).derivative(0.4).unwrap(), Vec3::zeros());
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(0.0).unwrap(), 0.0);
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0 / 3.0);
        assert_eq!(gamma(0.5).unwrap(), 0.25);
        assert!(gamma(-1e-9).is_err());
        assert!(gamma(f64::NAN).is_err());
    }

    #[test]
    fn ribbon_values() {
        let net = square(up);
        for i in 0..4 {
            for s in [0.0, 0.25, 0.5, 1.0] {
                assert_eq!(
                    net.ribbon(i, s, 0.0).unwrap(),
                    net.sides()[i].boundary.eval(s).unwrap()
                );
            }
        }
        let p = net.ribbon(0, 0.5, 1.0).unwrap();
        assert_relative_eq!(p, Vec3::new(0.5, 0., 1.0 / 3.0), epsilon = 1e-15);
        assert!(matches!(net.ribbon(4, 0.5, 0.), Err(Error::SideIndex { .. })));
        assert!(net.ribbon(0, 1.1, 0.).is_err());
        assert!(net.ribbon(0, 0.5, -1.).is_err());
    }

    #[test]
    fn ribbon_distance_derivative_is_cross_derivative() {
        let net = square(|i| curve(&[[0., 0., 1.], [0.3, i as f64, 2.], [-1., 0.5, 1.]]));
        let h = 1e-6;
        for i in 0..4 {
            for s in [0.1, 0.5, 0.9] {
                let fd = (net.ribbon(i, s, h).unwrap() - net.ribbon(i, s, 0.).unwrap()) / h;
                let t = net.sides()[i].cross.eval(s).unwrap();
                assert!((fd - t).norm() <= 1e-4 * t.norm(), "{fd} vs {t}");
            }
        }
    }

    /// Cross-derivative field whose derivative at each end is prescribed.
    fn sloped(start_slope: [f64; 3], end_slope: [f64; 3]) -> BezierCurve {
        let a = Vec3::from(start_slope) / 3.0;
        let b = Vec3::from(end_slope) / 3.0;
        let base = Vec3::new(0., 0., 1.);
        BezierCurve::new(vec![base, base + a, base - b, base]).unwrap()
    }

    #[test]
    fn twist_is_average_of_one_sided_partials() {
        // Side 1 starts where side 0 ends. Side 0's field runs toward the corner,
        // so its partial away from the corner is -T_0'(1).
        let net = square(|i| match i {
            0 => sloped([0., 0., 0.], [-1., 0., 0.]),
            1 => sloped([1., 0., 0.], [0., 0., 0.]),
            _ => up(i),
        });
        assert_relative_eq!(corner_twist(&net, 1).unwrap(), Vec3::new(1., 0., 0.), epsilon = 1e-14);

        let net = square(|i| match i {
            0 => sloped([0., 0., 0.], [0., -1., 0.]),
            1 => sloped([1., 0., 0.], [0., 0., 0.]),
            _ => up(i),
        });
        assert_relative_eq!(
            corner_twist(&net, 1).unwrap(),
            Vec3::new(0.5, 0.5, 0.),
            epsilon = 1e-14
        );

        let flat = square(up);
        for i in 0..4 {
            assert_eq!(corner_twist(&flat, i).unwrap(), Vec3::zeros());
        }
        assert!(corner_twist(&flat, 7).is_err());
    }

    #[test]
    fn validation_outcomes() {
        let report = validate_network(&square(up), Tolerances::default()).unwrap();
        assert_eq!(report.status, ValidationStatus::Pass);
        assert_eq!(report.max_position_gap(), 0.0);
        assert_eq!(report.max_twist_gap(), 0.0);

        let mut broken = square(up);
        let b = &mut broken.sides[2].boundary;
        b.controls[0] += Vec3::new(0.1, 0., 0.);
        let report = validate_network(&broken, Tolerances::default()).unwrap();
        assert_eq!(report.status, ValidationStatus::Fail);
        assert_relative_eq!(report.corners[2].position_gap, 0.1, epsilon = 1e-15);
        assert_eq!(report.corners[0].position_gap, 0.0);

        let twisted = square(|i| match i {
            1 => sloped([1., 0., 0.], [0., 0., 0.]),
            _ => up(i),
        });
        let report = validate_network(&twisted, Tolerances::default()).unwrap();
        assert_eq!(report.status, ValidationStatus::PassWithWarning);
        assert!(report.usable());

        let sides = square(up).sides[..2].to_vec();
        assert!(matches!(
            validate_network(&CurveNetwork::new("two", sides), Tolerances::default()),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let net = square(up);
        let back = CurveNetwork::from_json(&net.to_json()).unwrap();
        assert_eq!(back, net);

        let text = r#"{"name": "x", "sides": [{"boundary": {"degree": 2, "controls": [[0,0,0],[1,0,0]]},
                       "cross": {"degree": 0, "controls": [[0,0,1]]}}]}"#;
        assert!(CurveNetwork::from_json(text).is_err());
        let text = r#"{"name": "x", "sides": [{"boundary": {"degree": 0, "controls": [[0,0,0]]},
                       "cross": {"degree": 0, "controls": [[0,0,1]]}}]}"#;
        assert!(CurveNetwork::from_json(text).is_err());
    }

    proptest::proptest! {
        #[test]
        fn gamma_is_increasing_and_bounded(a in 0.0..1e6f64, b in 0.0..1e6f64) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            proptest::prop_assert!(gamma(lo).unwrap() <= gamma(hi).unwrap());
            proptest::prop_assert!(gamma(hi).unwrap() < 0.5);
        }

        #[test]
        fn endpoints_are_exact(points in proptest::collection::vec(proptest::array::uniform3(-1e3..1e3f64), 1..9)) {
            let c = BezierCurve::new(points.iter().copied().map(Vec3::from).collect()).unwrap();
            proptest::prop_assert_eq!(c.eval(0.0).unwrap(), c.start());
            proptest::prop_assert_eq!(c.eval(1.0).unwrap(), c.end());
        }
    }
}
