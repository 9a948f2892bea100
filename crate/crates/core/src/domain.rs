//! The polygonal parameter domain and the per-side local parameters
//! derived from Wachspress coordinates.
//!
//! Side `i` of the domain runs from vertex `i - 1` to vertex `i`, so the
//! coordinate `lambda[i]` belongs to the vertex where side `i` ends. Each
//! domain point gets, for every side,
//!
//! * a side parameter `s_i = lambda_i / (lambda_{i-1} + lambda_i)`,
//! * a distance parameter `d_i = 1 - lambda_{i-1} - lambda_i`,
//! * a constrained distance `dhat_i` that keeps the boundary values of
//!   `d_i` but also matches the derivatives of the neighbouring side
//!   parameters on the adjacent sides.
//!
//! The last one is a Kato-style blend of four boundary values over the
//! square `(s_i, d_i)` of the side; see [`constrained_distance`].

use std::f64::consts::TAU;

use nalgebra::Vector2;

use crate::curvenet::{MAX_SIDES, MIN_SIDES};
use crate::error::{Error, Result};

pub type Uv = Vector2<f64>;

/// Two square-domain parameters below this are treated as a corner of the
/// Kato blend.
pub const CORNER_EPSILON: f64 = 1e-9;

/// Signed areas down to this magnitude below zero count as on the edge.
const INSIDE_TOLERANCE: f64 = 1e-12;

/// A convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainPolygon {
    vertices: Vec<Uv>,
    /// Area of the triangle formed by each vertex and its two neighbours.
    corner_areas: Vec<f64>,
}

impl DomainPolygon {
    pub fn new(vertices: Vec<Uv>) -> Result<Self> {
        let n = vertices.len();
        if !(MIN_SIDES..=MAX_SIDES).contains(&n) {
            return Err(Error::Structure(format!(
                "domain polygons have {MIN_SIDES} to {MAX_SIDES} vertices, got {n}"
            )));
        }
        let corner_areas: Vec<f64> = (0..n)
            .map(|k| {
                let prev = vertices[(k + n - 1) % n];
                let next = vertices[(k + 1) % n];
                signed_area(prev, vertices[k], next)
            })
            .collect();
        if corner_areas.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::Structure(
                "domain polygon must be strictly convex and counterclockwise".into(),
            ));
        }
        Ok(DomainPolygon {
            vertices,
            corner_areas,
        })
    }

    /// Regular polygon inscribed in the unit circle, vertex `k` at angle
    /// `2 pi (k + 1) / n`.
    pub fn regular(n: usize) -> Result<Self> {
        if !(MIN_SIDES..=MAX_SIDES).contains(&n) {
            return Err(Error::Structure(format!(
                "domain polygons have {MIN_SIDES} to {MAX_SIDES} vertices, got {n}"
            )));
        }
        let vertices = (0..n)
            .map(|k| {
                let angle = TAU * (k + 1) as f64 / n as f64;
                Uv::new(angle.cos(), angle.sin())
            })
            .collect();
        Self::new(vertices)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Uv] {
        &self.vertices
    }

    /// First and last vertex of side `i`.
    pub fn side_endpoints(&self, i: usize) -> (Uv, Uv) {
        let n = self.len();
        (self.vertices[(i + n - 1) % n], self.vertices[i % n])
    }

    pub fn centroid(&self) -> Uv {
        self.vertices.iter().sum::<Uv>() / self.len() as f64
    }

    /// Wachspress coordinates of `p`.
    ///
    /// Uses the product form `w_i = C_i * prod_{j != i-1, i} A_j(p)`, where
    /// `A_j` is the signed area of `p` with edge `(V_j, V_{j+1})` and `C_i`
    /// the corner area at `V_i`. This stays finite on the boundary.
    pub fn wachspress(&self, p: Uv) -> Result<BarycentricCoords> {
        let n = self.len();
        let mut areas = [0.0; MAX_SIDES];
        for j in 0..n {
            let a = signed_area(p, self.vertices[j], self.vertices[(j + 1) % n]);
            if a < -INSIDE_TOLERANCE {
                return Err(Error::OutsideDomain {
                    u: p.x,
                    v: p.y,
                    edge: j,
                });
            }
            areas[j] = a.max(0.0);
        }
        let mut lambda = [0.0; MAX_SIDES];
        let mut total = 0.0;
        for i in 0..n {
            let before = (i + n - 1) % n;
            let mut w = self.corner_areas[i];
            for (j, a) in areas[..n].iter().enumerate() {
                if j != i && j != before {
                    w *= a;
                }
            }
            lambda[i] = w;
            total += w;
        }
        for l in &mut lambda[..n] {
            *l /= total;
        }
        Ok(BarycentricCoords { n, lambda })
    }

    /// The point at fraction `tau` along side `i`.
    pub fn side_point(&self, i: usize, tau: f64) -> Uv {
        let (a, b) = self.side_endpoints(i);
        a * (1.0 - tau) + b * tau
    }

    /// Index of a vertex within `eps` of `p`, if any.
    pub(crate) fn near_vertex(&self, p: Uv, eps: f64) -> Option<usize> {
        self.vertices.iter().position(|v| (v - p).norm() <= eps)
    }
}

fn signed_area(a: Uv, b: Uv, c: Uv) -> f64 {
    0.5 * ((b - a).perp(&(c - a)))
}

/// Regular domain polygon with `n` sides.
pub fn regular_polygon(n: usize) -> Result<DomainPolygon> {
    DomainPolygon::regular(n)
}

/// Wachspress coordinates of `p` in `poly`.
pub fn wachspress(poly: &DomainPolygon, p: Uv) -> Result<BarycentricCoords> {
    poly.wachspress(p)
}

/// Point at fraction `tau` along side `i`.
pub fn side_point(poly: &DomainPolygon, i: usize, tau: f64) -> Uv {
    poly.side_point(i, tau)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarycentricCoords {
    n: usize,
    lambda: [f64; MAX_SIDES],
}

impl BarycentricCoords {
    pub fn lambda(&self) -> &[f64] {
        &self.lambda[..self.n]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Side, distance and constrained-distance parameters of one domain point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalParams {
    pub(crate) n: usize,
    pub(crate) s: [f64; MAX_SIDES],
    pub(crate) d: [f64; MAX_SIDES],
    pub(crate) dhat: [f64; MAX_SIDES],
}

/// Which distance parameter a consumer reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceSource {
    /// `d_i` straight from the barycentric coordinates.
    Barycentric,
    /// The constrained `dhat_i`.
    Constrained,
}

impl LocalParams {
    /// Side and distance parameters; `dhat` is left equal to `d` until
    /// [`LocalParams::fill_constrained`] runs.
    pub fn from_barycentric(bc: &BarycentricCoords) -> Self {
        Self::from_barycentric_with(bc, 0.5)
    }

    /// As [`LocalParams::from_barycentric`], with an explicit value for side
    /// parameters that are 0/0 (far corners where both coordinates vanish).
    pub(crate) fn from_barycentric_with(bc: &BarycentricCoords, degenerate_s: f64) -> Self {
        let n = bc.n;
        let l = &bc.lambda;
        let mut s = [0.0; MAX_SIDES];
        let mut d = [0.0; MAX_SIDES];
        for i in 0..n {
            let sum = l[(i + n - 1) % n] + l[i];
            s[i] = if sum > 0.0 {
                (l[i] / sum).clamp(0.0, 1.0)
            } else {
                degenerate_s
            };
            d[i] = (1.0 - sum).clamp(0.0, 1.0);
        }
        LocalParams { n, s, d, dhat: d }
    }

    /// Computes `dhat_i` for every side.
    pub fn fill_constrained(&mut self) {
        for i in 0..self.n {
            self.dhat[i] = constrained_distance(self, i);
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn s(&self) -> &[f64] {
        &self.s[..self.n]
    }

    pub fn d(&self) -> &[f64] {
        &self.d[..self.n]
    }

    pub fn dhat(&self) -> &[f64] {
        &self.dhat[..self.n]
    }

    pub fn distance(&self, source: DistanceSource) -> &[f64] {
        match source {
            DistanceSource::Barycentric => self.d(),
            DistanceSource::Constrained => self.dhat(),
        }
    }

    #[inline]
    pub(crate) fn prev(&self, i: usize) -> usize {
        (i + self.n - 1) % self.n
    }

    #[inline]
    pub(crate) fn next(&self, i: usize) -> usize {
        (i + 1) % self.n
    }
}

/// All local parameters, including the constrained distances, at `p`.
pub fn local_params(poly: &DomainPolygon, p: Uv) -> Result<LocalParams> {
    let mut params = LocalParams::from_barycentric(&poly.wachspress(p)?);
    params.fill_constrained();
    Ok(params)
}

/// Kato blend over the four sides of a square domain:
/// `B_j = prod_{l != j} t_l^2 / sum_k prod_{l != k} t_l^2`.
///
/// Weight `j` tends to 1 as `t_j` tends to 0. Evaluated in product form so
/// a single zero parameter gives an exact unit weight; two or more zeros
/// are singular.
pub fn kato_blend4(t: [f64; 4]) -> Result<[f64; 4]> {
    let zeros = t.iter().filter(|&&x| x == 0.0).count();
    if zeros >= 2 {
        return Err(Error::Singular(zeros));
    }
    let sq = t.map(|x| x * x);
    let products = [
        sq[1] * sq[2] * sq[3],
        sq[0] * sq[2] * sq[3],
        sq[0] * sq[1] * sq[3],
        sq[0] * sq[1] * sq[2],
    ];
    let total: f64 = products.iter().sum();
    Ok(products.map(|p| p / total))
}

/// Constrained distance for side `i`.
///
/// Boundary values `x = (d_i, s_{i+1}, d_i, 1 - s_{i-1})` are blended with
/// [`kato_blend4`] at `t = (d_i, 1 - s_i, 1 - d_i, s_i)`. Where two `t`
/// values are within [`CORNER_EPSILON`] of zero the two matching boundary
/// values agree, and their average is returned.
pub fn constrained_distance(params: &LocalParams, i: usize) -> f64 {
    let (prev, next) = (params.prev(i), params.next(i));
    let d = params.d[i];
    let s = params.s[i];
    let x = [d, params.s[next], d, 1.0 - params.s[prev]];
    let t = [d, 1.0 - s, 1.0 - d, s];

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| t[a].total_cmp(&t[b]));
    let value = if t[order[1]] < CORNER_EPSILON {
        0.5 * (x[order[0]] + x[order[1]])
    } else {
        let b = kato_blend4(t).expect("at most one zero parameter");
        x.iter().zip(b).map(|(x, b)| x * b).sum()
    };
    value.clamp(0.0, 1.0)
}
