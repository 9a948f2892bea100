//! Example curve networks cut from analytic height fields.
//!
//! A network for an `n`-gon outline in the `xy` plane is built from the
//! graph `z = h(x, y)` of a quadratic:
//!
//! * boundary `i` is the image of outline edge `i`, a quadratic Bézier;
//! * its cross-derivative is the image of a direction field that starts
//!   along the previous edge and ends along the next one, blended with a
//!   cubic that is flat at both ends.
//!
//! Because every cross-derivative is tangent to the same smooth surface,
//! the data is corner- and twist-compatible by construction, and the
//! surface normal `(-h_x, -h_y, 1)` is the exact G1 reference along every
//! boundary. The six networks shipped in `networks/` were written by the
//! `generate_networks` example and are embedded at compile time.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};

use crate::curvenet::{BezierCurve, CurveNetwork, Side, Vec3};
use crate::domain::Uv;

/// `z = xx x^2 + xy x y + yy y^2 + x x + y y + c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeightField {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
    pub x: f64,
    pub y: f64,
    pub c: f64,
}

impl HeightField {
    pub fn height(&self, p: Uv) -> f64 {
        self.xx * p.x * p.x + self.xy * p.x * p.y + self.yy * p.y * p.y + self.x * p.x + self.y * p.y + self.c
    }

    pub fn gradient(&self, p: Uv) -> Uv {
        Uv::new(
            2.0 * self.xx * p.x + self.xy * p.y + self.x,
            self.xy * p.x + 2.0 * self.yy * p.y + self.y,
        )
    }

    pub fn point(&self, p: Uv) -> Vec3 {
        Vec3::new(p.x, p.y, self.height(p))
    }

    /// Upward unit normal of the graph.
    pub fn normal(&self, p: Uv) -> Vec3 {
        let g = self.gradient(p);
        Vec3::new(-g.x, -g.y, 1.0).normalize()
    }

    /// Pushes a planar direction at `p` onto the surface.
    pub fn push_forward(&self, p: Uv, dir: Uv) -> Vec3 {
        Vec3::new(dir.x, dir.y, self.gradient(p).dot(&dir))
    }
}

/// Height field of the bundled networks.
pub const DEFAULT_FIELD: HeightField = HeightField {
    xx: -0.02,
    xy: 0.008,
    yy: -0.014,
    x: 0.06,
    y: 0.03,
    c: 2.0,
};

/// Plane of [`planar_network`], as `(normal, offset)` with `normal . p = offset`.
pub const PLANE: ([f64; 3], f64) = ([-0.1, -0.2, 1.0], 1.0);

const PLANAR_FIELD: HeightField = HeightField {
    xx: 0.0,
    xy: 0.0,
    yy: 0.0,
    x: 0.1,
    y: 0.2,
    c: 1.0,
};

const BOWL_FIELD: HeightField = HeightField {
    xx: -0.02,
    xy: 0.0,
    yy: -0.02,
    x: 0.0,
    y: 0.0,
    c: 0.0,
};

/// Outline radius of the generated networks, in model units.
pub const RADIUS: f64 = 10.0;

pub const NAMES: [&str; 6] = ["triangle", "quad", "pentagon", "hexagon", "heptagon", "octagon"];

const STORED: [&str; 6] = [
    include_str!("../networks/triangle.json"),
    include_str!("../networks/quad.json"),
    include_str!("../networks/pentagon.json"),
    include_str!("../networks/hexagon.json"),
    include_str!("../networks/heptagon.json"),
    include_str!("../networks/octagon.json"),
];

/// Name of the bundled network with `n` sides.
pub fn name(n: usize) -> &'static str {
    NAMES[n - 3]
}

/// The stored network with `n` sides (3 to 8).
pub fn network(n: usize) -> CurveNetwork {
    assert!((3..=8).contains(&n), "bundled networks have 3 to 8 sides");
    CurveNetwork::from_json(STORED[n - 3]).expect("bundled network parses")
}

/// All stored networks, ordered by side count.
pub fn all() -> Vec<CurveNetwork> {
    (3..=8).map(network).collect()
}

pub fn by_name(name: &str) -> Option<CurveNetwork> {
    NAMES.iter().position(|&n| n == name).map(|k| network(k + 3))
}

/// Slightly irregular convex outline: radius and angle vary per vertex.
pub fn irregular_outline(n: usize, radius: f64) -> Vec<Uv> {
    (0..n)
        .map(|k| {
            let jitter = 0.15 * (TAU / n as f64) * (1.7 * k as f64 + 0.3).sin() * 0.5;
            let angle = TAU * (k + 1) as f64 / n as f64 + jitter;
            let r = radius * (1.0 + 0.08 * (3.0 * k as f64 + 1.0).sin());
            Uv::new(r * angle.cos(), r * angle.sin())
        })
        .collect()
}

pub fn regular_outline(n: usize, radius: f64) -> Vec<Uv> {
    (0..n)
        .map(|k| {
            let angle = TAU * (k + 1) as f64 / n as f64;
            Uv::new(radius * angle.cos(), radius * angle.sin())
        })
        .collect()
}

/// Generates the network of `field` over `outline` (counterclockwise).
pub fn generate(name: &str, outline: &[Uv], field: &HeightField) -> CurveNetwork {
    let n = outline.len();
    let sides = (0..n)
        .map(|i| {
            let a = outline[(i + n - 1) % n];
            let b = outline[i];
            let before = outline[(i + n - 2) % n];
            let after = outline[(i + 1) % n];
            let along = |t: f64| a * (1.0 - t) + b * t;
            let boundary = interpolate(2, |t| field.point(along(t)));
            let cross = interpolate(4, |t| {
                let y = 1.0 - t;
                let blend = y * y * (1.0 + 2.0 * t);
                let dir = (before - a) * blend + (after - b) * (1.0 - blend);
                field.push_forward(along(t), dir)
            });
            Side::new(boundary, cross).expect("boundary has degree 2")
        })
        .collect();
    CurveNetwork::new(name, sides)
}

/// Bundled network regenerated from its definition.
pub fn generate_bundled(n: usize) -> CurveNetwork {
    generate(name(n), &irregular_outline(n, RADIUS), &DEFAULT_FIELD)
}

/// Network lying in the plane [`PLANE`].
pub fn planar_network(n: usize) -> CurveNetwork {
    generate("planar", &irregular_outline(n, RADIUS), &PLANAR_FIELD)
}

/// Rotationally symmetric bowl over a regular outline.
pub fn symmetric_network(n: usize) -> CurveNetwork {
    generate("bowl", &regular_outline(n, RADIUS), &BOWL_FIELD)
}

/// Bézier curve of the given degree through `f` sampled at equally spaced
/// parameters. Exact when `f` is a polynomial of at most that degree.
fn interpolate(degree: usize, f: impl Fn(f64) -> Vec3) -> BezierCurve {
    let m = degree + 1;
    let ts: Vec<f64> = (0..m).map(|k| k as f64 / degree as f64).collect();
    let basis = DMatrix::from_fn(m, m, |r, c| bernstein(degree, c, ts[r]));
    let lu = basis.lu();
    let samples: Vec<Vec3> = ts.iter().map(|&t| f(t)).collect();
    let mut controls = vec![Vec3::zeros(); m];
    for axis in 0..3 {
        let rhs = DVector::from_iterator(m, samples.iter().map(|p| p[axis]));
        let sol = lu.solve(&rhs).expect("Bernstein matrix is regular");
        for (c, v) in controls.iter_mut().zip(sol.iter()) {
            c[axis] = *v;
        }
    }
    // Pin the ends so corners close exactly.
    controls[0] = samples[0];
    controls[degree] = samples[degree];
    BezierCurve::new(controls).expect("finite controls")
}

fn bernstein(n: usize, k: usize, t: f64) -> f64 {
    let binom = (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64);
    binom * t.powi(k as i32) * (1.0 - t).powi((n - k) as i32)
}
