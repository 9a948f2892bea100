//! Domain triangulation, surface meshes, deviation maps and discrete mean
//! curvature.
//!
//! The domain mesh is a fan of concentric rings around the polygon
//! centroid. Ring `k` (of `r`) is the polygon scaled by `k / r` with every
//! side split into `k` segments, so the outer ring holds the boundary
//! points exactly and the mesh has `n r^2` triangles.

use std::collections::BTreeMap;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvenet::{Point3, Vec3};
use crate::domain::{DomainPolygon, Uv};
use crate::error::{Error, Result};
use crate::patch::Patch;

pub mod io;

pub use io::{read_obj, read_ply, write_mesh, write_obj, write_ply, ColorRamp, MeshFormat};

/// Name of the per-vertex deviation channel, in percent of the bounding-box axis.
pub const DEVIATION: &str = "deviation";
pub const MEAN_CURVATURE: &str = "mean_curvature";

/// Where a boundary point of the domain mesh sits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryTag {
    pub side: usize,
    pub tau: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DomainMesh {
    pub points: Vec<Uv>,
    pub triangles: Vec<[u32; 3]>,
    /// `Some` for points on the polygon boundary. Vertices are tagged as
    /// the start (`tau = 0`) of the side they begin.
    pub boundary: Vec<Option<BoundaryTag>>,
}

/// Number of triangles [`triangulate_domain`] produces.
pub fn triangle_count(n: usize, resolution: usize) -> usize {
    n * resolution * resolution
}

/// Smallest resolution whose triangle count is closest to `target`.
pub fn resolution_for_triangles(n: usize, target: usize) -> usize {
    let r = (target as f64 / n as f64).sqrt();
    let (lo, hi) = (r.floor().max(1.0) as usize, r.ceil().max(1.0) as usize);
    let diff = |r: usize| triangle_count(n, r).abs_diff(target);
    if diff(lo) <= diff(hi) {
        lo
    } else {
        hi
    }
}

/// Ring-based triangulation of the domain polygon.
pub fn triangulate_domain(poly: &DomainPolygon, resolution: usize) -> Result<DomainMesh> {
    if resolution == 0 {
        return Err(Error::Structure("resolution must be at least 1".into()));
    }
    let n = poly.len();
    let r = resolution;
    let center = poly.centroid();
    let ring_start = |k: usize| if k == 0 { 0 } else { 1 + n * k * (k - 1) / 2 };
    let index = |k: usize, m: usize| -> u32 {
        if k == 0 {
            0
        } else {
            (ring_start(k) + m % (n * k)) as u32
        }
    };

    let total = ring_start(r + 1);
    let mut points = Vec::with_capacity(total);
    let mut boundary = Vec::with_capacity(total);
    points.push(center);
    boundary.push(None);
    for k in 1..=r {
        let scale = k as f64 / r as f64;
        for i in 0..n {
            for j in 0..k {
                let tau = j as f64 / k as f64;
                let on_side = poly.side_point(i, tau);
                if k == r {
                    points.push(on_side);
                    boundary.push(Some(BoundaryTag { side: i, tau }));
                } else {
                    points.push(center + (on_side - center) * scale);
                    boundary.push(None);
                }
            }
        }
    }

    let mut triangles = Vec::with_capacity(triangle_count(n, r));
    for k in 1..=r {
        for i in 0..n {
            let outer = |j: usize| index(k, i * k + j);
            let inner = |j: usize| index(k - 1, i * (k - 1) + j);
            for j in 0..k {
                triangles.push([outer(j), outer(j + 1), inner(j)]);
            }
            for j in 0..k - 1 {
                triangles.push([inner(j), outer(j + 1), inner(j + 1)]);
            }
        }
    }
    Ok(DomainMesh {
        points,
        triangles,
        boundary,
    })
}

/// Triangle mesh with optional named per-vertex scalar channels.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<Point3>,
    pub triangles: Vec<[u32; 3]>,
    pub scalars: BTreeMap<String, Vec<f64>>,
}

impl SurfaceMesh {
    pub fn bounding_box(&self) -> (Point3, Point3) {
        bounds(self.vertices.iter())
    }

    /// Area-weighted vertex normals (unit length, zero for isolated vertices).
    pub fn vertex_normals(&self) -> Vec<Vec3> {
        let mut normals = vec![Vec3::zeros(); self.vertices.len()];
        for t in &self.triangles {
            let [a, b, c] = t.map(|k| self.vertices[k as usize]);
            // Twice the area times the unit normal.
            let n = (b - a).cross(&(c - a));
            for &k in t {
                normals[k as usize] += n;
            }
        }
        for n in &mut normals {
            let len = n.norm();
            if len > 0.0 {
                *n /= len;
            }
        }
        normals
    }
}

fn bounds<'a>(points: impl Iterator<Item = &'a Point3>) -> (Point3, Point3) {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (lo, hi)
}

/// Evaluates the patch at every domain point, in parallel.
///
/// Output order follows the domain mesh, so the result does not depend on
/// scheduling.
pub fn tessellate(patch: &Patch, dmesh: &DomainMesh) -> Result<SurfaceMesh> {
    let vertices = dmesh
        .points
        .par_iter()
        .map(|&p| patch.eval(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceMesh {
        vertices,
        triangles: dmesh.triangles.clone(),
        scalars: BTreeMap::new(),
    })
}

/// Single-threaded [`tessellate`], for timing.
pub fn tessellate_serial(patch: &Patch, dmesh: &DomainMesh) -> Result<SurfaceMesh> {
    let vertices = dmesh
        .points
        .iter()
        .map(|&p| patch.eval(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceMesh {
        vertices,
        triangles: dmesh.triangles.clone(),
        scalars: BTreeMap::new(),
    })
}

/// Deviation between two tessellations of the same domain mesh, in percent
/// of the bounding-box axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeviationStats {
    pub max_pct: f64,
    pub mean_pct: f64,
    /// Longest edge of the joint axis-aligned bounding box, in model units.
    pub bbox_axis: f64,
}

/// Per-vertex distance between `a` and `b`, returned as a copy of `a`
/// carrying a [`DEVIATION`] channel.
pub fn deviation(a: &SurfaceMesh, b: &SurfaceMesh) -> Result<(SurfaceMesh, DeviationStats)> {
    if a.vertices.len() != b.vertices.len() {
        return Err(Error::Topology(format!(
            "{} vs {} vertices",
            a.vertices.len(),
            b.vertices.len()
        )));
    }
    if a.triangles != b.triangles {
        return Err(Error::Topology("triangle lists differ".into()));
    }
    let (lo, hi) = bounds(a.vertices.iter().chain(&b.vertices));
    let bbox_axis = (hi - lo).max();
    let scale = if bbox_axis > 0.0 { 100.0 / bbox_axis } else { 0.0 };
    let pct: Vec<f64> = a
        .vertices
        .iter()
        .zip(&b.vertices)
        .map(|(p, q)| (p - q).norm() * scale)
        .collect();
    let max_pct = pct.iter().copied().fold(0.0, f64::max);
    let mean_pct = if pct.is_empty() {
        0.0
    } else {
        pct.iter().sum::<f64>() / pct.len() as f64
    };
    let mut out = a.clone();
    out.scalars.insert(DEVIATION.to_string(), pct);
    Ok((
        out,
        DeviationStats {
            max_pct,
            mean_pct: mean_pct.min(max_pct),
            bbox_axis,
        },
    ))
}

/// Distance from each vertex of `a` to the surface of `b`, in percent of
/// the bounding-box axis.
///
/// Unlike [`deviation`], this ignores how the two surfaces are parameterized:
/// a point that slides within the other surface counts as zero. The channel
/// holds the distances from `a`; the statistics cover both directions, so
/// `max_pct` is the Hausdorff distance between the two meshes.
pub fn surface_deviation(a: &SurfaceMesh, b: &SurfaceMesh) -> Result<(SurfaceMesh, DeviationStats)> {
    if a.vertices.is_empty() || a.triangles.is_empty() || b.triangles.is_empty() {
        return Err(Error::Topology("surface deviation needs two triangle meshes".into()));
    }
    let (lo, hi) = bounds(a.vertices.iter().chain(&b.vertices));
    let bbox_axis = (hi - lo).max();
    let scale = if bbox_axis > 0.0 { 100.0 / bbox_axis } else { 0.0 };
    let ab: Vec<f64> = distances_to_surface(a, b).iter().map(|d| d * scale).collect();
    let ba: Vec<f64> = distances_to_surface(b, a).iter().map(|d| d * scale).collect();
    let max_pct = ab.iter().chain(&ba).copied().fold(0.0, f64::max);
    let mean_pct = ab.iter().chain(&ba).sum::<f64>() / (ab.len() + ba.len()) as f64;
    let mut out = a.clone();
    out.scalars.insert(DEVIATION.to_string(), ab);
    Ok((
        out,
        DeviationStats {
            max_pct,
            mean_pct: mean_pct.min(max_pct),
            bbox_axis,
        },
    ))
}

/// Exact point-to-mesh distances. Triangles whose bounding box is farther
/// than the best distance so far are skipped; with matching vertex counts
/// the corresponding vertex seeds that bound.
fn distances_to_surface(from: &SurfaceMesh, to: &SurfaceMesh) -> Vec<f64> {
    let tris: Vec<([Point3; 3], Point3, Point3)> = to
        .triangles
        .iter()
        .map(|t| {
            let v = t.map(|k| to.vertices[k as usize]);
            let (lo, hi) = bounds(v.iter());
            (v, lo, hi)
        })
        .collect();
    let seeded = from.vertices.len() == to.vertices.len();
    from.vertices
        .par_iter()
        .enumerate()
        .map(|(k, p)| {
            let mut best = if seeded {
                (to.vertices[k] - p).norm_squared()
            } else {
                f64::INFINITY
            };
            for (v, lo, hi) in &tris {
                let gap = (lo - p).sup(&(p - hi)).sup(&Vec3::zeros());
                if gap.norm_squared() >= best {
                    continue;
                }
                let q = closest_point_on_triangle(p, v);
                best = best.min((q - p).norm_squared());
            }
            best.sqrt()
        })
        .collect()
}

/// Closest point of a triangle, by Voronoi region of the query point.
fn closest_point_on_triangle(p: &Point3, [a, b, c]: &[Point3; 3]) -> Point3 {
    let (ab, ac, ap) = (b - a, c - a, p - a);
    let (d1, d2) = (ab.dot(&ap), ac.dot(&ap));
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let (d3, d4) = (ab.dot(&bp), ac.dot(&bp));
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let (d5, d6) = (ab.dot(&cp), ac.dot(&cp));
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = va + vb + vc;
    if denom <= 0.0 {
        // Degenerate triangle: fall back to its edges.
        return [(a, b), (b, c), (c, a)]
            .into_iter()
            .map(|(x, y)| {
                let e = y - x;
                let t = if e.norm_squared() > 0.0 {
                    ((p - x).dot(&e) / e.norm_squared()).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                x + e * t
            })
            .min_by(|x, y| (x - p).norm_squared().total_cmp(&(y - p).norm_squared()))
            .expect("three edges");
    }
    a + ab * (vb / denom) + ac * (vc / denom)
}

/// Discrete mean curvature from the cotangent Laplacian with mixed Voronoi
/// areas, signed so that a surface bending away from its normal (a sphere
/// with outward normals) is positive.
///
/// Boundary vertices take the value of their nearest interior neighbour.
pub fn mean_curvature(mesh: &SurfaceMesh) -> SurfaceMesh {
    let nv = mesh.vertices.len();
    let mut laplace = vec![Vec3::zeros(); nv];
    let mut area = vec![0.0; nv];
    let mut degenerate = 0usize;
    let mut edge_use: BTreeMap<(u32, u32), u32> = BTreeMap::new();

    for t in &mesh.triangles {
        for e in 0..3 {
            let (a, b) = (t[e], t[(e + 1) % 3]);
            *edge_use.entry((a.min(b), a.max(b))).or_default() += 1;
        }
        let p = t.map(|k| mesh.vertices[k as usize]);
        let double_area = (p[1] - p[0]).cross(&(p[2] - p[0])).norm();
        if double_area <= f64::MIN_POSITIVE {
            degenerate += 1;
            continue;
        }
        let tri_area = 0.5 * double_area;
        let mut cot = [0.0; 3];
        let mut obtuse = None;
        for c in 0..3 {
            let (u, v) = (p[(c + 1) % 3] - p[c], p[(c + 2) % 3] - p[c]);
            let dot = u.dot(&v);
            cot[c] = dot / double_area;
            if dot < 0.0 {
                obtuse = Some(c);
            }
        }
        for c in 0..3 {
            // The edge opposite corner c joins a and b.
            let (a, b) = ((c + 1) % 3, (c + 2) % 3);
            let e = p[b] - p[a];
            laplace[t[a] as usize] += e * cot[c];
            laplace[t[b] as usize] -= e * cot[c];
        }
        for c in 0..3 {
            let k = t[c] as usize;
            area[k] += match obtuse {
                None => {
                    let (a, b) = ((c + 1) % 3, (c + 2) % 3);
                    ((p[a] - p[c]).norm_squared() * cot[b] + (p[b] - p[c]).norm_squared() * cot[a])
                        / 8.0
                }
                Some(o) if o == c => tri_area / 2.0,
                Some(_) => tri_area / 4.0,
            };
        }
    }
    if degenerate > 0 {
        warn!("mean curvature: skipped {degenerate} degenerate triangles");
    }

    let normals = mesh.vertex_normals();
    let mut on_boundary = vec![false; nv];
    let mut neighbours = vec![Vec::new(); nv];
    for (&(a, b), &uses) in &edge_use {
        if uses == 1 {
            on_boundary[a as usize] = true;
            on_boundary[b as usize] = true;
        }
        neighbours[a as usize].push(b as usize);
        neighbours[b as usize].push(a as usize);
    }

    let mut value: Vec<Option<f64>> = (0..nv)
        .map(|k| {
            if on_boundary[k] || neighbours[k].is_empty() {
                None
            } else if area[k] > 0.0 {
                // Laplace-Beltrami of position is -2 H n.
                Some(-laplace[k].dot(&normals[k]) / (4.0 * area[k]))
            } else {
                Some(0.0)
            }
        })
        .collect();

    // Fill boundary vertices from the nearest already-valued neighbour,
    // ring by ring, so corners whose neighbours are all on the boundary
    // still get a value.
    loop {
        let mut changed = false;
        let snapshot = value.clone();
        for k in 0..nv {
            if snapshot[k].is_some() {
                continue;
            }
            let nearest = neighbours[k]
                .iter()
                .filter_map(|&j| snapshot[j].map(|v| ((mesh.vertices[j] - mesh.vertices[k]).norm(), v)))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            if let Some((_, v)) = nearest {
                value[k] = Some(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut out = mesh.clone();
    out.scalars.insert(
        MEAN_CURVATURE.to_string(),
        value.into_iter().map(|v| v.unwrap_or(0.0)).collect(),
    );
    out
}
