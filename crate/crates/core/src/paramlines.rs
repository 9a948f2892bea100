//! Constant-parameter lines of the domain parameterization, for plotting.
//!
//! For a chosen side `i` this traces level sets of `s_i` and of the
//! distance parameters of the two neighbouring sides, either the plain
//! barycentric ones or the constrained ones. Near side `i` the constrained
//! distance lines run tangent to the `s_i` lines; the plain ones cross them
//! at an angle.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::domain::{DomainPolygon, LocalParams, Uv};
use crate::error::{Error, Result};
use crate::tessellation::triangulate_domain;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamField {
    /// `s_i` of the chosen side.
    Side,
    /// Distance parameter of side `i - 1`.
    PrevDistance,
    /// Distance parameter of side `i + 1`.
    NextDistance,
}

impl ParamField {
    fn colour(self) -> &'static str {
        match self {
            ParamField::Side => "green",
            ParamField::PrevDistance => "blue",
            ParamField::NextDistance => "red",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamLine {
    pub field: ParamField,
    pub level: f64,
    pub points: Vec<Uv>,
}

/// Levels 0.1, 0.2, ..., 0.9.
pub fn default_levels() -> Vec<f64> {
    (1..10).map(|k| k as f64 / 10.0).collect()
}

/// Traces the level sets on a domain mesh of the given resolution.
pub fn param_lines(
    poly: &DomainPolygon,
    side: usize,
    constrained: bool,
    levels: &[f64],
    resolution: usize,
) -> Result<Vec<ParamLine>> {
    let n = poly.len();
    if side >= n {
        return Err(Error::SideIndex { index: side, n });
    }
    let mesh = triangulate_domain(poly, resolution)?;
    let prev = (side + n - 1) % n;
    let next = (side + 1) % n;
    let mut values: [Vec<f64>; 3] = Default::default();
    for &p in &mesh.points {
        let mut params = LocalParams::from_barycentric(&poly.wachspress(p)?);
        if constrained {
            params.fill_constrained();
        }
        let dist = if constrained { params.dhat() } else { params.d() };
        values[0].push(params.s()[side]);
        values[1].push(dist[prev]);
        values[2].push(dist[next]);
    }

    let fields = [ParamField::Side, ParamField::PrevDistance, ParamField::NextDistance];
    let mut lines = Vec::new();
    for (field, vals) in fields.into_iter().zip(&values) {
        for &level in levels {
            for points in contour(&mesh.points, &mesh.triangles, vals, level) {
                lines.push(ParamLine {
                    field,
                    level,
                    points,
                });
            }
        }
    }
    Ok(lines)
}

type EdgeKey = (u32, u32);

/// Marching-triangles level set, chained into polylines.
fn contour(points: &[Uv], triangles: &[[u32; 3]], values: &[f64], level: f64) -> Vec<Vec<Uv>> {
    let above = |k: u32| values[k as usize] >= level;
    let mut crossing: HashMap<EdgeKey, Uv> = HashMap::new();
    let mut links: HashMap<EdgeKey, Vec<EdgeKey>> = HashMap::new();
    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();

    for t in triangles {
        let mut hits: Vec<EdgeKey> = Vec::with_capacity(2);
        for e in 0..3 {
            let (a, b) = (t[e], t[(e + 1) % 3]);
            if above(a) != above(b) {
                let key = (a.min(b), a.max(b));
                crossing.entry(key).or_insert_with(|| {
                    let (fa, fb) = (values[a as usize], values[b as usize]);
                    let w = (level - fa) / (fb - fa);
                    points[a as usize] * (1.0 - w) + points[b as usize] * w
                });
                hits.push(key);
            }
        }
        if let [p, q] = hits[..] {
            segments.push((p, q));
            links.entry(p).or_default().push(q);
            links.entry(q).or_default().push(p);
        }
    }

    let mut seg_used = vec![false; segments.len()];
    let seg_index: HashMap<(EdgeKey, EdgeKey), usize> = segments
        .iter()
        .enumerate()
        .flat_map(|(k, &(p, q))| [((p, q), k), ((q, p), k)])
        .collect();

    let mut walk = |start: EdgeKey| -> Vec<EdgeKey> {
        let mut chain = vec![start];
        let mut current = start;
        loop {
            let next = links[&current].iter().copied().find(|&q| {
                let k = seg_index[&(current, q)];
                !seg_used[k]
            });
            match next {
                Some(q) => {
                    seg_used[seg_index[&(current, q)]] = true;
                    chain.push(q);
                    current = q;
                }
                None => break,
            }
        }
        chain
    };

    // Open chains start at edges with a single link; closed loops anywhere.
    let mut starts: Vec<EdgeKey> = links
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, _)| *k)
        .collect();
    starts.sort();
    let mut others: Vec<EdgeKey> = links.keys().copied().collect();
    others.sort();
    starts.extend(others);

    let mut lines = Vec::new();
    for start in starts {
        let chain = walk(start);
        if chain.len() >= 2 {
            lines.push(chain.iter().map(|k| crossing[k]).collect());
        }
    }
    lines
}

/// Renders lines and the domain outline as an SVG of plain polylines.
pub fn to_svg(poly: &DomainPolygon, lines: &[ParamLine]) -> String {
    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"600\" height=\"600\">\n",
    );
    svg.push_str("<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"0.006\">\n");
    let fmt_points = |pts: &mut dyn Iterator<Item = &Uv>| {
        pts.map(|p| format!("{:.6},{:.6}", p.x, p.y))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut outline: Vec<Uv> = poly.vertices().to_vec();
    outline.push(outline[0]);
    let _ = writeln!(
        svg,
        "<polyline stroke=\"black\" points=\"{}\"/>",
        fmt_points(&mut outline.iter())
    );
    for line in lines {
        let _ = writeln!(
            svg,
            "<polyline stroke=\"{}\" points=\"{}\"/>",
            line.field.colour(),
            fmt_points(&mut line.points.iter())
        );
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_parameter_lines_hit_the_side() {
        let poly = DomainPolygon::regular(6).unwrap();
        let lines = param_lines(&poly, 1, true, &[0.5], 20).unwrap();
        for field in [ParamField::Side, ParamField::PrevDistance, ParamField::NextDistance] {
            assert!(lines.iter().any(|l| l.field == field), "{field:?}");
        }
        // The s_1 = 0.5 line passes through the midpoint of side 1.
        let mid = poly.side_point(1, 0.5);
        let close = lines
            .iter()
            .filter(|l| l.field == ParamField::Side)
            .flat_map(|l| &l.points)
            .any(|p| (p - mid).norm() < 1e-9);
        assert!(close);
    }

    #[test]
    fn lines_are_chained() {
        let poly = DomainPolygon::regular(5).unwrap();
        let lines = param_lines(&poly, 0, false, &[0.3], 16).unwrap();
        // The far side has s_0 = 0/0, so the level set may break up there,
        // but the piece leaving side 0 crosses the whole domain.
        let start = poly.side_point(0, 0.3);
        let main = lines
            .iter()
            .filter(|l| l.field == ParamField::Side)
            .find(|l| (l.points[0] - start).norm() < 1e-12 || (l.points[l.points.len() - 1] - start).norm() < 1e-12)
            .expect("a line starts on side 0");
        assert!(main.points.len() > 16);
    }

    #[test]
    fn svg_is_plain_polylines() {
        let poly = DomainPolygon::regular(4).unwrap();
        let lines = param_lines(&poly, 0, true, &default_levels(), 8).unwrap();
        let svg = to_svg(&poly, &lines);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), lines.len() + 1);
        assert!(param_lines(&poly, 4, true, &[0.5], 8).is_err());
    }
}
