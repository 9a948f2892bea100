//! Evaluation timing per scheme and side count, with the MP to MC speedup.
//!
//! Each cell is the median wall time of full single-threaded tessellations
//! of a prebuilt domain mesh, after one discarded warm-up run. Schemes are
//! interleaved within each repetition, rotating the order, so slow drifts
//! in machine state hit all of them alike. Spread is the median absolute
//! deviation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use serde::Serialize;

use crate::curvenet::CurveNetwork;
use crate::error::{Error, Result};
use crate::patch::{Patch, PatchConfig, Scheme};
use crate::tessellation::{resolution_for_triangles, tessellate_serial, triangulate_domain};

/// Triangle count the automatic resolution aims for.
pub const TARGET_TRIANGLES: usize = 10_000;

pub const MIN_REPETITIONS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchResolution {
    /// Same ring count for every side count.
    Fixed(usize),
    /// Per side count, the ring count closest to this many triangles.
    TargetTriangles(usize),
}

impl Default for BenchResolution {
    fn default() -> Self {
        BenchResolution::TargetTriangles(TARGET_TRIANGLES)
    }
}

impl BenchResolution {
    pub fn rings(self, n: usize) -> usize {
        match self {
            BenchResolution::Fixed(r) => r,
            BenchResolution::TargetTriangles(t) => resolution_for_triangles(n, t),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub sides: Vec<usize>,
    pub schemes: Vec<Scheme>,
    pub resolution: BenchResolution,
    pub repetitions: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchCell {
    pub n: usize,
    pub median_ms: f64,
    pub mad_ms: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Speedup {
    pub n: usize,
    pub pct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchMeta {
    pub resolution: BenchResolution,
    pub repetitions: usize,
    pub warmup_runs: usize,
    pub threads: usize,
    /// Rings and triangles used per side count.
    pub rings: BTreeMap<usize, usize>,
    pub triangles: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchResult {
    pub rows: BTreeMap<Scheme, Vec<BenchCell>>,
    /// `(MP - MC) / MP * 100` per side count; empty unless both were timed.
    pub speedup_pct: Vec<Speedup>,
    pub meta: BenchMeta,
}

impl BenchResult {
    pub fn median_ms(&self, scheme: Scheme, n: usize) -> Option<f64> {
        self.rows
            .get(&scheme)?
            .iter()
            .find(|c| c.n == n)
            .map(|c| c.median_ms)
    }

    pub fn speedup(&self, n: usize) -> Option<f64> {
        self.speedup_pct.iter().find(|s| s.n == n).map(|s| s.pct)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bench result serializes")
    }

    /// Plain-text table: one row per scheme, one column per side count.
    pub fn table(&self) -> String {
        let ns: Vec<usize> = self.meta.triangles.keys().copied().collect();
        let mut out = String::new();
        let _ = write!(out, "{:<8}", "");
        for n in &ns {
            let _ = write!(out, "{:>11}", format!("n={n}"));
        }
        out.push('\n');
        for (scheme, cells) in &self.rows {
            let _ = write!(out, "{:<8}", scheme.as_str());
            for n in &ns {
                match cells.iter().find(|c| c.n == *n) {
                    Some(c) => {
                        let _ = write!(out, "{:>11}", format!("{:.3}ms", c.median_ms));
                    }
                    None => {
                        let _ = write!(out, "{:>11}", "-");
                    }
                }
            }
            out.push('\n');
        }
        if !self.speedup_pct.is_empty() {
            let _ = write!(out, "{:<8}", "Speedup");
            for n in &ns {
                match self.speedup(*n) {
                    Some(p) => {
                        let _ = write!(out, "{:>11}", format!("{p:.1}%"));
                    }
                    None => {
                        let _ = write!(out, "{:>11}", "-");
                    }
                }
            }
            out.push('\n');
        }
        let _ = write!(out, "{:<8}", "tris");
        for n in &ns {
            let _ = write!(out, "{:>11}", self.meta.triangles[n]);
        }
        out.push('\n');
        out
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}

/// Times every requested scheme on the network for each side count.
pub fn run_bench(nets: &BTreeMap<usize, CurveNetwork>, config: &BenchConfig) -> Result<BenchResult> {
    if config.repetitions < MIN_REPETITIONS {
        return Err(Error::Bench(format!(
            "at least {MIN_REPETITIONS} repetitions are needed, got {}",
            config.repetitions
        )));
    }
    if config.schemes.is_empty() {
        return Err(Error::Bench("no schemes requested".into()));
    }
    let mut rows: BTreeMap<Scheme, Vec<BenchCell>> = BTreeMap::new();
    let mut rings = BTreeMap::new();
    let mut triangles = BTreeMap::new();

    for &n in &config.sides {
        let net = nets
            .get(&n)
            .ok_or_else(|| Error::Bench(format!("no network with {n} sides")))?;
        let patches = config
            .schemes
            .iter()
            .map(|&s| Patch::regular(s, net.clone(), PatchConfig::default()))
            .collect::<Result<Vec<_>>>()?;
        let r = config.resolution.rings(n);
        let dmesh = triangulate_domain(patches[0].domain(), r)?;
        rings.insert(n, r);
        triangles.insert(n, dmesh.triangles.len());

        for patch in &patches {
            black_box(tessellate_serial(patch, &dmesh)?);
        }
        let mut times = vec![Vec::with_capacity(config.repetitions); patches.len()];
        for rep in 0..config.repetitions {
            for k in 0..patches.len() {
                let which = (k + rep) % patches.len();
                let start = Instant::now();
                let mesh = tessellate_serial(&patches[which], black_box(&dmesh))?;
                let elapsed = start.elapsed();
                black_box(mesh);
                times[which].push(elapsed.as_secs_f64() * 1e3);
            }
        }
        for (patch, mut t) in patches.iter().zip(times) {
            let med = median(&mut t);
            let mut dev: Vec<f64> = t.iter().map(|x| (x - med).abs()).collect();
            rows.entry(patch.scheme()).or_default().push(BenchCell {
                n,
                median_ms: med,
                mad_ms: median(&mut dev),
            });
        }
    }

    let speedup_pct = match (rows.get(&Scheme::Mp), rows.get(&Scheme::Mc)) {
        (Some(mp), Some(mc)) => mp
            .iter()
            .zip(mc)
            .map(|(a, b)| Speedup {
                n: a.n,
                pct: (a.median_ms - b.median_ms) / a.median_ms * 100.0,
            })
            .collect(),
        _ => Vec::new(),
    };

    Ok(BenchResult {
        rows,
        speedup_pct,
        meta: BenchMeta {
            resolution: config.resolution,
            repetitions: config.repetitions,
            warmup_runs: 1,
            threads: 1,
            rings,
            triangles,
        },
    })
}
