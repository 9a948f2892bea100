use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::State;
use axum::Json;
use serde::{Deserialize, Serialize};
use transfinite::tessellation::{mean_curvature, MEAN_CURVATURE};
use transfinite::{
    tessellate, triangulate_domain, validate_network, CenterControl, CurveNetwork, Patch, PatchConfig,
    Point3, Scheme, Tolerances, ValidationStatus, Vec3,
};

use crate::error::ApiError;
use crate::AppState;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleEntry {
    pub name: String,
    pub n: usize,
}

/// A network given inline or by example name.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum NetworkSource {
    Example { example: String },
    Inline(CurveNetwork),
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshRequest {
    pub network: NetworkSource,
    pub scheme: Scheme,
    pub resolution: usize,
    #[serde(default)]
    pub p0: Option<[f64; 3]>,
    #[serde(default)]
    pub p0_offset: Option<[f64; 3]>,
    #[serde(default)]
    pub channels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bbox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshResponse {
    pub scheme: Scheme,
    pub n: usize,
    pub resolution: usize,
    /// xyz triples.
    pub vertices: Vec<f64>,
    /// Counterclockwise index triples.
    pub triangles: Vec<u32>,
    /// Area-weighted unit vertex normals, xyz triples.
    pub normals: Vec<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scalars: BTreeMap<String, Vec<f64>>,
    /// Default and applied central control point, MP and MC only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0_default: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0_used: Option<[f64; 3]>,
    pub bbox: Bbox,
    /// Corner twist mismatches; the surface is still produced.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub timing_ms: f64,
}

pub(crate) async fn examples(State(state): State<Arc<AppState>>) -> Json<Vec<ExampleEntry>> {
    Json(
        state
            .config
            .examples
            .iter()
            .map(|(name, net)| ExampleEntry {
                name: name.clone(),
                n: net.len(),
            })
            .collect(),
    )
}

pub(crate) async fn mesh(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<Json<MeshResponse>, ApiError> {
    let request: MeshRequest =
        serde_json::from_slice(&body).map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let network = match request.network {
        NetworkSource::Example { ref example } => state
            .config
            .examples
            .get(example)
            .cloned()
            .ok_or_else(|| ApiError::UnknownExample(example.clone()))?,
        NetworkSource::Inline(ref net) => net.clone(),
    };
    let cap = state.config.resolution_cap;
    tokio::task::spawn_blocking(move || build_mesh(&request, network, cap))
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
        .map(Json)
}

fn center_control(request: &MeshRequest) -> Result<CenterControl, ApiError> {
    match (request.p0, request.p0_offset) {
        (Some(_), Some(_)) => Err(ApiError::BadRequest("give p0 or p0_offset, not both".into())),
        (Some(p), None) => Ok(CenterControl::Override(Point3::from(p))),
        (None, Some(d)) => Ok(CenterControl::Offset(Vec3::from(d))),
        (None, None) => Ok(CenterControl::Default),
    }
}

fn triple(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

/// Validates the request and tessellates. Runs on the blocking pool.
pub(crate) fn build_mesh(request: &MeshRequest, network: CurveNetwork, cap: usize) -> Result<MeshResponse, ApiError> {
    let start = Instant::now();
    if request.resolution == 0 {
        return Err(ApiError::BadRequest("resolution must be at least 1".into()));
    }
    if request.resolution > cap {
        return Err(ApiError::TooLarge {
            resolution: request.resolution,
            cap,
        });
    }
    if let Some(c) = request.channels.iter().find(|c| *c != MEAN_CURVATURE) {
        return Err(ApiError::BadRequest(format!("unknown channel {c:?}")));
    }
    let center = center_control(request)?;
    if center != CenterControl::Default && !request.scheme.has_center() {
        return Err(ApiError::BadRequest(format!(
            "scheme {} has no central control point",
            request.scheme
        )));
    }

    let report = validate_network(&network, Tolerances::default())
        .map_err(|e| ApiError::Structure(e.to_string()))?;
    if report.status == ValidationStatus::Fail {
        return Err(ApiError::Invalid(Box::new(report)));
    }
    let warnings = if report.status == ValidationStatus::PassWithWarning {
        vec![format!(
            "cross-derivatives are not twist-compatible (largest twist gap {:.3e})",
            report.max_twist_gap()
        )]
    } else {
        Vec::new()
    };

    let n = network.len();
    let patch = Patch::regular(request.scheme, network, PatchConfig { center })
        .map_err(|e| ApiError::BadRequest(e.to_string()))?;
    let dmesh =
        triangulate_domain(patch.domain(), request.resolution).map_err(|e| ApiError::Internal(e.to_string()))?;
    let mut surface = tessellate(&patch, &dmesh).map_err(|e| ApiError::Internal(e.to_string()))?;
    if !request.channels.is_empty() {
        surface = mean_curvature(&surface);
    }
    let (lo, hi) = surface.bounding_box();
    Ok(MeshResponse {
        scheme: request.scheme,
        n,
        resolution: request.resolution,
        vertices: surface.vertices.iter().flat_map(triple).collect(),
        triangles: surface.triangles.iter().flatten().copied().collect(),
        normals: surface.vertex_normals().iter().flat_map(triple).collect(),
        scalars: surface.scalars,
        p0_default: patch.default_center().as_ref().map(triple),
        p0_used: patch.center().as_ref().map(triple),
        bbox: Bbox {
            min: triple(&lo),
            max: triple(&hi),
        },
        warnings,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
