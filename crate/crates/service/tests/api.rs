use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;
use transfinite::{bundled, Patch, PatchConfig, Scheme, Uv};
use transfinite_service::{router, MeshResponse, ServiceConfig};

fn app() -> Router {
    router(ServiceConfig::default())
}

async fn send(app: Router, request: Request<Body>) -> (StatusCode, Vec<u8>) {
    let response = app.oneshot(request).await.unwrap();
    let status = response.status();
    let body = response.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, body)
}

async fn post_mesh(body: Value) -> (StatusCode, Value) {
    post_raw(body.to_string()).await
}

async fn post_raw(body: String) -> (StatusCode, Value) {
    let request = Request::post("/api/mesh")
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body))
        .unwrap();
    let (status, bytes) = send(app(), request).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[tokio::test]
async fn examples_list_the_bundled_networks() {
    let (status, body) = send(app(), Request::get("/api/examples").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    let list: Vec<Value> = serde_json::from_slice(&body).unwrap();
    assert_eq!(list.len(), 6);
    let mut ns: Vec<u64> = list.iter().map(|e| e["n"].as_u64().unwrap()).collect();
    ns.sort();
    assert_eq!(ns, vec![3, 4, 5, 6, 7, 8]);
    for entry in &list {
        let net = bundled::by_name(entry["name"].as_str().unwrap()).unwrap();
        assert_eq!(entry["n"].as_u64().unwrap() as usize, net.len());
    }
    // A second server lists the same names.
    let (_, again) = send(app(), Request::get("/api/examples").body(Body::empty()).unwrap()).await;
    assert_eq!(body, again);
}

#[tokio::test]
async fn mesh_arrays_are_consistent() {
    let (status, body) = post_mesh(json!({
        "network": {"example": "hexagon"}, "scheme": "MC", "resolution": 10,
        "channels": ["mean_curvature"]
    }))
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let mesh: MeshResponse = serde_json::from_value(body).unwrap();
    let vertex_count = 1 + 6 * 10 * 11 / 2;
    assert_eq!(mesh.vertices.len(), 3 * vertex_count);
    assert_eq!(mesh.normals.len(), mesh.vertices.len());
    assert_eq!(mesh.triangles.len(), 3 * 6 * 100);
    assert!(mesh.triangles.iter().all(|&k| (k as usize) < vertex_count));
    assert_eq!(mesh.scalars["mean_curvature"].len(), vertex_count);
    for normal in mesh.normals.chunks(3) {
        let len = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((len - 1.0).abs() < 1e-12);
    }
    for (k, v) in mesh.vertices.iter().enumerate() {
        assert!(mesh.bbox.min[k % 3] <= *v && *v <= mesh.bbox.max[k % 3]);
    }
    // The default path uses the default centre.
    assert_eq!(mesh.p0_used, mesh.p0_default);
    assert!(mesh.p0_default.is_some());
    assert!(mesh.warnings.is_empty());
}

#[tokio::test]
async fn side_based_schemes_have_no_center() {
    let (status, body) = post_mesh(json!({
        "network": {"example": "quad"}, "scheme": "GC", "resolution": 4
    }))
    .await;
    assert_eq!(status, StatusCode::OK);
    assert!(body.get("p0_default").is_none());
    assert!(body.get("p0_used").is_none());
    assert!(body.get("scalars").is_none());

    let (status, _) = post_mesh(json!({
        "network": {"example": "quad"}, "scheme": "CB", "resolution": 4, "p0_offset": [0, 0, 1]
    }))
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn identical_requests_give_identical_bodies() {
    let request = json!({"network": {"example": "pentagon"}, "scheme": "MP", "resolution": 12});
    let (_, a) = post_mesh(request.clone()).await;
    let (_, b) = post_mesh(request).await;
    assert_eq!(
        serde_json::to_vec(&without_timing(a)).unwrap(),
        serde_json::to_vec(&without_timing(b)).unwrap()
    );
}

#[tokio::test]
async fn center_offset_moves_the_center_linearly() {
    let delta = 0.75;
    let base = json!({"network": {"example": "heptagon"}, "scheme": "MC", "resolution": 8});
    let mut moved = base.clone();
    moved["p0_offset"] = json!([0.0, 0.0, delta]);
    let (_, a) = post_mesh(base).await;
    let (_, b) = post_mesh(moved).await;
    let a: MeshResponse = serde_json::from_value(a).unwrap();
    let b: MeshResponse = serde_json::from_value(b).unwrap();

    // Vertex 0 is the domain centre.
    let patch = Patch::regular(Scheme::Mc, bundled::by_name("heptagon").unwrap(), PatchConfig::default()).unwrap();
    let weight = patch.blend_at(Uv::zeros()).unwrap().center;
    assert!((b.vertices[2] - a.vertices[2] - weight * delta).abs() < 1e-12);
    assert_eq!(b.vertices[0], a.vertices[0]);
    let used = b.p0_used.unwrap();
    let default = b.p0_default.unwrap();
    assert!((used[2] - default[2] - delta).abs() < 1e-12);

    let mut both = json!({"network": {"example": "heptagon"}, "scheme": "MC", "resolution": 8});
    both["p0"] = json!([0, 0, 0]);
    both["p0_offset"] = json!([0, 0, 1]);
    assert_eq!(post_mesh(both).await.0, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn explicit_center_is_used() {
    let (status, body) = post_mesh(json!({
        "network": {"example": "octagon"}, "scheme": "MP", "resolution": 3, "p0": [1.0, 2.0, 3.0]
    }))
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["p0_used"], json!([1.0, 2.0, 3.0]));
    assert_ne!(body["p0_default"], body["p0_used"]);
}

#[tokio::test]
async fn inline_networks_are_accepted() {
    let net = bundled::network(3);
    let request = json!({"network": serde_json::from_str::<Value>(&net.to_json()).unwrap(), "scheme": "CB", "resolution": 5});
    let (status, inline) = post_mesh(request).await;
    assert_eq!(status, StatusCode::OK);
    let (_, named) = post_mesh(json!({"network": {"example": "triangle"}, "scheme": "CB", "resolution": 5})).await;
    assert_eq!(inline["vertices"], named["vertices"]);
}

#[tokio::test]
async fn error_statuses() {
    let (status, body) = post_raw("{not json".into()).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].is_string());

    let (status, _) = post_mesh(json!({"network": {"example": "hexagon"}, "scheme": "XX", "resolution": 5})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post_mesh(json!({"network": {"example": "hexagon"}, "scheme": "MC", "resolution": 0})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post_mesh(json!({
        "network": {"example": "hexagon"}, "scheme": "MC", "resolution": 5, "channels": ["gaussian"]
    }))
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let (status, _) = post_mesh(json!({"network": {"example": "dodecagon"}, "scheme": "MC", "resolution": 5})).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, body) = post_mesh(json!({"network": {"example": "hexagon"}, "scheme": "MC", "resolution": 121})).await;
    assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE);
    assert!(body["error"].as_str().unwrap().contains("120"));
    let (status, _) = post_mesh(json!({"network": {"example": "hexagon"}, "scheme": "MC", "resolution": 120})).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn open_networks_are_rejected_with_a_report() {
    let mut net: Value = serde_json::from_str(&bundled::network(4).to_json()).unwrap();
    net["sides"][1]["boundary"]["controls"][0][2] = json!(100.0);
    let (status, body) = post_mesh(json!({"network": net, "scheme": "MC", "resolution": 4})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["report"]["status"], "fail");
    assert_eq!(body["report"]["corners"].as_array().unwrap().len(), 4);

    let two_sided = json!({"name": "x", "sides": net["sides"].as_array().unwrap()[..2]});
    let (status, _) = post_mesh(json!({"network": two_sided, "scheme": "MC", "resolution": 4})).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn twist_mismatch_is_a_warning() {
    let mut net: Value = serde_json::from_str(&bundled::network(5).to_json()).unwrap();
    // Bending an inner cross-derivative control point changes the end slopes.
    net["sides"][2]["cross"]["controls"][1][2] = json!(40.0);
    let (status, body) = post_mesh(json!({"network": net, "scheme": "MP", "resolution": 4})).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["warnings"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn cors_allows_local_dev_origins() {
    let request = |origin: &str| {
        Request::builder()
            .method("OPTIONS")
            .uri("/api/mesh")
            .header(header::ORIGIN, origin)
            .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
            .body(Body::empty())
            .unwrap()
    };
    let response = app().oneshot(request("http://localhost:5173")).await.unwrap();
    assert_eq!(
        response.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN],
        "http://localhost:5173"
    );
    let response = app().oneshot(request("http://example.com")).await.unwrap();
    assert!(response.headers().get(header::ACCESS_CONTROL_ALLOW_ORIGIN).is_none());
}

#[tokio::test]
async fn concurrent_requests() {
    let app = app();
    let tasks: Vec<_> = (3..=8)
        .map(|n| {
            let app = app.clone();
            tokio::spawn(async move {
                let body = json!({"network": {"example": bundled::name(n)}, "scheme": "MC", "resolution": 6});
                let request = Request::post("/api/mesh")
                    .header(header::CONTENT_TYPE, "application/json")
                    .body(Body::from(body.to_string()))
                    .unwrap();
                let (status, bytes) = send(app, request).await;
                assert_eq!(status, StatusCode::OK);
                let mesh: MeshResponse = serde_json::from_slice(&bytes).unwrap();
                assert_eq!(mesh.n, n);
            })
        })
        .collect();
    for t in tasks {
        t.await.unwrap();
    }
}

#[tokio::test]
async fn examples_from_a_directory() {
    let dir = std::env::temp_dir().join(format!("transfinite-service-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    bundled::network(4).save(dir.join("mine.json")).unwrap();
    std::fs::write(dir.join("notes.txt"), "ignored").unwrap();
    let config = ServiceConfig::from_dir(&dir).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    let (_, body) = send(router(config), Request::get("/api/examples").body(Body::empty()).unwrap()).await;
    let list: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(list, json!([{"name": "mine", "n": 4}]));
}
