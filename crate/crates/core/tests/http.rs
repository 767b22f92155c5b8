mod common;

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use common::*;
use supergraph::engine::Engine;
use supergraph::server::router;
use supergraph::tree::load_tree;

struct Api {
    app: Router,
    _dir: tempfile::TempDir,
}

impl Api {
    fn fixture() -> Api {
        let dir = tempfile::tempdir().unwrap();
        fixture_tree(dir.path());
        let engine = Engine::new(load_tree(dir.path(), 2).unwrap());
        Api {
            app: router(Arc::new(engine)),
            _dir: dir,
        }
    }

    async fn call(&self, method: Method, uri: &str) -> (StatusCode, Value) {
        let req = Request::builder().method(method).uri(uri).body(Body::empty()).unwrap();
        let resp = self.app.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        assert_eq!(resp.headers()["content-type"], "application/json");
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        (status, serde_json::from_slice(&bytes).unwrap())
    }

    async fn get(&self, uri: &str) -> (StatusCode, Value) {
        self.call(Method::GET, uri).await
    }

    async fn post(&self, uri: &str) -> (StatusCode, Value) {
        self.call(Method::POST, uri).await
    }
}

fn error_code(v: &Value) -> &str {
    v["error"]["code"].as_str().unwrap()
}

#[tokio::test]
async fn tree_lists_every_node() {
    let api = Api::fixture();
    let (s, v) = api.get("/api/tree").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["root"], 0);
    assert_eq!(v["node_count"], 8);
    assert_eq!(v["edge_count"], 8);
    assert_eq!(v["leaf_count"], 4);
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 7);
    assert_eq!(nodes[1]["children"], serde_json::json!([3, 4]));
    assert_eq!(nodes[3]["kind"], "leaf");
}

#[tokio::test]
async fn supernode_and_closure() {
    let api = Api::fixture();
    let (s, v) = api.get("/api/supernode/1").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["open_nodes"], serde_json::json!([4]));
    assert_eq!(v["superedges"][0]["weight"], 2);

    let (_, leaf) = api.get("/api/supernode/6").await;
    assert_eq!(leaf["members"], serde_json::json!([7, 8]));
    assert_eq!(leaf["loaded"], false);

    let (s, v) = api.get("/api/supernode/2/closure").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["nodes"], serde_json::json!([5, 6, 7, 8]));
    assert_eq!(v["size"], 4);
}

#[tokio::test]
async fn connectivity_and_external() {
    let api = Api::fixture();
    let (s, v) = api.get("/api/connectivity?a=3&b=4").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["weight"], 2);
    assert_eq!(v["meeting_point"]["common_parent"], 1);
    let edges: Vec<(u64, u64)> = v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["source"].as_u64().unwrap(), e["target"].as_u64().unwrap()))
        .collect();
    assert_eq!(edges, vec![(2, 3), (2, 4)]);

    let (_, v) = api.get("/api/connectivity?a=3&b=6").await;
    assert_eq!(v["weight"], 0);
    assert_eq!(v["candidate_pairs"], 1);

    let (s, v) = api.get("/api/node/4/external").await;
    assert_eq!(s, StatusCode::OK);
    let ns: Vec<u64> = v["entries"].as_array().unwrap().iter().map(|e| e["neighbor"].as_u64().unwrap()).collect();
    assert_eq!(ns, vec![2, 5]);
}

#[tokio::test]
async fn expand_layout_metrics_collapse() {
    let api = Api::fixture();
    let (s, v) = api.get("/api/leaf/4/layout").await;
    assert_eq!((s, error_code(&v)), (StatusCode::CONFLICT, "leaf_not_loaded"));

    let (s, v) = api.post("/api/leaf/4/expand").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["loaded"], true);
    assert_eq!(v["members"], 2);

    let (s, v) = api.get("/api/leaf/4/layout?seed=2&iterations=50").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["positions"].as_object().unwrap().len(), 2);
    assert_eq!(v["seed"], 2);

    let (s, v) = api.get("/api/leaf/4/metrics").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["internal_edges"], 1);
    assert_eq!(v["component_count"], 1);
    let degrees = v["degrees"].as_array().unwrap();
    assert_eq!(degrees[0]["node"], 3);
    assert_eq!(degrees[0]["degree"], 2);
    assert_eq!(degrees[1]["external"], 2);

    let (s, v) = api.post("/api/leaf/4/collapse").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["loaded"], false);
}

#[tokio::test]
async fn hierarchy_layout_and_search() {
    let api = Api::fixture();
    let (s, v) = api.get("/api/layout/hierarchy").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["circles"].as_object().unwrap().len(), 7);
    assert_eq!(v["circles"]["0"]["r"], 0.5);

    let (s, v) = api.get("/api/search?label=zzz").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v, serde_json::json!([]));
}

#[tokio::test]
async fn search_by_label_returns_paths() {
    let dir = tempfile::tempdir().unwrap();
    let mut b = supergraph::graph::GraphBuilder::new();
    for (a, c) in [(1, 2), (2, 3), (3, 4), (4, 1)] {
        b.add_edge(supergraph::graph::NodeId(a), supergraph::graph::NodeId(c), 1.0).unwrap();
    }
    b.set_label(supergraph::graph::NodeId(3), "Grace Hopper");
    build(&b.build(), 2, 2, 1, dir.path());
    let api = Api {
        app: router(Arc::new(Engine::open(dir.path(), 2).unwrap())),
        _dir: dir,
    };
    let (s, v) = api.get("/api/search?label=hopper").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v[0]["node"], 3);
    assert_eq!(v[0]["label"], "Grace Hopper");
    assert_eq!(v[0]["path"][0], 0);
}

#[tokio::test]
async fn error_statuses() {
    let api = Api::fixture();
    let cases = [
        (Method::GET, "/api/supernode/99", StatusCode::NOT_FOUND, "unknown_supernode"),
        (Method::GET, "/api/supernode/x", StatusCode::UNPROCESSABLE_ENTITY, "malformed"),
        (Method::GET, "/api/node/99/external", StatusCode::NOT_FOUND, "unknown_node"),
        (Method::GET, "/api/connectivity?a=1&b=3", StatusCode::CONFLICT, "nested_pair"),
        (Method::GET, "/api/connectivity?a=3&b=3", StatusCode::CONFLICT, "same_node"),
        (Method::GET, "/api/connectivity?a=3", StatusCode::UNPROCESSABLE_ENTITY, "malformed"),
        (Method::GET, "/api/connectivity?a=3&b=-1", StatusCode::UNPROCESSABLE_ENTITY, "malformed"),
        (Method::GET, "/api/search", StatusCode::UNPROCESSABLE_ENTITY, "malformed"),
        (Method::POST, "/api/leaf/1/expand", StatusCode::UNPROCESSABLE_ENTITY, "not_a_leaf"),
        (Method::POST, "/api/leaf/42/expand", StatusCode::NOT_FOUND, "unknown_supernode"),
        (Method::GET, "/api/leaf/3/metrics", StatusCode::CONFLICT, "leaf_not_loaded"),
        (Method::GET, "/api/nowhere", StatusCode::NOT_FOUND, "no_route"),
    ];
    for (method, uri, status, code) in cases {
        let (s, v) = api.call(method, uri).await;
        assert_eq!((s, error_code(&v)), (status, code), "{uri}");
        assert!(!v["error"]["message"].as_str().unwrap().is_empty());
    }
}

#[tokio::test]
async fn engine_and_api_agree_on_every_pair() {
    let g = random_graph(80, 0.08, 21);
    let dir = tempfile::tempdir().unwrap();
    build(&g, 3, 3, 21, dir.path());
    let engine = Arc::new(Engine::open(dir.path(), 4).unwrap());
    let api = Api {
        app: router(engine.clone()),
        _dir: dir,
    };
    let tree = engine.tree();
    for (a, b) in disjoint_pairs(tree).into_iter().take(60) {
        let (s, v) = api.get(&format!("/api/connectivity?a={a}&b={b}")).await;
        assert_eq!(s, StatusCode::OK);
        let direct = serde_json::to_value(engine.connectivity(a, b).unwrap()).unwrap();
        assert_eq!(v, direct);
    }
}
