""" Tests for the analysis router."""

import pytest
from fastapi.testclient import TestClient

from hazardflow.main import app
from hazardflow.settings import Settings, get_settings
from tests.conftest import read_fixture


@pytest.fixture(scope="module")
def upward_source() -> str:
    """Model with an upward cause edge."""
    return read_fixture("upward_edge.hts")


def test_health(client: TestClient):
    """Test the health check."""
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_check(client: TestClient, corpus_source: str, upward_source: str):
    """Test that findings are returned, not raised."""
    response = client.post("/api/check", json={"source": corpus_source})
    assert response.status_code == 200
    assert response.json()["error_count"] == 0

    response = client.post("/api/check", json={"source": upward_source})
    assert response.status_code == 200
    body = response.json()
    assert body["error_count"] == 1
    assert body["diagnostics"][0]["code"] == "V120"


def test_invalid_model_is_rejected(client: TestClient, upward_source: str):
    """Test that analyses of an invalid model fail with its diagnostics."""
    response = client.post("/api/graph/dot", json={"source": upward_source})
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert detail["message"] == "model has 1 errors"
    assert [item["code"] for item in detail["diagnostics"]] == ["V120"]


def test_causes(client: TestClient, corpus_source: str):
    """Test direct, transitive and root causes."""
    response = client.post("/api/causes", params={"node": "R2"}, json={"source": corpus_source})
    assert response.status_code == 200
    assert response.json() == {"node": "R2", "causes": ["E1.8", "E1.9", "R1"]}

    response = client.post(
        "/api/causes", params={"node": "R4", "roots": True}, json={"source": corpus_source}
    )
    assert "E1.4" in response.json()["causes"]


@pytest.mark.parametrize(
    "url, params, status, code",
    [
        ("/api/causes", {"node": "E9.9"}, 404, "UNKNOWN_ID"),
        ("/api/causes", {"node": "SC1.1"}, 422, "NOT_A_NODE"),
        ("/api/map", {"macro": "E2.4"}, 422, "NOT_MACRO"),
        ("/api/trace", {"event": "E9.9"}, 404, "UNKNOWN_ID"),
    ],
)
def test_query_errors(client: TestClient, slice_source: str, url, params, status, code):
    """Test the mapping of failed queries to status codes."""
    response = client.post(url, params=params, json={"source": slice_source})
    assert response.status_code == status
    assert response.json()["detail"]["code"] == code


def test_paths_respect_configured_cap(client: TestClient, corpus_source: str):
    """Test that the path cap comes from the settings."""
    params = {"from_id": "E3.3", "to_id": "R4"}
    app.dependency_overrides[get_settings] = lambda: Settings(path_cap=1)
    try:
        response = client.post("/api/paths", params=params, json={"source": corpus_source})
    finally:
        app.dependency_overrides.clear()
    assert response.status_code == 422
    assert response.json()["detail"]["code"] == "PATH_LIMIT"

    response = client.post(
        "/api/paths", params={"from_id": "E1.6", "to_id": "R1"}, json={"source": corpus_source}
    )
    assert response.json() == {"paths": [["E1.6", "E1.2", "E1.1", "R1"]]}


def test_propagate(client: TestClient, slice_source: str):
    """Test propagation from a seed."""
    response = client.post("/api/propagate", json={"source": slice_source, "seed": ["E1.2"]})
    assert response.status_code == 200
    assert response.json() == {"active": ["E1.1", "E1.2"]}


def test_classify(client: TestClient, slice_source: str):
    """Test risk-state classification."""
    violated = ["SC1.1", "SC1.2", "SC1.3", "SC1.4", "SC1.14"]
    response = client.post("/api/classify", json={"source": slice_source, "violated": violated})
    assert response.status_code == 200
    body = response.json()
    assert body["overall"] == "MajorAccident"
    assert body["per_hazard"] == {"HS": "Safe", "HS1": "MajorAccident"}
    assert body["escalated_by"] == {"HS1": ["SC1.14"]}


def test_map_and_trace(client: TestClient, corpus_source: str):
    """Test the cross-level map and the event back-trace."""
    response = client.post("/api/map", params={"macro": "E3.1"}, json={"source": corpus_source})
    assert response.status_code == 200
    assert response.json()["meso"] == ["E2.15", "E2.16", "E2.17"]
    assert response.json()["micro"] == ["E1.5"]

    response = client.post("/api/trace", params={"event": "E2.15"}, json={"source": corpus_source})
    assert response.status_code == 200
    assert [item["id"] for item in response.json()["controllers"]] == ["C_tianjin_gov"]


def test_graph_dot_options(client: TestClient, slice_source: str):
    """Test tier filtering, highlighting and bad tier names."""
    response = client.post(
        "/api/graph/dot",
        params={"tiers": "micro,risk", "highlight": "R1", "rankdir": "LR"},
        json={"source": slice_source},
    )
    assert response.status_code == 200
    dot = response.json()["dot"]
    assert "rankdir=LR;" in dot
    assert '"E3.4"' not in dot
    assert "fillcolor" in dot

    response = client.post("/api/graph/dot", params={"tiers": "mega"}, json={"source": slice_source})
    assert response.status_code == 422


def test_artifacts(client: TestClient, slice_source: str):
    """Test the format, control, export and report endpoints."""
    response = client.post("/api/format", json={"source": slice_source})
    assert response.json() == {"source": slice_source}

    response = client.post("/api/control/dot", json={"source": slice_source})
    assert response.json()["dot"].startswith("digraph control_structure {")

    response = client.post("/api/export", json={"source": slice_source})
    assert response.json()["name"] == "micro_slice"
    assert response.json()["diagnostics"] == []

    response = client.post("/api/report", json={"source": slice_source})
    assert response.json()["markdown"].startswith("# Accident analysis: micro_slice")


def test_unparsable_model(client: TestClient):
    """Test that a model that does not parse is rejected everywhere but check."""
    source = read_fixture("unexpected_token.hts")
    assert client.post("/api/format", json={"source": source}).status_code == 422
    response = client.post("/api/check", json={"source": source})
    assert response.status_code == 200
    assert response.json()["pass_results"] == {"parse": 1}
