import math

import pytest
from fastapi.testclient import TestClient

from app.config import settings
from app.main import app


@pytest.fixture
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_analysis_defaults(client):
    response = client.post("/api/v1/analysis", json={})
    assert response.status_code == 200
    body = response.json()
    assert 0.0 <= body["coverage_comm"] <= 1.0
    assert body["ee"] == pytest.approx(body["ee_comm"] + body["ee_radar"], rel=1e-12)
    assert body["quad_order"] == 20


def test_analysis_rejects_empty_network(client):
    response = client.post("/api/v1/analysis", json={"network": {"lambda_b": 0.0}})
    assert response.status_code == 400


def test_analysis_rejects_invalid_topology(client):
    response = client.post("/api/v1/analysis", json={"network": {"n_tx": 9, "n_rx": 8}})
    assert response.status_code == 422


def test_optimizer_comm_only(client):
    response = client.post("/api/v1/optimizer", json={"mode": "comm_only"})
    assert response.status_code == 200
    body = response.json()
    assert body["result"]["method"] == "closed_form_comm"
    assert body["cell_radius_m"] == pytest.approx(1.0 / math.sqrt(math.pi * body["result"]["lambda_star"]))


def test_optimizer_rejects_start_outside_bracket(client):
    response = client.post("/api/v1/optimizer", json={"mode": "isac", "lambda0": 1.0})
    assert response.status_code == 400


def test_simulation_is_seeded(client):
    payload = {"trials": 200, "seed": 5}
    first = client.post("/api/v1/simulation", json=payload)
    second = client.post("/api/v1/simulation", json=payload)
    assert first.status_code == 200
    assert first.json() == second.json()
    assert first.json()["ee"]["trials"] == 200


def test_simulation_trial_cap(client):
    response = client.post("/api/v1/simulation", json={"trials": settings.API_MAX_TRIALS + 1})
    assert response.status_code == 400
