#!/usr/bin/env python3
"""
Test the HTTP service and the verification runner behind /api/verify
"""
from fastapi.testclient import TestClient

from app import app
from isoquot_config import ground_types, log_ground_types
from isoquot_errors import InvalidQuery
from verification import run_suites

client = TestClient(app)


def test_health_and_status():
    print("🧪 /health and /api/status")
    assert client.get("/health").json() == {"ok": True}
    status = client.get("/api/status").json()
    assert "a-sympl" in status["query_kinds"]
    assert "jacobian" in status["suites"]
    assert status["config"]["threads"] >= 1
    assert status["config"]["ground_types"] in ("gmpy", "flint", "python")
    print("✅ service up")


def test_ground_types_reported():
    backend = ground_types()
    assert backend in ("gmpy", "flint", "python")
    assert log_ground_types() == backend


def test_invariant_endpoint():
    print("🧪 POST /api/invariant")
    r = client.post("/api/invariant", json={"kind": "a-sympl", "N": 4, "g": 1, "d": 1, "m1": 3, "m2": 0})
    assert r.status_code == 200
    body = r.json()
    assert body["success"] is True
    assert body["value"] == "12"
    r = client.post("/api/invariant", json={"kind": "grw", "space": "sg", "n": 2, "g": 2, "d": 1})
    assert r.json()["value"] == "16"
    print("✅ invariants served")


def test_invariant_errors():
    r = client.post("/api/invariant", json={"kind": "unknown"})
    assert r.status_code == 422
    assert r.json()["error"]["error"] == "invalid_query"
    r = client.post("/api/invariant", json={"kind": "a-sympl", "N": 4, "g": 0, "d": 0, "m1": 2, "m2": 0})
    assert r.status_code == 422
    assert r.json()["error"]["details"]["vd"] == 3


def test_euler_endpoint():
    r = client.get("/api/euler", params={"N": 4, "dmax": 3, "topological": "true"})
    assert r.status_code == 200
    assert r.json()["value"] == ["4", "16", "40", "80"]


def test_verification_runner():
    print("🧪 Verification runner")
    report = run_suites("jacobian", {"jacobian": {"n_values": [2], "og_n_values": [2]}})
    assert report["passed"] is True
    assert len(report["suites"]["jacobian"]["checks"]) == 2
    try:
        run_suites("nope")
        assert False
    except InvalidQuery:
        pass
    r = client.post("/api/verify", json={"suite": "nope"})
    assert r.status_code == 422
    print("✅ runner ok")


if __name__ == "__main__":
    print("🧮 service tests")
    print("=" * 60)
    test_health_and_status()
    test_ground_types_reported()
    test_invariant_endpoint()
    test_invariant_errors()
    test_euler_endpoint()
    test_verification_runner()
    print("=" * 60)
    print("✅ All service tests passed")
