import warnings

import numpy as np
import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from rieszlab.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


class TestHealthAndIndex:
    def test_health(self, client):
        data = client.get("/health").json()
        assert data["status"] == "ok"

    def test_scenario_index(self, client):
        infos = client.get("/scenarios").json()
        assert len(infos) == 8
        assert all({"name", "description", "defaults"} <= set(i) for i in infos)


class TestValidate:
    def test_generator(self, client):
        resp = client.post("/sequences/validate", json={
            "generator": {"kind": "perturbed", "delta": 0.3, "half": 20},
        })
        data = resp.json()
        assert resp.status_code == 200
        assert data["delta"] == pytest.approx(0.4)
        assert data["window"] == [-20, 20]
        assert "index,value" in data["nodes_csv"]

    def test_inline_nodes(self, client):
        resp = client.post("/sequences/validate", json={
            "lambdas": [3.0, 1.0, 2.0], "nus": [1.0, 1.0, 1.0],
        })
        assert resp.json()["was_sorted"] is True

    def test_separation_violation_maps_to_422(self, client):
        resp = client.post("/sequences/validate", json={
            "lambdas": [0.0, 0.0], "nus": [1.0, 1.0],
        })
        assert resp.status_code == 422
        assert resp.json()["error"] == "SeparationViolation"


class TestClarkEval:
    def test_lattice_point(self, client):
        resp = client.post("/inner/clark/eval", json={
            "generator": {"kind": "lattice", "half": 100},
            "compensate": True,
            "points": [{"re": 0.25, "im": 0.5}],
        })
        data = resp.json()
        v = data["values"][0]
        ref = np.exp(2j * np.pi * (0.25 + 0.5j))
        assert complex(v["re"], v["im"]) == pytest.approx(ref, abs=1e-10)
        assert data["max_node_deviation"] == 0.0
        assert data["herglotz_positive"] is True
        assert '"origin": "clark"' in data["spec_json"]


class TestGramRiesz:
    def test_lattice_gram(self, client):
        resp = client.post("/kernels/gram", json={
            "generator": {"kind": "lattice", "half": 8, "nu": 1.0},
        })
        data = resp.json()
        assert data["max_offdiagonal"] < 1e-12
        assert data["lambda_min"] == pytest.approx(1.0, abs=1e-10)

    def test_quadrature_check_window_limit(self, client):
        resp = client.post("/kernels/gram", json={
            "generator": {"kind": "lattice", "half": 8, "nu": 1.0},
            "quadrature_check": True,
        })
        assert resp.status_code == 422
        assert resp.json()["error"] == "ConfigError"

    def test_riesz_nested_windows(self, client):
        resp = client.post("/basis/riesz", json={
            "generator": {"kind": "perturbed", "delta": 0.15, "half": 50},
            "window_sizes": [20, 40, 80],
        })
        data = resp.json()
        lower = data["lower"]
        assert all(b <= a + 1e-12 for a, b in zip(lower, lower[1:]))
        assert "N,c,C" in data["bounds_csv"]


class TestBasisEndpoints:
    def test_aob(self, client):
        resp = client.post("/basis/aob", json={
            "generator": {"kind": "decaying", "delta": 0.3, "half": 30},
            "tail_starts": [0, 5, 10],
        })
        data = resp.json()
        assert data["verdict"]["aob_proxy"] is True

    def test_angle(self, client):
        resp = client.post("/basis/angle", json={
            "generator": {"kind": "lattice", "half": 10},
            "theta": {"kind": "clark", "sequence": {"kind": "lattice", "half": 10}},
            "tail_starts": [3, 6],
            "resolution": 8192,
        })
        data = resp.json()
        assert len(data["cosines"]) == 2
        assert all(0.0 <= c <= 1.0 + 1e-8 for c in data["cosines"])


class TestToeplitzEndpoint:
    def test_cayley_power_detector(self, client):
        resp = client.post("/toeplitz/analyze", json={
            "symbol": {"kind": "cayley_power", "k": 2, "resolution": 256},
            "sizes": [8, 16, 32],
            "detector": "invertibility",
        })
        data = resp.json()
        assert data["verdict"] == "not_invertible"
        assert data["winding"] == 2
        assert "N,k,sigma_k" in data["spectrum_csv"]

    def test_spectrum_detector(self, client):
        resp = client.post("/toeplitz/analyze", json={
            "symbol": {"kind": "synthesized", "n": 0, "c": 0.0,
                       "a": {"kind": "poisson", "height": 0.5},
                       "b": {"kind": "zero"}},
            "sizes": [16, 32, 64],
            "detector": "spectrum",
        })
        data = resp.json()
        assert data["verdict"] is None
        assert data["evidence"]["hankel_compact_flag"] is True


class TestHilbertEndpoint:
    def test_poisson_pair(self, client):
        resp = client.post("/hardy/hilbert", json={
            "function": {"kind": "poisson"},
            "grid_min": -2.0, "grid_max": 2.0, "n_grid": 5,
        })
        data = resp.json()
        expected = [x / (1 + x * x) for x in data["grid"]]
        assert np.allclose(data["values"], expected, atol=1e-8)
        assert data["anchor_constant_check"] < 1e-8


class TestScenarioEndpoints:
    def test_unknown_scenario_404(self, client):
        resp = client.post("/scenarios/nope/run", json={})
        assert resp.status_code == 404

    def test_unknown_param_maps_to_422(self, client):
        resp = client.post("/scenarios/lattice-gram/run", json={"params": {"zzz": 1}})
        assert resp.status_code == 422
        assert resp.json()["error"] == "ConfigError"

    def test_run_returns_files(self, client):
        resp = client.post("/scenarios/lattice-gram/run", json={"params": {"n_nodes": 16}})
        data = resp.json()
        assert data["passed"] is True
        assert "report.json" in data["files"]
        assert data["report"]["version"]
