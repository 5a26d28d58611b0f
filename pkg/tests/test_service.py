"""HTTP surface: every endpoint exercised through the test client."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from ncham.service.app import app

client = TestClient(app)

M2_QUANTUM = {"algebra": {"builder": "matrix:2"}, "form": {"form": "quantum", "hbar": 1.0}}
M3_QUANTUM = {"algebra": {"builder": "matrix:3"}, "form": {"form": "quantum", "hbar": 1.0}}
GR2_FERMI = {"algebra": {"builder": "grassmann:2"}, "form": {"form": "fermionic"}}


def test_healthz():
    assert client.get("/healthz").json() == {"status": "ok"}


def test_verify_algebra_builder():
    r = client.post("/verify-algebra", json={"algebra": {"builder": "matrix:2"}})
    assert r.status_code == 200
    body = r.json()
    assert body["valid"] and body["dim"] == 4 and body["center_dimension"] == 1


def test_verify_algebra_explicit_spec():
    spec = {
        "dim": 2, "labels": ["I", "e"], "parity": [0, 0], "unit": 0,
        "structure": [[0, 0, 0, 1, 0], [0, 1, 1, 1, 0], [1, 0, 1, 1, 0], [1, 1, 1, 1, 0]],
        "involution": [[0, 0, 1, 0], [1, 1, 1, 0]],
    }
    r = client.post("/verify-algebra", json={"algebra": spec})
    assert r.status_code == 200
    assert r.json()["valid"]


def test_verify_algebra_broken_axioms():
    spec = {
        "dim": 2, "labels": ["I", "e"], "parity": [0, 0], "unit": 0,
        # e*e = e but I*e = 0: unit law broken
        "structure": [[0, 0, 0, 1, 0], [1, 1, 1, 1, 0]],
    }
    r = client.post("/verify-algebra", json={"algebra": spec})
    assert r.status_code == 200
    assert not r.json()["valid"]


def test_sder_basis_endpoint():
    r = client.post("/sder-basis", json={"algebra": {"builder": "matrix:3"}})
    body = r.json()
    assert (body["dim_even"], body["dim_odd"]) == (8, 0)
    assert body["all_inner"]


def test_check_symplectic_valid():
    r = client.post("/check-symplectic", json={"system": M2_QUANTUM})
    body = r.json()
    assert body["valid"] and body["reality"] == "real"


def test_check_symplectic_fermionic():
    r = client.post("/check-symplectic", json={"system": GR2_FERMI})
    body = r.json()
    assert body["valid"] and body["exact"]


def test_pb_endpoint():
    r = client.post("/pb", json={"system": M2_QUANTUM,
                                 "a": {"basis": "sx"}, "b": {"basis": "sy"}})
    body = r.json()
    coeffs = np.array([c[0] + 1j * c[1] for c in body["coeffs"]])
    assert abs(coeffs[3] + 2.0) < 1e-9  # {sx, sy}_Q = -2 sz
    assert np.abs(coeffs[:3]).max() < 1e-9


def test_evolve_endpoint_expectations():
    req = {
        "system": M2_QUANTUM,
        "hamiltonian": {"basis": "sz", "scale": [0.5, 0]},
        "observable": {"basis": "sx"},
        "state": {"vector": [[1, 0], [1, 0]]},  # +x eigenstate
        "t_max": np.pi, "steps": 3,
    }
    r = client.post("/evolve", json=req)
    body = r.json()
    assert body["columns"] == ["t", "re_expectation", "im_expectation"]
    # <sx>(t) = cos(t) in the +x state under H = sz/2
    values = [row[1] for row in body["rows"]]
    assert abs(values[0] - 1.0) < 1e-9
    assert abs(values[2] + 1.0) < 1e-9


def test_tensor_check_endpoint_matched():
    r = client.post("/tensor-check", json={"system1": M2_QUANTUM, "system2": M3_QUANTUM})
    body = r.json()
    assert body["verdict"] == "quantum"
    assert abs(body["lam"][1] - 1.0) < 1e-8
    assert abs(body["planck_magnitude"] - 1.0) < 1e-8


def test_tensor_check_endpoint_degenerate():
    r = client.post("/tensor-check", json={"system1": GR2_FERMI, "system2": M2_QUANTUM})
    body = r.json()
    assert body["verdict"] == "degenerate"
    assert body["witness"][0] == "no-solution"


def test_action_check_endpoint():
    lie = {
        "dim": 3,
        "structure": [[0, 1, 2, -1, 0], [1, 0, 2, 1, 0],
                      [1, 2, 0, -1, 0], [2, 1, 0, 1, 0],
                      [2, 0, 1, -1, 0], [0, 2, 1, 1, 0]],
        "hamiltonians": [{"basis": "sx", "scale": [0.5, 0]},
                          {"basis": "sy", "scale": [0.5, 0]},
                          {"basis": "sz", "scale": [0.5, 0]}],
    }
    r = client.post("/action-check", json={"system": M2_QUANTUM, "lie": lie,
                                           "state": {"vector": [[1, 0], [0, 0]]}})
    body = r.json()
    assert body["poisson"]
    assert body["homomorphism_residual"] < 1e-9
    assert abs(body["momentum_map"][2][0] - 0.5) < 1e-9


def test_h2_endpoint():
    r = client.post("/h2", json={"lie": {"dim": 2, "structure": []}})
    body = r.json()
    assert body["dim"] == 1
    assert abs(abs(body["representatives"][0][0][1]) - 1.0) < 1e-12


def test_noether_endpoint():
    req = {
        "system": M2_QUANTUM,
        "hamiltonian_powers": [{"basis": "sz"}],
        "generator": {"basis": "sz"},
        "degree_bound": 4,
    }
    r = client.post("/noether-check", json=req)
    body = r.json()
    assert body["closed"] and body["exact"] and body["conserved"]
    assert body["conservation_residual"] < 1e-8


def test_noether_endpoint_non_symmetry():
    req = {
        "system": M2_QUANTUM,
        "hamiltonian_powers": [{"basis": "sz"}],
        "generator": {"basis": "sx"},
        "degree_bound": 4,
    }
    body = client.post("/noether-check", json=req).json()
    assert not body["conserved"]


def test_spec_error_returns_422():
    r = client.post("/verify-algebra", json={"algebra": {"builder": "octonion:3"}})
    assert r.status_code == 422
    assert "builder" in r.json()["location"]


def test_malformed_request_rejected():
    r = client.post("/pb", json={"system": M2_QUANTUM})
    assert r.status_code == 422


def test_suite_endpoint_small():
    r = client.post("/suite", json={"seed": 7, "calculus_instances": 2,
                                    "poisson_instances": 4})
    body = r.json()
    assert body["passed"]
    assert len(body["checks"]) > 30


def test_action_check_with_generator_matrices(m2, m2_quantum):
    from ncham.specio import cnum

    mats = []
    for i in (1, 2, 3):
        mat = m2_quantum.hamiltonian_derivation(0.5 * m2.basis_element(i)).matrix
        mats.append([[cnum(v) for v in row] for row in mat])
    lie = {
        "dim": 3,
        "structure": [[0, 1, 2, -1, 0], [1, 0, 2, 1, 0],
                      [1, 2, 0, -1, 0], [2, 1, 0, 1, 0],
                      [2, 0, 1, -1, 0], [0, 2, 1, 1, 0]],
        "generators": mats,
    }
    r = client.post("/action-check", json={"system": M2_QUANTUM, "lie": lie})
    assert r.status_code == 200
    body = r.json()
    assert body["hamiltonian"] and body["poisson"]


def test_check_symplectic_reports_failure_with_witness():
    # a closed, real, but rank-deficient 2-form: only one off-diagonal block
    import numpy as np
    from ncham import matrix_algebra, quantum_form
    from ncham.specio import form_to_sparse

    m2 = matrix_algebra(2)
    sq = quantum_form(m2, hbar=1.0)
    comps = sq.omega.comps.copy()
    comps[2, :, :] = 0.0
    comps[:, 2, :] = 0.0  # kill one direction: degenerate
    sparse = [[a, b, [[v.real, v.imag] for v in comps[a, b]]]
              for a in range(3) for b in range(3)]
    body = {"system": {"algebra": {"builder": "matrix:2"},
                       "form": {"form": "components", "components": sparse}}}
    r = client.post("/check-symplectic", json=body)
    assert r.status_code == 200
    out = r.json()
    assert not out["valid"]
    assert out["reason"] == "degenerate"
