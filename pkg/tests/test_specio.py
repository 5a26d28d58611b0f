"""Spec-file loaders: round trips and location-bearing diagnostics."""

import json

import numpy as np
import pytest

from ncham.specio import (
    SpecError,
    algebra_from_dict,
    element_from_dict,
    load_json,
    state_from_dict,
    structure_from_dict,
    system_from_dict,
)


def test_builder_round_trip():
    alg = algebra_from_dict({"builder": "supermatrix:1|1"})
    assert alg.dim == 4


def test_explicit_structure_round_trip(m2):
    triplets = [
        [i, j, k, c.real, c.imag]
        for i in range(4) for j in range(4) for k in range(4)
        if abs(c := m2.structure[i, j, k]) > 1e-12
    ]
    inv = [[i, j, v.real, v.imag]
           for i in range(4) for j in range(4)
           if abs(v := m2.involution[i, j]) > 1e-12]
    spec = {"dim": 4, "labels": list(m2.labels), "parity": [0, 0, 0, 0],
            "unit": 0, "structure": triplets, "involution": inv}
    alg = algebra_from_dict(spec)
    assert np.abs(alg.structure - m2.structure).max() < 1e-12


def test_missing_field_location():
    with pytest.raises(SpecError) as err:
        algebra_from_dict({"dim": 2}, loc="algebra")
    assert "algebra." in str(err.value)


def test_index_out_of_range_location():
    spec = {"dim": 2, "parity": [0, 0], "unit": 0,
            "structure": [[0, 0, 5, 1, 0]]}
    with pytest.raises(SpecError) as err:
        algebra_from_dict(spec)
    assert "structure[0]" in str(err.value)


def test_element_by_label_and_coeffs(m2):
    a = element_from_dict(m2, {"basis": "sz", "scale": [0, 1]})
    assert abs(a.coeffs[3] - 1j) < 1e-12
    b = element_from_dict(m2, [[1, 0], [0, 0], [0, 0], [2, 0]])
    assert abs(b.coeffs[3] - 2) < 1e-12
    with pytest.raises(SpecError):
        element_from_dict(m2, {"basis": "nope"})
    with pytest.raises(SpecError):
        element_from_dict(m2, [[1, 0]])


def test_form_dispatch(m2, gr2):
    s = structure_from_dict(m2, {"form": "quantum", "hbar": 2.0})
    assert s.reality == "real"
    s2 = structure_from_dict(gr2, {"form": "fermionic"})
    assert s2.reality == "real"
    with pytest.raises(SpecError):
        structure_from_dict(m2, {"form": "mystery"})
    with pytest.raises(SpecError):
        structure_from_dict(m2, {"form": "fermionic"})  # not a Grassmann algebra


def test_quantum_imaginary_parameter(m2):
    s = structure_from_dict(m2, {"form": "quantum", "b": [0, -3.0]})
    assert s.reality == "real"


def test_system_from_dict():
    alg, struct = system_from_dict({"algebra": {"builder": "matrix:2"},
                                    "form": {"form": "canonical"}})
    assert struct.reality == "imaginary"


def test_state_specs(m2):
    up = state_from_dict(m2, {"vector": [[1, 0], [0, 0]]})
    assert abs(up.functional[m2.unit_index] - 1) < 1e-12
    rho = state_from_dict(m2, {"density": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]})
    assert rho.validate()["valid"]
    with pytest.raises(SpecError):
        state_from_dict(m2, {"wavefunction": [1, 0]})


def test_load_json_diagnostics(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(SpecError) as err:
        load_json(bad)
    assert "invalid JSON" in str(err.value)
    with pytest.raises(SpecError):
        load_json(tmp_path / "missing.json")


def test_generator_matrices_spec(m2, m2_quantum):
    from ncham.specio import generators_from_dict, cnum

    h = 0.5 * m2.basis_element(3)
    mat = m2_quantum.hamiltonian_derivation(h).matrix
    rows = [[cnum(v) for v in row] for row in mat]
    gens = generators_from_dict(m2, {"generators": [rows]})
    assert len(gens) == 1
    assert np.abs(gens[0].matrix - mat).max() < 1e-12


def test_form_to_sparse(m2_quantum):
    from ncham.specio import form_to_sparse

    sparse = form_to_sparse(m2_quantum.omega)
    assert sparse, "symplectic form has nonzero components"
    idx, vec = sparse[0]
    assert len(idx) == 2 and len(vec) == m2_quantum.algebra.dim


def test_components_form_round_trip(m2, m2_quantum):
    from ncham.specio import form_to_sparse

    spec = {"algebra": {"builder": "matrix:2"},
            "form": {"form": "components",
                     "components": form_to_sparse(m2_quantum.omega)}}
    alg, struct = system_from_dict(spec)
    got = struct.poisson_bracket(alg.basis_element(1), alg.basis_element(2))
    want = m2_quantum.poisson_bracket(m2.basis_element(1), m2.basis_element(2))
    assert np.abs(got.coeffs - want.coeffs).max() < 1e-9
