"""JSON spec-file loading for algebras, forms, elements, states and actions.

All complex scalars travel as [re, im] pairs.  Loaders raise SpecError with
a location string so the CLI and service can point at the offending field.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from .superalgebra import AlgebraError, Element, Superalgebra, build_algebra
from .states import State, state_from_density, state_from_vector
from .symplectic import (
    SymplecticError,
    SymplecticStructure,
    canonical_form,
    fermionic_form,
    quantum_form,
    verify_symplectic,
)
from .forms import Form, full_sder_space


class SpecError(ValueError):
    """Malformed spec input; carries a location for diagnostics."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


def _cx(pair, loc: str) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise SpecError(loc, f"expected [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def load_json(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SpecError(str(path), "file not found")
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}", f"invalid JSON ({exc.msg})")


def algebra_from_dict(spec: dict, loc: str = "algebra", tol: float = 1e-9) -> Superalgebra:
    """Builder name or explicit structure constants."""
    if not isinstance(spec, dict):
        raise SpecError(loc, "algebra spec must be an object")
    if "builder" in spec:
        try:
            return build_algebra(spec["builder"], tol=tol)
        except AlgebraError as exc:
            # a bad builder string is an input fault, not an axiom failure
            raise SpecError(f"{loc}.builder", str(exc)) from None
    for key in ("dim", "parity", "unit", "structure"):
        if key not in spec:
            raise SpecError(f"{loc}.{key}", "missing required field")
    dim = int(spec["dim"])
    labels = spec.get("labels", [f"e{i}" for i in range(dim)])
    parity = spec["parity"]
    c = np.zeros((dim, dim, dim), dtype=complex)
    for idx, row in enumerate(spec["structure"]):
        if len(row) != 5:
            raise SpecError(f"{loc}.structure[{idx}]", "expected [i, j, k, re, im]")
        i, j, k, re, im = row
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise SpecError(f"{loc}.structure[{idx}]", "index out of range")
        c[int(i), int(j), int(k)] = complex(float(re), float(im))
    S = np.zeros((dim, dim), dtype=complex)
    inv_rows = spec.get("involution")
    if inv_rows is None:
        S = np.eye(dim, dtype=complex)
    else:
        for idx, row in enumerate(inv_rows):
            if len(row) != 4:
                raise SpecError(f"{loc}.involution[{idx}]", "expected [i, j, re, im]")
            i, j, re, im = row
            S[int(i), int(j)] = complex(float(re), float(im))
    try:
        return Superalgebra(
            dim=dim, labels=labels, parity=np.asarray(parity, dtype=int),
            structure=c, unit_index=int(spec["unit"]), involution=S,
            name=spec.get("name", "custom"), tol=tol,
        )
    except AlgebraError as exc:
        raise SpecError(loc, str(exc)) from exc


def element_from_dict(alg: Superalgebra, spec, loc: str = "element") -> Element:
    """Coefficient list, or a basis label/index with an optional scale."""
    if isinstance(spec, dict) and "basis" in spec:
        basis = spec["basis"]
        if isinstance(basis, str):
            if basis not in alg.labels:
                raise SpecError(loc, f"unknown basis label {basis!r}")
            idx = alg.labels.index(basis)
        else:
            idx = int(basis)
            if not 0 <= idx < alg.dim:
                raise SpecError(loc, "basis index out of range")
        scale = _cx(spec.get("scale", 1.0), f"{loc}.scale")
        return scale * alg.basis_element(idx)
    coeffs = spec.get("coeffs") if isinstance(spec, dict) else spec
    if not isinstance(coeffs, (list, tuple)) or len(coeffs) != alg.dim:
        raise SpecError(loc, f"expected {alg.dim} coefficient pairs")
    return alg.element([_cx(p, f"{loc}[{k}]") for k, p in enumerate(coeffs)])


def structure_from_dict(
    alg: Superalgebra, spec: dict, loc: str = "form", tol: float = 1e-9
) -> SymplecticStructure:
    """Named forms (canonical/quantum/fermionic) or explicit components."""
    if not isinstance(spec, dict) or "form" not in spec:
        raise SpecError(loc, "form spec must be an object with a 'form' field")
    kind = spec["form"]
    try:
        if kind == "canonical":
            return canonical_form(alg, tol=tol)
        if kind == "quantum":
            b = spec.get("b")
            if b is not None:
                return quantum_form(alg, b=_cx(b, f"{loc}.b"), tol=tol)
            return quantum_form(alg, hbar=float(spec.get("hbar", 1.0)), tol=tol)
        if kind == "fermionic":
            n_gen = int(round(math.log2(alg.dim)))
            if 2 ** n_gen != alg.dim:
                raise SpecError(loc, "fermionic form needs a Grassmann algebra")
            return fermionic_form(alg, n_gen, tol=tol)
        if kind == "components":
            space = full_sder_space(alg)
            comps = np.zeros((space.dim, space.dim, alg.dim), dtype=complex)
            for idx, row in enumerate(spec.get("components", [])):
                if len(row) == 2 and isinstance(row[0], (list, tuple)):
                    (a, b), pairs = row      # [(a, b), coeff-pairs]
                elif len(row) == 3:
                    a, b, pairs = row        # [a, b, coeff-pairs]
                else:
                    raise SpecError(f"{loc}.components[{idx}]",
                                    "expected [a, b, coeff-pairs] or [[a, b], coeff-pairs]")
                vec = [_cx(p, f"{loc}.components[{idx}]") for p in pairs]
                comps[int(a), int(b)] = vec
            form = Form(space, 2, 0, comps)
            return verify_symplectic(space, form, tol=tol,
                                     require_real=bool(spec.get("require_real", True)))
    except (SpecError, SymplecticError):
        raise  # typed verdicts keep their reason and witness
    except ValueError as exc:
        raise SpecError(loc, str(exc))
    raise SpecError(f"{loc}.form", f"unknown form kind {kind!r}")


def system_from_dict(spec: dict, loc: str = "system", tol: float = 1e-9):
    """(algebra, structure) pair from a combined spec."""
    if "algebra" not in spec:
        raise SpecError(f"{loc}.algebra", "missing required field")
    alg = algebra_from_dict(spec["algebra"], f"{loc}.algebra", tol=tol)
    if "form" not in spec:
        raise SpecError(f"{loc}.form", "missing required field")
    struct = structure_from_dict(alg, spec["form"], f"{loc}.form", tol=tol)
    return alg, struct


def state_from_dict(alg: Superalgebra, spec: dict, loc: str = "state") -> State:
    if not isinstance(spec, dict):
        raise SpecError(loc, "state spec must be an object")
    if "vector" in spec:
        return state_from_vector(alg, [_cx(p, f"{loc}.vector") for p in spec["vector"]])
    if "density" in spec:
        rows = spec["density"]
        rho = np.array([[_cx(p, f"{loc}.density") for p in row] for row in rows])
        return state_from_density(alg, rho)
    if "functional" in spec:
        vals = [_cx(p, f"{loc}.functional") for p in spec["functional"]]
        if len(vals) != alg.dim:
            raise SpecError(f"{loc}.functional", f"expected {alg.dim} value pairs")
        return State(alg, np.array(vals))
    if spec.get("kind") == "maximally-mixed":
        from .states import maximally_mixed_state

        return maximally_mixed_state(alg)
    raise SpecError(loc, "state spec needs vector, density, functional or kind")


def lie_structure_from_dict(spec: dict, loc: str = "lie") -> np.ndarray:
    if "dim" not in spec:
        raise SpecError(f"{loc}.dim", "missing required field")
    n = int(spec["dim"])
    C = np.zeros((n, n, n), dtype=complex)
    for idx, row in enumerate(spec.get("structure", [])):
        if len(row) != 5:
            raise SpecError(f"{loc}.structure[{idx}]", "expected [a, b, c, re, im]")
        a, b, c, re, im = row
        C[int(a), int(b), int(c)] = complex(float(re), float(im))
    return C


def hamiltonians_from_dict(alg: Superalgebra, spec: dict, loc: str = "lie") -> Optional[List[Element]]:
    hams = spec.get("hamiltonians")
    if hams is None:
        return None
    return [element_from_dict(alg, h, f"{loc}.hamiltonians[{k}]") for k, h in enumerate(hams)]


def generators_from_dict(alg: Superalgebra, spec: dict, loc: str = "lie"):
    """Even generator matrices (coefficient-space endomorphisms), if given."""
    from .derivations import Superderivation

    gens = spec.get("generators")
    if gens is None:
        return None
    out = []
    for k, rows in enumerate(gens):
        mat = np.array([[_cx(p, f"{loc}.generators[{k}]") for p in row] for row in rows])
        if mat.shape != (alg.dim, alg.dim):
            raise SpecError(f"{loc}.generators[{k}]", f"expected a {alg.dim}x{alg.dim} matrix")
        out.append(Superderivation(alg, mat, 0).validate(1e-8))
    return out


def form_to_sparse(form, tol: float = 1e-12) -> list:
    """Sparse component list [(index tuple, coefficient pairs)] for reports."""
    out = []
    comps = form.comps
    p = form.degree
    for idx in np.ndindex(*comps.shape[:p]):
        vec = comps[idx]
        if np.abs(vec).max(initial=0.0) > tol:
            out.append([list(int(i) for i in idx), [cnum(c) for c in vec]])
    return out


# -- deterministic serialization ---------------------------------------------


def cnum(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def element_to_list(a: Element) -> list:
    return [cnum(c) for c in a.coeffs]


def dump_report(obj: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if fmt == "text":
        lines = []

        def walk(prefix, node):
            if isinstance(node, dict):
                for k in sorted(node):
                    walk(f"{prefix}{k}.", node[k])
            elif isinstance(node, list) and node and isinstance(node[0], dict):
                for i, item in enumerate(node):
                    walk(f"{prefix}{i}.", item)
            else:
                lines.append(f"{prefix[:-1]} = {node}")

        walk("", obj)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
