"""Acceptance battery: one test per criterion, each printing a verdict line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
pass/fail lines and residuals.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from ncham import (
    TensorContext,
    build_tensor,
    canonical_form,
    canonical_two_form,
    exterior_derivative,
    fermionic_form,
    form_star,
    grassmann_algebra,
    hamiltonian_ansatz,
    inner,
    lie_derivative,
    matrix_algebra,
    quantum_form,
    sder_basis,
    sder_dimensions,
    supermatrix_algebra,
    tensor_poisson_bracket,
    theorem2_verdict,
)
from ncham.config import RunConfig
from ncham.suite import (
    calculus_algebras,
    calculus_battery,
    dynamics_battery,
    lie_battery,
    noether_battery,
    poisson_battery,
)
from ncham.tensor import ansatz_leibniz_residual

TOL = 1e-9


def _report(name: str, ok: bool, detail: str = ""):
    print(f"{'PASS' if ok else 'FAIL'} {name}" + (f"  [{detail}]" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_criterion_1_derivation_dimensions():
    t0 = time.monotonic()
    d2 = sum(sder_dimensions(sder_basis(matrix_algebra(2))))
    d3 = sum(sder_dimensions(sder_basis(matrix_algebra(3))))
    t23 = build_tensor(matrix_algebra(2), matrix_algebra(3))
    d23 = sum(sder_dimensions(sder_basis(t23.product)))
    elapsed = time.monotonic() - t0
    ok = (d2, d3, d23) == (3, 8, 35) and elapsed < 5.0
    _report("criterion 1: derivation dimensions 3/8/35",
            ok, f"got {(d2, d3, d23)}, {elapsed:.2f}s")


def test_criterion_2_calculus_identities():
    rng = np.random.default_rng(42)
    worst_all = 0.0
    details = []
    for label, space in calculus_algebras():
        worst = calculus_battery(space, rng, instances=50)
        worst_all = max(worst_all, max(worst.values()))
        details.append(f"{label}:{max(worst.values()):.1e}")
    _report("criterion 2: calculus identities on 50 instances x 4 algebras",
            worst_all <= TOL, ", ".join(details))


@pytest.mark.parametrize("n", [2, 3])
def test_criterion_3_canonical_structure(n):
    alg = matrix_algebra(n)
    space, wc = canonical_two_form(alg)
    closed = exterior_derivative(wc).norm()
    imag = (form_star(wc) + wc).norm()
    invariant = max(lie_derivative(X, wc).norm() for X in space.basis)
    struct = canonical_form(alg)
    rng = np.random.default_rng(n)
    inner_res = 0.0
    for _ in range(10):
        a = alg.element(rng.normal(size=alg.dim) + 1j * rng.normal(size=alg.dim))
        ya = struct.hamiltonian_derivation(a)
        inner_res = max(inner_res, float(np.abs(ya.matrix - inner(a, 0).matrix).max()))
    worst = max(closed, imag, invariant, inner_res)
    _report(f"criterion 3: canonical structure on M{n}", worst <= TOL,
            f"closed {closed:.1e}, imaginary {imag:.1e}, invariant {invariant:.1e}, "
            f"solution-is-inner {inner_res:.1e}")


def test_criterion_4_poisson_structure():
    rng = np.random.default_rng(1042)
    worst = 0.0
    details = []
    for label, struct in [
        ("M2-quantum", quantum_form(matrix_algebra(2), hbar=1.0)),
        ("Gr2-fermionic", fermionic_form(grassmann_algebra(2), 2)),
    ]:
        res = poisson_battery(struct, rng, instances=100)
        worst = max(worst, max(res.values()))
        details.append(f"{label}: jacobi {res['super_jacobi']:.1e}, "
                       f"hom {res['homomorphism']:.1e}")
    _report("criterion 4: bracket laws on 100 random triples/pairs per algebra",
            worst <= TOL, "; ".join(details))


def test_criterion_5_tensor_battery():
    t0 = time.monotonic()
    m2 = matrix_algebra(2)
    g2 = grassmann_algebra(2)
    sq = quantum_form(m2, hbar=1.0)
    t22 = build_tensor(m2, m2)

    ctx = TensorContext(t22, sq, sq)
    v = theorem2_verdict(t22, sq, sq, ctx)
    ok_a = v.kind == "quantum" and abs(v.lam - 1j) <= 1e-8
    agree = 0.0
    for i in range(16):
        for j in range(16):
            x = t22.product.basis_element(i)
            y = t22.product.basis_element(j)
            direct = ctx.solve(x)(y)
            sym = tensor_poisson_bracket(ctx, x, y)
            agree = max(agree, (direct - sym).norm())
    ok_a = ok_a and agree <= 1e-8

    v_b = theorem2_verdict(t22, sq, quantum_form(m2, hbar=2.0))
    ok_b = v_b.kind == "degenerate" and v_b.witness is not None

    sf = fermionic_form(g2, 2)
    v_c = theorem2_verdict(build_tensor(g2, m2), sf, sq)
    ok_c = v_c.kind == "degenerate"

    v_d = theorem2_verdict(build_tensor(g2, g2), sf, fermionic_form(g2, 2))
    ok_d = v_d.kind == "supercommutative" and abs(v_d.lam) <= 1e-10

    elapsed = time.monotonic() - t0
    _report("criterion 5: tensor-product battery",
            ok_a and ok_b and ok_c and ok_d and elapsed < 60.0,
            f"(a) lambda {v.lam:.3f} agreement {agree:.1e}; "
            f"(b) {v_b.kind}/{v_b.witness}; (c) {v_c.kind}; (d) {v_d.kind}; "
            f"{elapsed:.1f}s")


def test_criterion_6_perturbed_parameter_control():
    m2 = matrix_algebra(2)
    sq = quantum_form(m2, hbar=1.0)
    t22 = build_tensor(m2, m2)
    lam = 1j
    worst_good, best_bad = 0.0, np.inf
    for (i, j) in [(3, 1), (1, 2), (2, 3)]:
        a, b = m2.basis_element(i), m2.basis_element(j)
        worst_good = max(worst_good, ansatz_leibniz_residual(t22, sq, sq, a, b, lam))
        best_bad = min(best_bad,
                       ansatz_leibniz_residual(t22, sq, sq, a, b, lam * (1 + 1e-3)))
    ok = worst_good <= TOL and best_bad >= 10 * TOL
    _report("criterion 6: perturbed parameter fails the product-rule test",
            ok, f"true {worst_good:.1e}, perturbed {best_bad:.1e}")


def test_criterion_7_dynamics():
    rng = np.random.default_rng(7)
    checks = dynamics_battery(rng)
    by_name = {c["name"]: c for c in checks}
    ok = (by_name["dynamics:two-level-precession"]["residual"] <= 1e-8
          and by_name["dynamics:heisenberg-liouville-duality"]["residual"] <= 1e-9
          and by_name["dynamics:evolution-preserves-form"]["residual"] <= 1e-8
          and by_name["dynamics:symmetry-generator-conserved"]["residual"] <= 1e-9)
    _report("criterion 7: dynamics oracles",
            ok, "; ".join(f"{c['name'].split(':')[1]} {c['residual']:.1e}"
                          for c in checks))


def test_criterion_8_lie_layer():
    checks = lie_battery()
    ok = all(c["passed"] for c in checks)
    _report("criterion 8: Lie-algebra layer", ok,
            "; ".join(c["name"].split(":")[1] for c in checks if not c["passed"])
            or "all residuals within 1e-9")


def test_criterion_9_noether():
    checks = noether_battery()
    by_name = {c["name"]: c for c in checks}
    ok = (by_name["noether:evolution-in-kernel"]["residual"] <= 1e-8
          and by_name["noether:invariant-conserved"]["residual"] <= 1e-8
          and by_name["noether:non-symmetry-reported"]["passed"])
    _report("criterion 9: augmented-time invariants", ok,
            f"kernel {by_name['noether:evolution-in-kernel']['residual']:.1e}, "
            f"conserved {by_name['noether:invariant-conserved']['residual']:.1e}")


def test_criterion_10_deterministic_suite():
    cmd = [sys.executable, "-m", "ncham.cli", "suite", "--seed", "42"]
    a = subprocess.run(cmd, capture_output=True, text=True)
    b = subprocess.run(cmd, capture_output=True, text=True)
    ok = a.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 1000
    _report("criterion 10: byte-identical suite reports", ok,
            f"{len(a.stdout)} bytes, rc {a.returncode}")
    payload = json.loads(a.stdout)
    assert payload["passed"]


def test_criterion_2_supplement_full_space_on_product():
    # same identities over the full derivation space of the product algebra
    from ncham import full_sder_space

    rng = np.random.default_rng(99)
    t22 = build_tensor(matrix_algebra(2), matrix_algebra(2))
    space = full_sder_space(t22.product)
    worst = calculus_battery(space, rng, instances=6)
    _report("criterion 2 supplement: full product derivation space",
            max(worst.values()) <= TOL,
            ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
