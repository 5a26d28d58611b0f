"""Seeded, deterministic battery of the kernel's structural checks.

Each entry instantiates one verification (calculus identity, canonical
structure property, tensor-product verdict, dynamics property, ...) and
reports its worst residual; the same seed and config always produce the
same report bytes.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import RunConfig
from .superalgebra import (
    Element,
    Superalgebra,
    graded_center,
    grassmann_algebra,
    matrix_algebra,
    supermatrix_algebra,
)
from .derivations import (
    Superderivation,
    bracket,
    inner,
    sder_basis,
    sder_dimensions,
)
from .forms import (
    DerivationSpace,
    exterior_derivative,
    full_sder_space,
    interior_product,
    lie_derivative,
    random_form,
    wedge,
)
from .states import (
    HamiltonianSystem,
    evolve_heisenberg,
    evolve_liouville,
    expectation,
    state_from_density,
    state_from_vector,
)
from .symplectic import (
    canonical_form,
    canonical_two_form,
    fermionic_form,
    hamiltonian_homomorphism_residual,
    quantum_form,
    super_jacobi_residual,
)
from .tensor import (
    TensorContext,
    ansatz_leibniz_residual,
    build_tensor,
    hamiltonian_ansatz,
    tensor_poisson_bracket,
    theorem2_verdict,
)


def _check(name: str, residual: float, tol: float, detail: Optional[dict] = None) -> dict:
    entry = {"name": name, "residual": float(residual), "tolerance": float(tol),
             "passed": bool(residual <= tol)}
    if detail:
        entry["detail"] = detail
    return entry


def _flag(name: str, passed: bool, detail: Optional[dict] = None) -> dict:
    entry = {"name": name, "passed": bool(passed)}
    if detail:
        entry["detail"] = detail
    return entry


def _random_homogeneous(space: DerivationSpace, rng: np.random.Generator) -> Superderivation:
    pars = sorted(set(int(p) for p in space.parities))
    p = int(pars[rng.integers(0, len(pars))])
    c = np.where(space.parities == p,
                 rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim), 0.0)
    return space.from_coords(c, p)


def _random_homogeneous_element(alg: Superalgebra, rng: np.random.Generator) -> Element:
    p = int(rng.integers(0, 2)) if alg.parity.any() else 0
    coeffs = np.where(alg.parity == p,
                      rng.normal(size=alg.dim) + 1j * rng.normal(size=alg.dim), 0.0)
    if not np.any(np.abs(coeffs)):
        coeffs = np.where(alg.parity == 0,
                          rng.normal(size=alg.dim) + 1j * rng.normal(size=alg.dim), 0.0)
    return alg.element(coeffs)


def calculus_algebras() -> List[Tuple[str, DerivationSpace]]:
    """Test spaces for the calculus battery: M2, M2xM2 (lifted frame), Gr2, M1|1."""
    m2 = matrix_algebra(2)
    spaces = [("M2", full_sder_space(m2))]
    t22 = build_tensor(m2, m2)
    paulis = [inner(m2.basis_element(i), 0) for i in (1, 2, 3)]
    gens = [t22.lift1(x) for x in paulis] + [t22.lift2(x) for x in paulis]
    spaces.append(("M2xM2", DerivationSpace(t22.product, tuple(gens))))
    spaces.append(("Gr2", full_sder_space(grassmann_algebra(2))))
    spaces.append(("M1|1", full_sder_space(supermatrix_algebra(1, 1))))
    return spaces


def calculus_battery(space: DerivationSpace, rng: np.random.Generator,
                     instances: int = 50) -> Dict[str, float]:
    """Worst residuals of d^2, Cartan, Lie-bracket and product-rule identities."""
    worst = {"d_squared": 0.0, "cartan": 0.0, "lie_bracket": 0.0, "d_product_rule": 0.0}
    for k in range(instances):
        p = int(rng.integers(0, 3))
        s = int(rng.integers(0, 2))
        w = random_form(space, p, s, rng)
        scale = max(1.0, w.norm())
        dw = exterior_derivative(w)
        worst["d_squared"] = max(worst["d_squared"],
                                 exterior_derivative(dw).norm() / scale)
        X = _random_homogeneous(space, rng)
        Y = _random_homogeneous(space, rng)
        eta = (-1.0) ** (X.parity * w.parity)
        if p == 0:
            cart = (interior_product(X, dw) - eta * lie_derivative(X, w)).norm()
        else:
            lhs = interior_product(X, dw) + exterior_derivative(interior_product(X, w))
            cart = (lhs - eta * lie_derivative(X, w)).norm()
        worst["cartan"] = max(worst["cartan"], cart / scale)
        l1 = lie_derivative(X, lie_derivative(Y, w))
        l2 = (-1.0) ** (X.parity * Y.parity) * lie_derivative(Y, lie_derivative(X, w))
        l3 = lie_derivative(bracket(X, Y), w)
        worst["lie_bracket"] = max(worst["lie_bracket"], (l1 - l2 - l3).norm() / scale)
        pa = int(rng.integers(0, 2))
        fa = random_form(space, pa, int(rng.integers(0, 2)), rng)
        fb = random_form(space, int(rng.integers(0, 2)), int(rng.integers(0, 2)), rng)
        lhs = exterior_derivative(wedge(fa, fb))
        rhs = wedge(exterior_derivative(fa), fb) + (-1.0) ** pa * wedge(fa, exterior_derivative(fb))
        worst["d_product_rule"] = max(
            worst["d_product_rule"],
            (lhs - rhs).norm() / max(1.0, fa.norm() * max(1.0, fb.norm())),
        )
    return worst


def poisson_battery(struct, rng: np.random.Generator, instances: int = 100) -> Dict[str, float]:
    """Super-Jacobi and bracket-homomorphism residuals on random homogeneous data."""
    alg = struct.algebra
    worst = {"super_jacobi": 0.0, "homomorphism": 0.0}
    for _ in range(instances):
        a = _random_homogeneous_element(alg, rng)
        b = _random_homogeneous_element(alg, rng)
        c = _random_homogeneous_element(alg, rng)
        worst["super_jacobi"] = max(worst["super_jacobi"],
                                    super_jacobi_residual(struct, a, b, c))
        worst["homomorphism"] = max(worst["homomorphism"],
                                    hamiltonian_homomorphism_residual(struct, a, b))
    return worst


def canonical_battery(n: int) -> Dict[str, float]:
    """Canonical-form properties on M_n: closed, imaginary, invariant, Y_A = D_A."""
    from .forms import form_star

    alg = matrix_algebra(n)
    space, wc = canonical_two_form(alg)
    struct = canonical_form(alg)
    out = {
        "closed": exterior_derivative(wc).norm(),
        "imaginary": (form_star(wc) + wc).norm(),
        "invariant": max(lie_derivative(X, wc).norm() for X in space.basis),
    }
    rng = np.random.default_rng(n)
    worst = 0.0
    for _ in range(8):
        a = alg.element(rng.normal(size=alg.dim) + 1j * rng.normal(size=alg.dim))
        ya = struct.hamiltonian_derivation(a)
        worst = max(worst, float(np.abs(ya.matrix - inner(a, 0).matrix).max()))
    out["hamiltonian_is_inner"] = worst
    return out


def tensor_battery(tol: float = 1e-8) -> List[dict]:
    """The four product cases plus the perturbed-parameter negative control."""
    checks: List[dict] = []
    m2 = matrix_algebra(2)
    g2 = grassmann_algebra(2)
    s_q = quantum_form(m2, hbar=1.0)
    t22 = build_tensor(m2, m2)
    ctx = TensorContext(t22, s_q, s_q)
    v = theorem2_verdict(t22, s_q, s_q, ctx)
    checks.append(_flag("tensor:quantum-matched-valid",
                        v.kind == "quantum" and abs(v.lam - 1j) <= 1e-8,
                        {"kind": v.kind, "lambda": [v.lam.real, v.lam.imag]}))
    worst = 0.0
    for i in range(m2.dim):
        for j in range(m2.dim):
            a, b = m2.basis_element(i), m2.basis_element(j)
            direct = ctx.solve(t22.simple(a, b))
            ans = hamiltonian_ansatz(t22, s_q, s_q, a, b, v.lam)
            worst = max(worst, float(np.abs(direct.matrix - ans.matrix).max()))
    checks.append(_check("tensor:direct-vs-structured-solution", worst, 1e-8))
    worst = 0.0
    rng = np.random.default_rng(5)
    for _ in range(10):
        i, j, k, l = (int(rng.integers(0, 4)) for _ in range(4))
        x = t22.simple(m2.basis_element(i), m2.basis_element(j))
        y = t22.simple(m2.basis_element(k), m2.basis_element(l))
        direct = ctx.solve(x)(y)
        sym = tensor_poisson_bracket(ctx, x, y)
        worst = max(worst, (direct - sym).norm())
    checks.append(_check("tensor:bracket-two-route-agreement", worst, 1e-8))

    v2 = theorem2_verdict(t22, s_q, quantum_form(m2, hbar=2.0))
    checks.append(_flag("tensor:mismatched-parameters-degenerate",
                        v2.kind == "degenerate", {"witness": list(v2.witness)}))
    sf = fermionic_form(g2, 2)
    v3 = theorem2_verdict(build_tensor(g2, m2), sf, s_q)
    checks.append(_flag("tensor:mixed-pair-degenerate", v3.kind == "degenerate",
                        {"witness": list(v3.witness)}))
    v4 = theorem2_verdict(build_tensor(g2, g2), sf, fermionic_form(g2, 2))
    checks.append(_flag("tensor:supercommutative-valid",
                        v4.kind == "supercommutative" and abs(v4.lam) <= 1e-10,
                        {"kind": v4.kind}))
    # perturbed-parameter control: the structured solution fails Leibniz
    a, b = m2.basis_element(3), m2.basis_element(1)
    r_good = ansatz_leibniz_residual(t22, s_q, s_q, a, b, v.lam)
    r_bad = ansatz_leibniz_residual(t22, s_q, s_q, a, b, v.lam * (1 + 1e-3))
    checks.append(_flag("tensor:perturbed-parameter-fails-leibniz",
                        r_good <= 1e-9 and r_bad >= 10 * 1e-9,
                        {"residual_true": float(r_good), "residual_perturbed": float(r_bad)}))
    return checks


def dynamics_battery(rng: np.random.Generator) -> List[dict]:
    from .derivations import verify_star_isomorphism
    from .forms import pullback

    checks: List[dict] = []
    m2 = matrix_algebra(2)
    sq = quantum_form(m2, hbar=1.0)
    I, sx, sy, sz = (m2.basis_element(i) for i in range(4))
    w0 = 1.0
    sys = HamiltonianSystem(sq, 0.5 * w0 * sz)
    worst = 0.0
    for t in np.linspace(0.0, 10.0, 41):
        at = evolve_heisenberg(sys, sx, float(t))
        expect = np.cos(w0 * t) * sx.coeffs - np.sin(w0 * t) * sy.coeffs
        worst = max(worst, float(np.abs(at.coeffs - expect).max()))
    checks.append(_check("dynamics:two-level-precession", worst, 1e-8))
    phi = state_from_density(m2, np.array([[0.65, 0.1 + 0.05j], [0.1 - 0.05j, 0.35]]))
    worst = 0.0
    for _ in range(10):
        a = m2.element(rng.normal(size=4) + 1j * rng.normal(size=4))
        t = float(rng.uniform(0, 5))
        d1 = expectation(evolve_liouville(sys, phi, t), a)
        d2 = expectation(phi, evolve_heisenberg(sys, a, t))
        worst = max(worst, abs(d1 - d2))
    checks.append(_check("dynamics:heisenberg-liouville-duality", worst, 1e-9))
    worst = 0.0
    for t in (0.7, 2.3, 6.1):
        Phi = sys.evolution_matrix(t)
        verify_star_isomorphism(m2, m2, Phi, 1e-7)
        moved = pullback(Phi, sq.omega, sq.space, verified=True)
        worst = max(worst, (moved - sq.omega).norm())
    checks.append(_check("dynamics:evolution-preserves-form", worst, 1e-8))
    worst = 0.0
    for t in np.linspace(0.0, 10.0, 21):
        drift = abs(expectation(evolve_liouville(sys, phi, float(t)), sys.hamiltonian)
                    - expectation(phi, sys.hamiltonian))
        worst = max(worst, drift)
    checks.append(_check("dynamics:energy-expectation-constant", worst, 1e-9))
    g = sz
    worst = 0.0
    for t in np.linspace(0.0, 10.0, 21):
        drift = abs(expectation(evolve_liouville(sys, phi, float(t)), g)
                    - expectation(phi, g))
        worst = max(worst, drift)
    checks.append(_check("dynamics:symmetry-generator-conserved", worst, 1e-9))
    return checks


def lie_battery() -> List[dict]:
    from .lie_actions import (
        LieAlgebraAction,
        ce_cohomology_h2,
        central_extension,
        equivariance_residual,
        momentum_map,
        verify_action,
    )

    checks: List[dict] = []
    m2 = matrix_algebra(2)
    sq = quantum_form(m2, hbar=1.0)
    eps = np.zeros((3, 3, 3))
    for (a, b, c, s) in [(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1),
                         (1, 0, 2, -1), (2, 1, 0, -1), (0, 2, 1, -1)]:
        eps[a, b, c] = s
    C = -eps  # sign convention matching the adopted bracket
    hams = [0.5 * m2.basis_element(i + 1) for i in range(3)]
    gens = [sq.hamiltonian_derivation(h) for h in hams]
    action = LieAlgebraAction(C, gens, hamiltonians=hams)
    rep = verify_action(action, sq)
    checks.append(_check("lie:spin-action-homomorphism", rep["homomorphism_residual"], 1e-9))
    checks.append(_check("lie:spin-action-poisson", rep["poisson_residual"], 1e-9))
    d_su2, _ = ce_cohomology_h2(C)
    d_ab, reps_ab = ce_cohomology_h2(np.zeros((2, 2, 2)))
    checks.append(_flag("lie:h2-dimensions", d_su2 == 0 and d_ab == 1,
                        {"spin": int(d_su2), "abelian2": int(d_ab)}))
    ext = central_extension(np.zeros((2, 2, 2)), reps_ab)
    checks.append(_flag("lie:central-extension-jacobi", ext.shape == (3, 3, 3)))
    up = state_from_vector(m2, [1.0, 0.0])
    mm = momentum_map(action, up)
    checks.append(_check("lie:momentum-map-plus-z",
                         float(np.abs(mm - np.array([0, 0, 0.5])).max()), 1e-9,
                         {"value": [float(v.real) for v in mm]}))
    checks.append(_check("lie:momentum-equivariance",
                         equivariance_residual(action, sq, up), 1e-9))
    return checks


def noether_battery() -> List[dict]:
    from .extended import (
        ExtendedDerivation,
        evolution_derivation,
        extended_d,
        extended_element,
        extended_interior,
        noether_check,
        presymplectic_omega,
    )

    checks: List[dict] = []
    m2 = matrix_algebra(2)
    sq = quantum_form(m2, hbar=1.0)
    sx, sz = m2.basis_element(1), m2.basis_element(3)
    D = 4
    H = extended_element(m2, [sz, sx], D)  # sz + t sx
    omega = presymplectic_omega(sq, H)
    checks.append(_check("noether:augmented-form-closed", extended_d(omega).norm(), 1e-9))
    yhat = evolution_derivation(sq, H)
    checks.append(_check("noether:evolution-in-kernel",
                         extended_interior(yhat, omega).norm(), 1e-8))
    H0 = extended_element(m2, [sz], D)
    zg = ExtendedDerivation(sq.space, np.zeros(D + 1),
                            evolution_derivation(sq, extended_element(m2, [sz], D)).coords)
    rep = noether_check(sq, H0, zg)
    checks.append(_check("noether:invariant-conserved",
                         rep.get("conservation_residual", np.inf), 1e-8,
                         {"exact": rep["exact"]}))
    zx = ExtendedDerivation(sq.space, np.zeros(D + 1),
                            evolution_derivation(sq, extended_element(m2, [sx], D)).coords)
    rep_bad = noether_check(sq, H0, zx)
    checks.append(_flag("noether:non-symmetry-reported",
                        not rep_bad["closed"] or not rep_bad["exact"]))
    return checks


def run_suite(config: RunConfig, calculus_instances: int = 50,
              poisson_instances: int = 100) -> dict:
    rng = np.random.default_rng(config.seed)
    checks: List[dict] = []

    dims = {}
    for label, alg in [("M2", matrix_algebra(2)), ("M3", matrix_algebra(3))]:
        dims[label] = sder_dimensions(sder_basis(alg))
    t23 = build_tensor(matrix_algebra(2), matrix_algebra(3))
    dims["M2xM3"] = sder_dimensions(sder_basis(t23.product))
    checks.append(_flag("derivations:matrix-dimensions",
                        dims["M2"] == (3, 0) and dims["M3"] == (8, 0)
                        and sum(dims["M2xM3"]) == 35,
                        {k: list(v) for k, v in dims.items()}))
    centers = {
        "M2": graded_center(matrix_algebra(2)).shape[0],
        "Gr2": graded_center(grassmann_algebra(2)).shape[0],
        "M2xM2": graded_center(build_tensor(matrix_algebra(2), matrix_algebra(2)).product).shape[0],
    }
    checks.append(_flag("center:dimensions",
                        centers == {"M2": 1, "Gr2": 4, "M2xM2": 1}, centers))

    for label, space in calculus_algebras():
        worst = calculus_battery(space, rng, calculus_instances)
        for key, val in worst.items():
            checks.append(_check(f"calculus:{label}:{key}", val, config.tolerance))

    for n in (2, 3):
        res = canonical_battery(n)
        for key, val in res.items():
            checks.append(_check(f"canonical:M{n}:{key}", val, config.tolerance))

    for label, struct in [("M2-quantum", quantum_form(matrix_algebra(2))),
                          ("Gr2-fermionic", fermionic_form(grassmann_algebra(2), 2))]:
        worst = poisson_battery(struct, rng, poisson_instances)
        for key, val in worst.items():
            checks.append(_check(f"poisson:{label}:{key}", val, config.tolerance))

    checks.extend(tensor_battery())
    checks.extend(dynamics_battery(rng))
    checks.extend(lie_battery())
    checks.extend(noether_battery())

    return {
        "config": {"seed": config.seed, "tolerance": config.tolerance,
                   "fd_step": config.fd_step},
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
