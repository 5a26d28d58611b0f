"""Request handlers shared by the HTTP app and the command-line client."""

from __future__ import annotations

from typing import List

import numpy as np

from ..config import RunConfig, default_tolerance
from ..superalgebra import AlgebraError, graded_center
from ..derivations import sder_basis, sder_dimensions
from ..specio import (
    SpecError,
    algebra_from_dict,
    cnum,
    element_from_dict,
    hamiltonians_from_dict,
    lie_structure_from_dict,
    state_from_dict,
    system_from_dict,
)
from ..states import HamiltonianSystem, evolve_heisenberg, expectation, maximally_mixed_state
from ..symplectic import SymplecticError
from ..suite import run_suite
from . import models as m


def _tol(value) -> float:
    return default_tolerance() if value is None else float(value)


def verify_algebra(req: m.VerifyAlgebraRequest) -> m.VerifyAlgebraResponse:
    tol = _tol(req.tolerance)
    checks: List[m.CheckResult] = []
    try:
        alg = algebra_from_dict(req.algebra.as_dict(), "algebra", tol=tol)
    except SpecError as exc:
        if isinstance(exc.__cause__, AlgebraError):
            # well-formed input whose mathematical axioms fail
            checks.append(m.CheckResult(name="axioms", passed=False,
                                        detail={"error": str(exc)}))
            return m.VerifyAlgebraResponse(valid=False, name="invalid", dim=0,
                                           checks=checks, center_dimension=0)
        raise
    checks.append(m.CheckResult(name="associativity-unit-grading-involution", passed=True))
    center = graded_center(alg)
    return m.VerifyAlgebraResponse(
        valid=True, name=alg.name, dim=alg.dim, checks=checks,
        center_dimension=int(center.shape[0]),
    )


def sder_basis_info(req: m.SderBasisRequest) -> m.SderBasisResponse:
    from ..derivations import inner_derivations_span

    tol = _tol(req.tolerance)
    alg = algebra_from_dict(req.algebra.as_dict(), "algebra", tol=tol)
    basis = sder_basis(alg)
    even, odd = sder_dimensions(basis)
    worst = max((d.leibniz_residual() for d in basis), default=0.0)
    rows = inner_derivations_span(alg)
    rank_inner = int(np.linalg.matrix_rank(rows, tol=1e-7 * max(1.0, float(np.abs(rows).max()))))
    return m.SderBasisResponse(
        dim_even=even, dim_odd=odd,
        parities=[d.parity for d in basis],
        worst_leibniz_residual=float(worst),
        all_inner=rank_inner == len(basis),
    )


def check_symplectic(req: m.CheckSymplecticRequest) -> m.SymplecticResponse:
    tol = _tol(req.tolerance)
    try:
        alg, struct = system_from_dict(req.system.as_dict(), "system", tol=tol)
    except SymplecticError as exc:
        witness = None
        if exc.witness is not None:
            witness = [str(w) for w in (exc.witness if isinstance(exc.witness, tuple) else (exc.witness,))]
        return m.SymplecticResponse(valid=False, reason=exc.reason, witness=witness,
                                    message=str(exc))
    return m.SymplecticResponse(
        valid=True, reality=struct.reality,
        exact=struct.compute_potential() is not None,
    )


def poisson(req: m.PoissonRequest) -> m.PoissonResponse:
    tol = _tol(req.tolerance)
    alg, struct = system_from_dict(req.system.as_dict(), "system", tol=tol)
    a = element_from_dict(alg, req.a.as_dict(), "a")
    b = element_from_dict(alg, req.b.as_dict(), "b")
    out = struct.poisson_bracket(a, b)
    return m.PoissonResponse(coeffs=[cnum(c) for c in out.coeffs], labels=list(alg.labels))


def evolve(req: m.EvolveRequest) -> m.EvolveResponse:
    tol = _tol(req.tolerance)
    alg, struct = system_from_dict(req.system.as_dict(), "system", tol=tol)
    h = element_from_dict(alg, req.hamiltonian.as_dict(), "hamiltonian")
    system = HamiltonianSystem(struct, h)
    times = req.times if req.times is not None else \
        list(np.linspace(0.0, req.t_max, req.steps))
    state = None
    if req.state is not None:
        state = state_from_dict(alg, req.state.as_dict(), "state")
    elif alg.model is not None:
        state = maximally_mixed_state(alg)
    if req.observable is not None:
        a0 = element_from_dict(alg, req.observable.as_dict(), "observable")
        if state is not None:
            columns = ["t", "re_expectation", "im_expectation"]
            rows = []
            for t in times:
                val = expectation(state, evolve_heisenberg(system, a0, float(t)))
                rows.append([float(t), val.real, val.imag])
        else:
            columns = ["t"] + [f"re_{l}" for l in alg.labels] + [f"im_{l}" for l in alg.labels]
            rows = []
            for t in times:
                at = evolve_heisenberg(system, a0, float(t))
                rows.append([float(t)] + [c.real for c in at.coeffs] + [c.imag for c in at.coeffs])
    else:
        if state is None:
            raise SpecError("observable", "need an observable or a state to evolve")
        columns = ["t"] + [f"re_{l}" for l in alg.labels] + [f"im_{l}" for l in alg.labels]
        rows = []
        from ..states import evolve_liouville

        for t in times:
            phit = evolve_liouville(system, state, float(t))
            rows.append([float(t)] + [v.real for v in phit.functional]
                        + [v.imag for v in phit.functional])
    return m.EvolveResponse(times=[float(t) for t in times], columns=columns, rows=rows)


def tensor_check(req: m.TensorCheckRequest) -> m.TensorCheckResponse:
    from ..tensor import build_tensor, theorem2_verdict

    tol = _tol(req.tolerance)
    a1, s1 = system_from_dict(req.system1.as_dict(), "system1", tol=tol)
    a2, s2 = system_from_dict(req.system2.as_dict(), "system2", tol=tol)
    t = build_tensor(a1, a2, tol=tol)
    verdict = theorem2_verdict(t, s1, s2, tol=max(tol, 1e-8))
    lam = None if verdict.lam is None else cnum(verdict.lam)
    mag = None if verdict.lam is None else float(abs(verdict.lam))
    witness = None if verdict.witness is None else [str(w) for w in verdict.witness]
    diag = {k: v for k, v in verdict.diagnostics.items() if k != "pb_table"}
    diag = {k: (list(v) if isinstance(v, tuple) else v) for k, v in diag.items()}
    return m.TensorCheckResponse(verdict=verdict.kind, lam=lam, planck_magnitude=mag,
                                 witness=witness, diagnostics=diag)


def action_check(req: m.ActionCheckRequest) -> m.ActionCheckResponse:
    from ..lie_actions import (
        LieAlgebraAction,
        equivariance_residual,
        momentum_map,
        verify_action,
    )

    from ..specio import generators_from_dict

    tol = _tol(req.tolerance)
    alg, struct = system_from_dict(req.system.as_dict(), "system", tol=tol)
    C = lie_structure_from_dict(req.lie.as_dict(), "lie")
    hams = hamiltonians_from_dict(alg, req.lie.as_dict(), "lie")
    gens = generators_from_dict(alg, req.lie.as_dict(), "lie")
    if gens is None and hams is None:
        raise SpecError("lie", "action checks need generator matrices or hamiltonian elements")
    if gens is None:
        gens = [struct.hamiltonian_derivation(h) for h in hams]
    action = LieAlgebraAction(C, gens, hamiltonians=hams)
    rep = verify_action(action, struct, tol=tol)
    mm = None
    eq = None
    if req.state is not None and rep.get("hamiltonian"):
        phi = state_from_dict(alg, req.state.as_dict(), "state")
        mm = [cnum(v) for v in momentum_map(action, phi)]
        eq = float(equivariance_residual(action, struct, phi))
    return m.ActionCheckResponse(
        homomorphism_residual=float(rep["homomorphism_residual"]),
        locally_hamiltonian_residual=float(rep["locally_hamiltonian_residual"]),
        hamiltonian=bool(rep.get("hamiltonian", False)),
        poisson=bool(rep.get("poisson", False)),
        poisson_residual=(float(rep["poisson_residual"]) if "poisson_residual" in rep else None),
        generator_match_residual=(float(rep["generator_match_residual"])
                                  if "generator_match_residual" in rep else None),
        momentum_map=mm,
        equivariance_residual=eq,
    )


def h2(req: m.H2Request) -> m.H2Response:
    from ..lie_actions import ce_cohomology_h2

    C = lie_structure_from_dict(req.lie.as_dict(), "lie")
    dim, reps = ce_cohomology_h2(C, tol=_tol(req.tolerance))
    return m.H2Response(dim=int(dim),
                        representatives=[[[float(v) for v in row] for row in rep]
                                         for rep in reps])


def noether(req: m.NoetherRequest) -> m.NoetherResponse:
    from ..extended import ExtendedDerivation, evolution_derivation, extended_element, noether_check

    tol = _tol(req.tolerance)
    alg, struct = system_from_dict(req.system.as_dict(), "system", tol=tol)
    parts = [element_from_dict(alg, p.as_dict(), f"hamiltonian_powers[{k}]")
             for k, p in enumerate(req.hamiltonian_powers)]
    H = extended_element(alg, parts, req.degree_bound)
    g = element_from_dict(alg, req.generator.as_dict(), "generator")
    lifted = evolution_derivation(struct, extended_element(alg, [g], req.degree_bound))
    zhat = ExtendedDerivation(struct.space, np.zeros(req.degree_bound + 1), lifted.coords)
    rep = noether_check(struct, H, zhat, tol=max(tol, 1e-8))
    inv = rep.get("invariant")
    return m.NoetherResponse(
        closed=rep["closed"], exact=rep["exact"], conserved=rep["conserved"],
        closed_residual=float(rep["closed_residual"]),
        exact_residual=(float(rep["exact_residual"]) if "exact_residual" in rep else None),
        conservation_residual=(float(rep["conservation_residual"])
                               if "conservation_residual" in rep else None),
        invariant_powers=(None if inv is None else
                          [[cnum(c) for c in row] for row in inv.coeffs]),
    )


def suite(req: m.SuiteRequest) -> m.SuiteResponse:
    config = RunConfig(seed=req.seed, tolerance=_tol(req.tolerance))
    rep = run_suite(config, calculus_instances=req.calculus_instances,
                    poisson_instances=req.poisson_instances)
    checks = [m.CheckResult(**c) for c in rep["checks"]]
    return m.SuiteResponse(passed=rep["passed"], config=rep["config"], checks=checks)
