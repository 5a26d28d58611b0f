"""States, expectation values and Hamiltonian dynamics.

States are positive normalized linear functionals vanishing on odd
elements.  Evolution uses exact matrix exponentials of the fixed linear
generator: Heisenberg picture ``dA/dt = {H, A}``, dual Liouville picture
``d phi(t)/dt (.) = phi(t)({H, .})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from scipy.linalg import expm

from .superalgebra import Element, Superalgebra, is_hermitian, multiply, star
from .symplectic import SymplecticStructure


class StateError(ValueError):
    """A functional failed a state invariant."""


@dataclass(frozen=True)
class State:
    """Linear functional given by its values on the basis."""

    algebra: Superalgebra
    functional: np.ndarray  # length dim, value on each basis element

    def __post_init__(self):
        object.__setattr__(self, "functional", np.asarray(self.functional, dtype=complex))
        if self.functional.shape != (self.algebra.dim,):
            raise StateError("functional length must match the algebra dimension")

    def __call__(self, a: Element) -> complex:
        return expectation(self, a)

    def validate(self, tol: float = 1e-9, rng: Optional[np.random.Generator] = None) -> Dict:
        """Check normalization, odd-vanishing and positivity; returns a report.

        Positivity runs through the density matrix when a faithful matrix
        model exists, and through sampling phi(A*A) over basis plus random
        elements otherwise; both paths are reported when available.
        """
        alg = self.algebra
        report: Dict = {}
        norm_err = abs(self.functional[alg.unit_index] - 1.0)
        report["normalized"] = norm_err <= tol
        odd_vals = np.abs(self.functional[alg.parity == 1])
        report["odd_vanishing"] = bool(odd_vals.max(initial=0.0) <= tol)
        rng = np.random.default_rng(0) if rng is None else rng
        samples = [alg.basis_element(i) for i in range(alg.dim)]
        for _ in range(16):
            samples.append(alg.element(rng.normal(size=alg.dim) + 1j * rng.normal(size=alg.dim)))
        worst = 0.0
        for a in samples:
            val = expectation(self, multiply(star(a), a))
            worst = min(worst, val.real)
            worst = min(worst, -abs(val.imag))
        report["positive_sampled"] = worst >= -tol
        report["positivity_floor"] = float(worst)
        if alg.model is not None:
            rho = self.density_matrix()
            evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
            report["positive_density"] = bool(evals.min() >= -tol)
            report["density_eigenvalues"] = [float(v) for v in evals]
        ok = report["normalized"] and report["odd_vanishing"] and report["positive_sampled"] \
            and report.get("positive_density", True)
        report["valid"] = bool(ok)
        return report

    def require_valid(self, tol: float = 1e-9) -> "State":
        rep = self.validate(tol)
        if not rep["valid"]:
            bad = [k for k, v in rep.items() if v is False]
            raise StateError(f"state invariants failed: {', '.join(bad)}")
        return self

    def density_matrix(self) -> np.ndarray:
        """Density matrix rho with phi(A) = Tr(rho M(A)); model algebras only."""
        alg = self.algebra
        if alg.model is None:
            raise StateError(f"{alg.name} has no faithful matrix model")
        n = alg.model.shape[1]
        # phi_i = Tr(rho M_i) = sum_{r,s} rho[r,s] M_i[s,r]
        A = alg.model.transpose(0, 2, 1).reshape(alg.dim, -1)
        rho, *_ = np.linalg.lstsq(A, self.functional, rcond=None)
        return rho.reshape(n, n)

    def is_pure(self, tol: float = 1e-8) -> bool:
        """Rank-1 density test; only defined for matrix-model algebras."""
        rho = self.density_matrix()
        evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        return bool(abs(evals.max() - 1.0) <= tol and np.abs(evals[:-1]).max(initial=0.0) <= tol)


def expectation(phi: State, a: Element) -> complex:
    if phi.algebra is not a.algebra:
        raise StateError("state and element belong to different algebras")
    return complex(phi.functional @ a.coeffs)


def state_from_density(alg: Superalgebra, rho: np.ndarray) -> State:
    """State phi(A) = Tr(rho M(A)) from a density matrix on the model space."""
    if alg.model is None:
        raise StateError(f"{alg.name} has no faithful matrix model")
    rho = np.asarray(rho, dtype=complex)
    vals = np.einsum("sr,irs->i", rho, alg.model)
    return State(alg, vals)


def state_from_vector(alg: Superalgebra, psi: np.ndarray) -> State:
    """Vector state from a normalized model-space vector."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return state_from_density(alg, np.outer(psi, psi.conj()))


def maximally_mixed_state(alg: Superalgebra) -> State:
    if alg.model is None:
        raise StateError(f"{alg.name} has no faithful matrix model")
    n = alg.model.shape[1]
    return state_from_density(alg, np.eye(n) / n)


def transpose_action(phi_alg: np.ndarray, state: State, tol: float = 1e-9,
                     verified: bool = False) -> State:
    """Dual action of an automorphism: <Phi~(phi), A> = <phi, Phi(A)>."""
    from .derivations import verify_star_isomorphism

    if not verified:
        verify_star_isomorphism(state.algebra, state.algebra, phi_alg, tol)
    return State(state.algebra, np.asarray(phi_alg, dtype=complex).T @ state.functional)


@dataclass
class HamiltonianSystem:
    """Symplectic structure plus an even hermitian Hamiltonian."""

    structure: SymplecticStructure
    hamiltonian: Element
    generator: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        h = self.hamiltonian
        if h.homogeneous_parity() != 0:
            raise StateError("Hamiltonian must be even")
        if not is_hermitian(h, 1e-9):
            raise StateError("Hamiltonian must be hermitian")
        self.generator = self.structure.hamiltonian_derivation(h).matrix

    @property
    def algebra(self) -> Superalgebra:
        return self.structure.algebra

    def evolution_matrix(self, t: float) -> np.ndarray:
        """exp(t Y_H) acting on coefficient vectors; an algebra automorphism."""
        return expm(float(t) * self.generator)


def evolve_heisenberg(sys: HamiltonianSystem, a: Element, t: float) -> Element:
    """A(t) solving dA/dt = {H, A}, A(0) = a."""
    return Element(sys.algebra, sys.evolution_matrix(t) @ a.coeffs)


def evolve_liouville(sys: HamiltonianSystem, phi: State, t: float) -> State:
    """phi(t) with <phi(t), A> = <phi, A(t)>."""
    return State(sys.algebra, sys.evolution_matrix(t).T @ phi.functional)


def check_symmetry(sys: HamiltonianSystem, g: Element, tol: float = 1e-9) -> bool:
    """True iff {G, H} = 0, i.e. G generates a symmetry of the dynamics."""
    return sys.structure.poisson_bracket(g, sys.hamiltonian).is_zero(tol)
