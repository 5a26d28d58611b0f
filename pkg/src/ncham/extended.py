"""Time-extended algebra: polynomial time dependence over a base superalgebra.

Smooth functions of the evolution parameter are modeled as polynomials in
t truncated at a configurable degree bound; multiplication past the bound
sets a sticky overflow flag instead of failing silently.  The augmented
2-form is ``Omega = w~ - dH ^ dt``, whose kernel contains the evolution
derivation ``Y^ = d/dt + {H, .}``; hamiltonians of symmetries solve
``i_Z Omega = -dh`` and are then constants of motion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .superalgebra import Element, Superalgebra
from .forms import DerivationSpace, Form
from .symplectic import SymplecticStructure


class ExtendedError(ValueError):
    """Degree-bound or structure failure in the extended algebra."""


@dataclass
class ExtendedElement:
    """Polynomial sum_k t^k A_k with algebra coefficients, degree <= bound."""

    algebra: Superalgebra
    coeffs: np.ndarray          # shape (bound + 1, dim)
    overflow: bool = False

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.ndim != 2 or self.coeffs.shape[1] != self.algebra.dim:
            raise ExtendedError("coefficients must be (bound + 1, dim)")

    @property
    def bound(self) -> int:
        return self.coeffs.shape[0] - 1

    def _check(self, other: "ExtendedElement"):
        if self.algebra is not other.algebra or self.bound != other.bound:
            raise ExtendedError("operands live in different extended algebras")

    def __add__(self, other: "ExtendedElement") -> "ExtendedElement":
        self._check(other)
        return ExtendedElement(self.algebra, self.coeffs + other.coeffs,
                               self.overflow or other.overflow)

    def __sub__(self, other: "ExtendedElement") -> "ExtendedElement":
        self._check(other)
        return ExtendedElement(self.algebra, self.coeffs - other.coeffs,
                               self.overflow or other.overflow)

    def __rmul__(self, scalar) -> "ExtendedElement":
        return ExtendedElement(self.algebra, complex(scalar) * self.coeffs, self.overflow)

    def __matmul__(self, other: "ExtendedElement") -> "ExtendedElement":
        """Algebra product with polynomial truncation; overflow is sticky."""
        self._check(other)
        D = self.bound
        out = np.zeros_like(self.coeffs)
        overflow = self.overflow or other.overflow
        for k in range(D + 1):
            if not np.any(np.abs(self.coeffs[k])):
                continue
            for l in range(D + 1):
                if not np.any(np.abs(other.coeffs[l])):
                    continue
                prod = self.algebra.multiply_coeffs(self.coeffs[k], other.coeffs[l])
                if k + l <= D:
                    out[k + l] += prod
                elif np.abs(prod).max() > 0:
                    overflow = True
        return ExtendedElement(self.algebra, out, overflow)

    def dt(self) -> "ExtendedElement":
        """Formal time derivative."""
        out = np.zeros_like(self.coeffs)
        for k in range(1, self.bound + 1):
            out[k - 1] = k * self.coeffs[k]
        return ExtendedElement(self.algebra, out, self.overflow)

    def at_time(self, t: float) -> Element:
        powers = np.array([t ** k for k in range(self.bound + 1)])
        return Element(self.algebra, powers @ self.coeffs)

    def norm(self) -> float:
        return float(np.abs(self.coeffs).max(initial=0.0))

    def is_zero(self, tol: float = 1e-9) -> bool:
        return self.norm() <= tol


def extended_element(alg: Superalgebra, parts: List[Element], bound: int) -> ExtendedElement:
    """Build sum_k t^k parts[k] with the given degree bound."""
    if len(parts) > bound + 1:
        raise ExtendedError("more coefficients than the degree bound allows")
    coeffs = np.zeros((bound + 1, alg.dim), dtype=complex)
    for k, p in enumerate(parts):
        coeffs[k] = p.coeffs
    return ExtendedElement(alg, coeffs)


@dataclass(frozen=True)
class ExtendedAlgebra:
    """Convenience wrapper: base algebra with a fixed truncation bound."""

    algebra: Superalgebra
    bound: int

    def element(self, parts: List[Element]) -> ExtendedElement:
        return extended_element(self.algebra, parts, self.bound)

    def constant(self, a: Element) -> ExtendedElement:
        return extended_element(self.algebra, [a], self.bound)

    def t(self) -> ExtendedElement:
        """The time coordinate t times the unit."""
        return extended_element(self.algebra, [self.algebra.zero(), self.algebra.unit()],
                                self.bound)


def build_extended(alg: Superalgebra, bound: int = 4) -> ExtendedAlgebra:
    if bound < 1:
        raise ExtendedError("degree bound must be at least 1")
    return ExtendedAlgebra(alg, bound)


def extended_poisson(s: SymplecticStructure, F: ExtendedElement,
                     G: ExtendedElement) -> ExtendedElement:
    """{F, G} extended by treating t as an external parameter; powers add."""
    F._check(G)
    D = F.bound
    out = np.zeros_like(F.coeffs)
    overflow = F.overflow or G.overflow
    for k in range(D + 1):
        if not np.any(np.abs(F.coeffs[k])):
            continue
        fk = Element(s.algebra, F.coeffs[k])
        for l in range(D + 1):
            if not np.any(np.abs(G.coeffs[l])):
                continue
            val = s.poisson_bracket(fk, Element(s.algebra, G.coeffs[l]))
            if k + l <= D:
                out[k + l] += val.coeffs
            elif val.norm() > 0:
                overflow = True
    return ExtendedElement(s.algebra, out, overflow)


@dataclass
class ExtendedDerivation:
    """c(t) d/dt + sum_k t^k Z_k with Z_k in a base derivation space; even only."""

    space: DerivationSpace
    t_coeff: np.ndarray      # shape (bound + 1,), scalar polynomial c(t)
    coords: np.ndarray       # shape (bound + 1, space.dim)

    def __post_init__(self):
        self.t_coeff = np.asarray(self.t_coeff, dtype=complex)
        self.coords = np.asarray(self.coords, dtype=complex)
        if self.coords.shape != (len(self.t_coeff), self.space.dim):
            raise ExtendedError("coordinate array shape mismatch")
        odd = np.abs(self.coords[:, self.space.parities == 1])
        if odd.size and odd.max() > 1e-12:
            raise ExtendedError("extended derivations here must be even")

    @property
    def bound(self) -> int:
        return len(self.t_coeff) - 1

    def __call__(self, F: ExtendedElement) -> ExtendedElement:
        D = F.bound
        out = np.zeros_like(F.coeffs)
        overflow = F.overflow
        dF = F.dt().coeffs
        for l in range(self.bound + 1):
            if abs(self.t_coeff[l]) > 0:
                for k in range(D + 1):
                    if k + l <= D:
                        out[k + l] += self.t_coeff[l] * dF[k]
                    elif np.abs(dF[k]).max(initial=0.0) * abs(self.t_coeff[l]) > 0:
                        overflow = True
            if np.any(np.abs(self.coords[l])):
                mat = np.einsum("a,aij->ij", self.coords[l], self.space.mats)
                for k in range(D + 1):
                    val = mat @ F.coeffs[k]
                    if k + l <= D:
                        out[k + l] += val
                    elif np.abs(val).max(initial=0.0) > 0:
                        overflow = True
        return ExtendedElement(self.space.algebra, out, overflow)


@dataclass
class ExtendedForm:
    """Polynomial-in-t form with a dt-wedge part: sum t^k a_k + sum t^k (b_k ^ dt)."""

    space: DerivationSpace
    degree: int
    parity: int
    base: List[np.ndarray]            # each (m,)*degree + (dim,)
    dtp: Optional[List[np.ndarray]]   # each (m,)*(degree-1) + (dim,), None for degree 0

    def __post_init__(self):
        if self.degree < 0:
            raise ExtendedError("degree must be non-negative")
        if self.degree == 0 and self.dtp is not None:
            raise ExtendedError("0-forms have no dt part")

    @property
    def bound(self) -> int:
        return len(self.base) - 1

    def norm(self) -> float:
        worst = max((float(np.abs(b).max(initial=0.0)) for b in self.base), default=0.0)
        if self.dtp is not None:
            worst = max(worst, max((float(np.abs(b).max(initial=0.0)) for b in self.dtp), default=0.0))
        return worst

    def __add__(self, other: "ExtendedForm") -> "ExtendedForm":
        base = [a + b for a, b in zip(self.base, other.base)]
        if self.dtp is None and other.dtp is None:
            dtp = None
        else:
            dtp = [a + b for a, b in zip(self.dtp, other.dtp)]
        return ExtendedForm(self.space, self.degree, self.parity, base, dtp)

    def __sub__(self, other: "ExtendedForm") -> "ExtendedForm":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "ExtendedForm":
        base = [complex(scalar) * a for a in self.base]
        dtp = None if self.dtp is None else [complex(scalar) * a for a in self.dtp]
        return ExtendedForm(self.space, self.degree, self.parity, base, dtp)


def _d_base(space: DerivationSpace, comps: np.ndarray, parity: int) -> np.ndarray:
    from .forms import exterior_derivative

    p = comps.ndim - 1
    return exterior_derivative(Form(space, p, parity, comps)).comps


def extended_d(w: ExtendedForm) -> ExtendedForm:
    """Exterior derivative on the product complex.

    d(t^k a) = t^k (d a) + (-1)^deg k t^(k-1) (a ^ dt);
    d(t^k b ^ dt) = t^k (d b) ^ dt.
    """
    space = w.space
    p = w.degree
    D = w.bound
    m, n = space.dim, space.algebra.dim
    base = [np.zeros((m,) * (p + 1) + (n,), dtype=complex) for _ in range(D + 1)]
    dtp = [np.zeros((m,) * p + (n,), dtype=complex) for _ in range(D + 1)]
    for k in range(D + 1):
        if np.any(np.abs(w.base[k])):
            base[k] += _d_base(space, w.base[k], w.parity)
            if k >= 1:
                dtp[k - 1] += (-1.0) ** p * k * w.base[k]
        if w.dtp is not None and np.any(np.abs(w.dtp[k])):
            dtp[k] += _d_base(space, w.dtp[k], w.parity)
    return ExtendedForm(space, p + 1, w.parity, base, dtp)


def extended_interior(z: ExtendedDerivation, w: ExtendedForm) -> ExtendedForm:
    """Contraction with an even extended derivation.

    i_Z(t^k a) uses the base contraction; i_Z(b ^ dt) = (i_Z b) ^ dt
    + (-1)^deg(b) dt(Z) b, with dt(Z) = c(t).
    """
    space = w.space
    p = w.degree
    if p == 0:
        raise ExtendedError("cannot contract a 0-form")
    D = w.bound
    m, n = space.dim, space.algebra.dim
    base = [np.zeros((m,) * (p - 1) + (n,), dtype=complex) for _ in range(D + 1)]
    dtp = None if p == 1 else [np.zeros((m,) * (p - 2) + (n,), dtype=complex) for _ in range(D + 1)]

    def add_power(target, k, arr):
        if k <= D:
            target[k] += arr
        elif np.abs(arr).max(initial=0.0) > 1e-15:
            raise ExtendedError("degree bound exceeded during contraction")

    for k in range(D + 1):
        if np.any(np.abs(w.base[k])):
            for l in range(z.bound + 1):
                if np.any(np.abs(z.coords[l])):
                    contracted = np.tensordot(z.coords[l], w.base[k], axes=(0, 0))
                    add_power(base, k + l, contracted)
        if w.dtp is not None and np.any(np.abs(w.dtp[k])):
            beta = w.dtp[k]
            pb = beta.ndim - 1
            for l in range(z.bound + 1):
                if pb >= 1 and np.any(np.abs(z.coords[l])):
                    add_power(dtp, k + l, np.tensordot(z.coords[l], beta, axes=(0, 0)))
                if abs(z.t_coeff[l]) > 0:
                    add_power(base, k + l, (-1.0) ** pb * z.t_coeff[l] * beta)
    return ExtendedForm(space, p - 1, w.parity, base, dtp)


# -- the augmented structures -------------------------------------------------


def lift_form(s: SymplecticStructure, bound: int) -> ExtendedForm:
    m, n = s.space.dim, s.algebra.dim
    base = [np.zeros((m, m, n), dtype=complex) for _ in range(bound + 1)]
    base[0] = s.omega.comps.copy()
    dtp = [np.zeros((m, n), dtype=complex) for _ in range(bound + 1)]
    return ExtendedForm(s.space, 2, 0, base, dtp)


def _d2_of_even(s: SymplecticStructure, coeffs: np.ndarray) -> np.ndarray:
    """(d A)(X_b) = X_b(A) for even A, as 1-form components."""
    return np.einsum("bij,j->bi", s.space.mats, coeffs)


def presymplectic_omega(s: SymplecticStructure, H: ExtendedElement) -> ExtendedForm:
    """Omega = w~ - dH ^ dt for an even hermitian polynomial Hamiltonian."""
    from .superalgebra import is_hermitian

    D = H.bound
    for k in range(D + 1):
        hk = Element(s.algebra, H.coeffs[k])
        if hk.homogeneous_parity() != 0 or not is_hermitian(hk, 1e-8):
            raise ExtendedError("Hamiltonian coefficients must be even hermitian")
    omega = lift_form(s, D)
    for k in range(D + 1):
        omega.dtp[k] = omega.dtp[k] - _d2_of_even(s, H.coeffs[k])
    return omega


def poincare_cartan(s: SymplecticStructure, H: ExtendedElement) -> Optional[ExtendedForm]:
    """Theta = theta~ - H dt when the base structure is exact, else None."""
    pot = s.compute_potential()
    if pot is None:
        return None
    D = H.bound
    m, n = s.space.dim, s.algebra.dim
    base = [np.zeros((m, n), dtype=complex) for _ in range(D + 1)]
    base[0] = pot.comps.copy()
    dtp = [-H.coeffs[k].copy() for k in range(D + 1)]
    return ExtendedForm(s.space, 1, 0, base, dtp)


def evolution_derivation(s: SymplecticStructure, H: ExtendedElement) -> ExtendedDerivation:
    """Y^ = d/dt + sum_k t^k Y_{H_k}; satisfies dt(Y^) = 1 and i_Y^ Omega = 0."""
    D = H.bound
    coords = np.zeros((D + 1, s.space.dim), dtype=complex)
    for k in range(D + 1):
        if np.any(np.abs(H.coeffs[k])):
            coords[k] = s.hamiltonian_coords(Element(s.algebra, H.coeffs[k]))
    t_coeff = np.zeros(D + 1, dtype=complex)
    t_coeff[0] = 1.0
    return ExtendedDerivation(s.space, t_coeff, coords)


def hamilton_extended(s: SymplecticStructure, H: ExtendedElement,
                      F: ExtendedElement) -> ExtendedElement:
    """dF/dt along the flow: dF/dt = dF/dt|_explicit + {H, F}."""
    return F.dt() + extended_poisson(s, H, F)


def noether_check(
    s: SymplecticStructure,
    H: ExtendedElement,
    zhat: ExtendedDerivation,
    tol: float = 1e-8,
) -> dict:
    """Solve i_Z Omega = -dh for the invariant h and test conservation.

    Returns a report with keys: closed (d(i_Z Omega) = 0), exact, invariant
    (ExtendedElement or None), conserved, residuals.
    """
    omega = presymplectic_omega(s, H)
    iota = extended_interior(zhat, omega)
    report: dict = {}
    closed_resid = extended_d(iota).norm()
    report["closed_residual"] = float(closed_resid)
    report["closed"] = closed_resid <= max(tol, 1e-8) * max(1.0, iota.norm())
    if not report["closed"]:
        report["exact"] = False
        report["invariant"] = None
        report["conserved"] = False
        return report

    D = H.bound
    m, n = s.space.dim, s.algebra.dim
    apar = s.algebra.parity
    # unknown h: (D+1) x dim; equations: base part t^k: (dh_k)(X_b) = -iota.base[k]
    # and dt part t^k: (k+1) h_{k+1} = -iota.dtp[k]
    dmat = np.zeros((m * n, n), dtype=complex)
    for p in (0, 1):
        proj = np.diag((apar == p).astype(float))
        sgn = np.where((s.space.parities * p) % 2 == 1, -1.0, 1.0)
        dmat += np.einsum("b,bij,jk->bik", sgn, s.space.mats, proj).reshape(m * n, n)
    rows = []
    rhs = []
    for k in range(D + 1):
        block = np.zeros((m * n, (D + 1) * n), dtype=complex)
        block[:, k * n:(k + 1) * n] = dmat
        rows.append(block)
        rhs.append(-iota.base[k].reshape(-1))
    for k in range(D):
        block = np.zeros((n, (D + 1) * n), dtype=complex)
        block[:, (k + 1) * n:(k + 2) * n] = (k + 1) * np.eye(n)
        rows.append(block)
        rhs.append(-iota.dtp[k])
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = float(np.linalg.norm(A @ sol - b))
    report["exact_residual"] = resid
    exact = resid <= tol * max(1.0, float(np.linalg.norm(b)))
    report["exact"] = bool(exact)
    if not exact:
        report["invariant"] = None
        report["conserved"] = False
        return report
    h = ExtendedElement(s.algebra, sol.reshape(D + 1, n))
    report["invariant"] = h
    drift = hamilton_extended(s, H, h)
    report["conservation_residual"] = float(drift.norm())
    report["overflow"] = bool(drift.overflow)
    report["conserved"] = bool(drift.norm() <= max(tol, 1e-8) and not drift.overflow)
    return report
