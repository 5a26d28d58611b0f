"""Symplectic structures on superalgebras and their Poisson brackets.

A symplectic form is an even, closed, nondegenerate 2-form; nondegeneracy
means every ``-dA`` has a unique preimage under ``Y -> i_Y w`` inside the
chosen derivation space.  Sign conventions follow the source formalism:
the bracket is ``{A, B} = w(Y_A, Y_B) = Y_A(B)``, which differs from the
textbook classical bracket by an overall minus sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .superalgebra import Element, Superalgebra, supercommutator
from .derivations import (
    Superderivation,
    element_for_inner,
    is_special,
)
from .forms import (
    DerivationSpace,
    Form,
    exterior_derivative,
    form_star,
    full_sder_space,
    zero_form,
)


class SymplecticError(ValueError):
    """Raised when a would-be symplectic structure fails an invariant."""

    def __init__(self, reason: str, witness=None, message: str = ""):
        self.reason = reason      # not-even | not-closed | not-real | degenerate
        self.witness = witness
        super().__init__(message or reason)


@dataclass
class SymplecticStructure:
    """Validated symplectic (or presymplectic-checked) structure with solver."""

    space: DerivationSpace
    omega: Form
    flat_matrix: np.ndarray = field(init=False, repr=False)
    _flat_pinv: np.ndarray = field(init=False, repr=False)
    potential: Optional[Form] = None
    reality: str = "real"     # real | imaginary | none
    tol: float = 1e-9

    def __post_init__(self):
        # flat map: Y = sum y_a X_a  ->  (i_Y w)[b] = sum_a y_a C[a, b]
        m, n = self.space.dim, self.space.algebra.dim
        F = self.omega.comps.transpose(1, 2, 0).reshape(m * n, m)
        self.flat_matrix = F
        self._flat_pinv = np.linalg.pinv(F)

    @property
    def algebra(self) -> Superalgebra:
        return self.space.algebra

    # -- solving -------------------------------------------------------

    def _rhs(self, a_coeffs: np.ndarray) -> np.ndarray:
        """Stacked components of -dA; (dA)(X_b) = (-1)^(eps_b eps_A) X_b(A)."""
        dA = np.zeros((self.space.dim, self.algebra.dim), dtype=complex)
        apar = self.algebra.parity
        for p in (0, 1):
            part = np.where(apar == p, a_coeffs, 0.0)
            if not np.any(np.abs(part)):
                continue
            sgn = np.where((self.space.parities * p) % 2 == 1, -1.0, 1.0)
            dA += sgn[:, None] * np.einsum("bij,j->bi", self.space.mats, part)
        return (-dA).reshape(-1)

    def hamiltonian_coords(self, a: Element, tol: Optional[float] = None) -> np.ndarray:
        """Coordinates of Y_A in the space basis; raises if no exact solution."""
        tol = self.tol if tol is None else tol
        rhs = self._rhs(a.coeffs)
        y = self._flat_pinv @ rhs
        resid = np.linalg.norm(self.flat_matrix @ y - rhs)
        if resid > tol * max(1.0, np.linalg.norm(rhs)):
            raise SymplecticError(
                "degenerate", witness=a,
                message=f"no Hamiltonian derivation, residual {resid:.3e}",
            )
        return y

    def hamiltonian_derivation(self, a: Element) -> Superderivation:
        """Unique Y with i_Y w = -dA; parity of Y matches a homogeneous A."""
        p = a.homogeneous_parity()
        y = self.hamiltonian_coords(a)
        mat = np.einsum("a,aij->ij", y, self.space.mats)
        if p is None:
            pars = set(int(self.space.parities[k]) for k in np.flatnonzero(np.abs(y) > 1e-10))
            p = pars.pop() if len(pars) == 1 else 0
        return Superderivation(self.algebra, mat, p)

    def poisson_bracket(self, a: Element, b: Element) -> Element:
        """{A, B} = Y_A(B), extended bilinearly over the parity parts of A."""
        out = np.zeros(self.algebra.dim, dtype=complex)
        for p in (0, 1):
            ap = a.parity_part(p)
            if ap.is_zero(0.0):
                continue
            y = self.hamiltonian_coords(ap)
            mat = np.einsum("a,aij->ij", y, self.space.mats)
            out += mat @ b.coeffs
        return Element(self.algebra, out)

    def check_canonical_pair(self, a: Element, b: Element, tol: Optional[float] = None) -> bool:
        tol = self.tol if tol is None else tol
        return (self.poisson_bracket(a, b) - self.algebra.unit()).is_zero(tol)

    def compute_potential(self) -> Optional[Form]:
        """Solve d theta = omega when the structure is exact; cached."""
        if self.potential is None:
            self.potential = _try_potential(self.space, self.omega, self.tol)
        return self.potential


def verify_symplectic(
    space: DerivationSpace,
    omega: Form,
    tol: float = 1e-9,
    require_real: bool = True,
) -> SymplecticStructure:
    """Validate evenness, closedness, reality and nondegeneracy.

    Raises SymplecticError naming the broken invariant; the degeneracy
    witness is the first basis element whose system fails, together with
    the failure mode (no solution vs non-unique).
    """
    if omega.degree != 2:
        raise SymplecticError("not-even", message="symplectic forms must have degree 2")
    if omega.parity % 2 != 0 or omega.parity_residual() > tol:
        raise SymplecticError("not-even", message="form is not even")
    r = omega.antisymmetry_residual()
    if r > tol:
        raise SymplecticError("not-even", message=f"graded antisymmetry residual {r:.3e}")
    d = exterior_derivative(omega)
    if d.norm() > tol * max(1.0, omega.norm()):
        raise SymplecticError("not-closed", message=f"dw residual {d.norm():.3e}")
    st = form_star(omega)
    scale = max(1.0, omega.norm())
    real_res = (st - omega).norm() / scale
    imag_res = (st + omega).norm() / scale
    reality = "real" if real_res <= tol else ("imaginary" if imag_res <= tol else "none")
    if require_real and reality != "real":
        raise SymplecticError("not-real", message=f"w* != w, residual {real_res:.3e}")

    struct = SymplecticStructure(space, omega, reality=reality, tol=tol)
    # uniqueness: full column rank of the flat matrix
    svals = np.linalg.svd(struct.flat_matrix, compute_uv=False)
    if svals.size == 0 or svals[-1] <= 1e-7 * max(svals[0], 1.0):
        raise SymplecticError(
            "degenerate", witness=("kernel", None),
            message="flat map has nontrivial kernel (non-unique solutions)",
        )
    # existence: every -d e_k lies in the column range
    for k in range(space.algebra.dim):
        e = space.algebra.basis_element(k)
        try:
            struct.hamiltonian_coords(e)
        except SymplecticError:
            raise SymplecticError(
                "degenerate", witness=("no-solution", space.algebra.labels[k]),
                message=f"no Hamiltonian derivation for basis element {space.algebra.labels[k]}",
            )
    return struct


def _try_potential(space: DerivationSpace, omega: Form, tol: float) -> Optional[Form]:
    """Solve d theta = omega by least squares over 1-form components."""
    m, n = space.dim, space.algebra.dim
    cols = []
    for v in np.eye(m * n):
        theta = Form(space, 1, omega.parity, v.reshape(m, n))
        cols.append(exterior_derivative(theta).comps.reshape(-1))
    A = np.array(cols).T
    b = omega.comps.reshape(-1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.linalg.norm(A @ sol - b) > tol * max(1.0, np.linalg.norm(b)):
        return None
    return Form(space, 1, omega.parity, sol.reshape(m, n))


# -- canonical and quantum structures ---------------------------------------


def canonical_two_form(alg: Superalgebra, space: Optional[DerivationSpace] = None,
                       tol: float = 1e-9) -> Tuple[DerivationSpace, Form]:
    """Canonical 2-form w_c(D_A, D_B) = [A, B] on a special superalgebra."""
    space = full_sder_space(alg) if space is None else space
    if not is_special(alg, list(space.basis)):
        raise SymplecticError(
            "not-special",
            message=f"{alg.name} is not special (outer superderivations or supercommutative)",
        )
    reps = [element_for_inner(alg, d) for d in space.basis]
    m = space.dim
    comps = np.empty((m, m, alg.dim), dtype=complex)
    for a in range(m):
        for b in range(m):
            comps[a, b] = supercommutator(reps[a], reps[b]).coeffs
    return space, Form(space, 2, 0, comps).validate(max(tol, 1e-8))


def canonical_form(alg: Superalgebra, tol: float = 1e-9) -> SymplecticStructure:
    """Validated canonical structure; w_c is imaginary, not real."""
    space, wc = canonical_two_form(alg, tol=tol)
    return verify_symplectic(space, wc, tol=tol, require_real=False)


def quantum_form(alg: Superalgebra, hbar: float = 1.0, b: Optional[complex] = None,
                 tol: float = 1e-9) -> SymplecticStructure:
    """Quantum structure b * w_c with imaginary b (default b = -i hbar); real."""
    space, wc = canonical_two_form(alg, tol=tol)
    scale = complex(b) if b is not None else -1j * hbar
    if abs(scale.real) > tol * abs(scale):
        raise SymplecticError("not-real", message="quantum parameter must be imaginary")
    return verify_symplectic(space, Form(space, 2, 0, scale * wc.comps), tol=tol)


def fermionic_form(alg: Superalgebra, n_gen: int, tol: float = 1e-9) -> SymplecticStructure:
    """Structure with w(d_i, d_j) = i delta_ij I on a Grassmann algebra.

    Built as -(i/2) sum_k d(theta_k) ^ d(theta_k) over the full derivation
    module, so it is exact with potential -(i/2) sum theta_k d(theta_k).
    """
    from .forms import form_from_element, wedge

    space = full_sder_space(alg)
    total = zero_form(space, 2, 0)
    pot = zero_form(space, 1, 0)
    for k in range(n_gen):
        theta = alg.basis_element(1 << k)  # generator masks are single bits
        dtheta = exterior_derivative(form_from_element(space, theta))
        total = total + (-0.5j) * wedge(dtheta, dtheta)
        pot = pot + (-0.5j) * wedge(form_from_element(space, theta), dtheta)
    struct = verify_symplectic(space, total, tol=tol)
    struct.potential = pot
    return struct


# -- properties used by the verification battery -----------------------------


def hamiltonian_homomorphism_residual(
    s: SymplecticStructure, a: Element, b: Element
) -> float:
    """|| [Y_A, Y_B] - Y_{A,B} || for homogeneous a, b."""
    from .derivations import bracket

    ya = s.hamiltonian_derivation(a)
    yb = s.hamiltonian_derivation(b)
    lhs = bracket(ya, yb)
    rhs = s.hamiltonian_derivation(s.poisson_bracket(a, b))
    return float(np.abs(lhs.matrix - rhs.matrix).max())


def super_jacobi_residual(s: SymplecticStructure, a: Element, b: Element, c: Element) -> float:
    """Graded Jacobi cycle of the Poisson bracket on homogeneous inputs."""
    ea = a.homogeneous_parity()
    eb = b.homogeneous_parity()
    ec = c.homogeneous_parity()
    if None in (ea, eb, ec):
        raise ValueError("super-Jacobi check needs homogeneous elements")
    pb = s.poisson_bracket
    t1 = pb(a, pb(b, c))
    t2 = (-1.0) ** (ea * (eb + ec)) * pb(b, pb(c, a))
    t3 = (-1.0) ** (ec * (ea + eb)) * pb(c, pb(a, b))
    return (t1 + t2 + t3).norm()
