"""Superderivations of a finite-dimensional superalgebra.

A homogeneous superderivation X obeys the graded Leibniz rule
``X(AB) = X(A)B + (-1)^(eps_X eps_A) A X(B)``; equivalently
``X o mu(A) - (-1)^(eps_X eps_A) mu(A) o X = mu(X(A))`` on every basis
element, which is the linear system the basis solver encodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from .superalgebra import (
    AlgebraError,
    Element,
    Superalgebra,
    canonical_rows,
    supercommutator_matrix,
)


class DerivationError(ValueError):
    """A map failed the graded Leibniz test or a parity constraint."""


class IsomorphismError(ValueError):
    """A proposed map is not a *-isomorphism."""


@dataclass(frozen=True)
class Superderivation:
    """Homogeneous superderivation as an endomorphism of coefficient space."""

    algebra: Superalgebra
    matrix: np.ndarray
    parity: int

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))
        object.__setattr__(self, "parity", int(self.parity) % 2)
        if self.matrix.shape != (self.algebra.dim, self.algebra.dim):
            raise DerivationError("matrix shape does not match algebra dimension")

    def __call__(self, a: Element) -> Element:
        if a.algebra is not self.algebra:
            raise DerivationError("argument from a different algebra")
        return Element(self.algebra, self.matrix @ a.coeffs)

    def apply_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        return self.matrix @ coeffs

    def __add__(self, other: "Superderivation") -> "Superderivation":
        if self.parity != other.parity:
            raise DerivationError("cannot add superderivations of different parity")
        return Superderivation(self.algebra, self.matrix + other.matrix, self.parity)

    def __rmul__(self, scalar) -> "Superderivation":
        return Superderivation(self.algebra, complex(scalar) * self.matrix, self.parity)

    def __neg__(self) -> "Superderivation":
        return Superderivation(self.algebra, -self.matrix, self.parity)

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    def leibniz_residual(self) -> float:
        return leibniz_residual(self.algebra, self.matrix, self.parity)

    def parity_residual(self) -> float:
        alg = self.algebra
        bad = 0.0
        for i in range(alg.dim):
            target = (alg.parity[i] + self.parity) % 2
            off = self.matrix[alg.parity != target, i]
            if off.size:
                bad = max(bad, float(np.abs(off).max()))
        return bad

    def validate(self, tol: float = 1e-9) -> "Superderivation":
        r = self.leibniz_residual()
        if r > tol:
            raise DerivationError(f"graded Leibniz residual {r:.3e} exceeds {tol:.1e}")
        p = self.parity_residual()
        if p > tol:
            raise DerivationError(f"parity consistency residual {p:.3e} exceeds {tol:.1e}")
        return self


def leibniz_residual(alg: Superalgebra, X: np.ndarray, parity: int) -> float:
    """Max-norm residual of the graded Leibniz identity over all basis elements."""
    L = alg._left_mul
    # X L_i - (-1)^(eps eps_i) L_i X - sum_k X[k,i] L_k, for each i
    t1 = np.einsum("ab,ibc->iac", X, L)
    t2 = np.einsum("iab,bc->iac", L, X)
    signs = np.where(alg.parity == 0, 1.0, (-1.0) ** (parity % 2))
    t2 = signs[:, None, None] * t2
    t3 = np.einsum("ki,kac->iac", X, L)
    return float(np.abs(t1 - t2 - t3).max())


def bracket(x: Superderivation, y: Superderivation) -> Superderivation:
    """Supercommutator [X, Y] = XY - (-1)^(eps_X eps_Y) YX."""
    if x.algebra is not y.algebra:
        raise DerivationError("brackets need a common algebra")
    sign = -1.0 if (x.parity * y.parity) % 2 else 1.0
    m = x.matrix @ y.matrix - sign * y.matrix @ x.matrix
    return Superderivation(x.algebra, m, (x.parity + y.parity) % 2)


def inner(a: Element, parity: Optional[int] = None) -> Superderivation:
    """Inner superderivation D_A(B) = [A, B] for homogeneous A."""
    p = a.homogeneous_parity() if parity is None else parity
    if p is None:
        raise DerivationError("mixed-parity element; build one inner derivation per part")
    m = supercommutator_matrix(a.algebra, a.coeffs, p)
    return Superderivation(a.algebra, m, p)


def inner_pair(a: Element) -> Tuple[Superderivation, Superderivation]:
    """Even and odd inner superderivations of a possibly mixed element."""
    return inner(a.parity_part(0), 0), inner(a.parity_part(1), 1)


def sder_star(x: Superderivation) -> Superderivation:
    """Involution on superderivations.

    Defined so that it maps superderivations to superderivations under the
    convention (AB)* = B*A*: X*(A) = (-1)^(eps_X eps_A) [X(A*)]*.  Satisfies
    X** = X, [X,Y]* = [X*,Y*] and (D_A)* = -D_{A*}.
    """
    alg = x.algebra
    S = alg.involution
    m = S.T @ x.matrix.conj() @ S.conj().T
    if x.parity % 2:
        m = m @ np.diag(alg.parity_sign)
    return Superderivation(alg, m, x.parity)


# -- basis of SDer ----------------------------------------------------------


def _leibniz_operator(alg: Superalgebra, parity: int) -> sp.csr_matrix:
    """Sparse matrix of the Leibniz constraints acting on vec(X), X row-major.

    Constraint block i, entry (a, c):
        sum_m X[a,m] L_i[m,c] - sign_i sum_m L_i[a,m] X[m,c] - sum_k X[k,i] L_k[a,c] = 0
    """
    n = alg.dim
    L = alg._left_mul
    sign = np.where(alg.parity == 0, 1.0, (-1.0) ** parity)
    nz = np.argwhere(np.abs(L) > 0)
    I, A_, B_ = nz[:, 0], nz[:, 1], nz[:, 2]
    V = L[I, A_, B_]
    rng = np.arange(n)

    # term 1: nonzero L[i, m, c]; rows (i, a, c) over all a; unknown (a, m)
    r1 = ((I[:, None] * n + rng[None, :]) * n + B_[:, None]).ravel()
    c1 = (rng[None, :] * n + A_[:, None]).ravel()
    d1 = np.repeat(V, n)
    # term 2: nonzero L[i, a, m]; rows (i, a, c) over all c; unknown (m, c)
    r2 = ((I[:, None] * n + A_[:, None]) * n + rng[None, :]).ravel()
    c2 = (B_[:, None] * n + rng[None, :]).ravel()
    d2 = np.repeat(-sign[I] * V, n)
    # term 3: nonzero L[k, a, c]; rows (i, a, c) over all i; unknown (k, i)
    r3 = ((rng[None, :] * n + A_[:, None]) * n + B_[:, None]).ravel()
    c3 = (I[:, None] * n + rng[None, :]).ravel()
    d3 = np.repeat(-V, n)

    A = sp.coo_matrix(
        (np.concatenate([d1, d2, d3]),
         (np.concatenate([r1, r2, r3]), np.concatenate([c1, c2, c3]))),
        shape=(n ** 3, n ** 2),
    )
    return A.tocsr()


def _parity_pattern_columns(alg: Superalgebra, parity: int) -> np.ndarray:
    """Flat indices (row-major (k, i)) allowed for a parity-``parity`` map."""
    n = alg.dim
    k_par = alg.parity[:, None]
    i_par = alg.parity[None, :]
    allowed = (k_par == (i_par + parity) % 2)
    return np.flatnonzero(allowed.reshape(-1))


def sder_basis(
    alg: Superalgebra,
    tol: Optional[float] = None,
    rank_rtol: float = 1e-7,
) -> List[Superderivation]:
    """Orthonormal basis of SDer, even part first, deterministic phases.

    Solves the Leibniz constraint system per parity sector; the null space
    is found from the Gram matrix of the sparse constraint operator, with
    singular values below ``rank_rtol`` times the largest treated as zero.
    """
    from scipy.linalg import eigh

    tol = alg.tol if tol is None else tol
    out: List[Superderivation] = []
    n = alg.dim
    for parity in (0, 1):
        cols = _parity_pattern_columns(alg, parity)
        if cols.size == 0:
            continue
        A = _leibniz_operator(alg, parity)[:, cols]
        G = (A.conj().T @ A).toarray()
        G = 0.5 * (G + G.conj().T)
        scale = max(float(np.linalg.norm(G)), 1.0)  # Frobenius bound on lambda_max
        cut = (rank_rtol ** 2) * scale
        res = eigh(G, subset_by_value=(-cut, cut))
        null = res[1]
        if null.shape[1] == 0:
            continue
        basis = canonical_rows(null.T)
        for row in basis:
            X = np.zeros(n * n, dtype=complex)
            X[cols] = row
            d = Superderivation(alg, X.reshape(n, n), parity)
            d.validate(max(tol, 1e-8))
            out.append(d)
    return out


def sder_dimensions(basis: List[Superderivation]) -> Tuple[int, int]:
    even = sum(1 for d in basis if d.parity == 0)
    return even, len(basis) - even


def projection_coords(
    basis: List[Superderivation], X: np.ndarray
) -> Tuple[np.ndarray, float]:
    """Coordinates of a matrix in the span of an orthonormal derivation basis.

    Returns (coords, residual of the orthogonal projection).
    """
    mats = np.array([d.matrix for d in basis])
    flat = mats.reshape(len(basis), -1)
    v = X.reshape(-1)
    coords = flat.conj() @ v
    resid = v - flat.T @ coords
    return coords, float(np.linalg.norm(resid))


def inner_derivations_span(alg: Superalgebra) -> np.ndarray:
    """Row-stacked matrices of the inner derivations D_{e_i}."""
    mats = []
    for i in range(alg.dim):
        e = np.zeros(alg.dim)
        e[i] = 1.0
        mats.append(supercommutator_matrix(alg, e, int(alg.parity[i])).reshape(-1))
    return np.array(mats)


def is_special(alg: Superalgebra, basis: Optional[List[Superderivation]] = None,
               rank_rtol: float = 1e-7) -> bool:
    """True if the algebra is non-supercommutative with all superderivations inner."""
    if alg.is_supercommutative():
        return False
    basis = sder_basis(alg) if basis is None else basis
    inner_rows = inner_derivations_span(alg)
    rank_inner = np.linalg.matrix_rank(inner_rows, tol=rank_rtol * max(1.0, np.abs(inner_rows).max()))
    return rank_inner == len(basis)


def element_for_inner(alg: Superalgebra, X: Superderivation,
                      tol: float = 1e-8) -> Element:
    """Solve D_A = X for A (defined modulo the graded center)."""
    rows = inner_derivations_span(alg)  # shape (dim, dim*dim)
    sol, *_ = np.linalg.lstsq(rows.T, X.matrix.reshape(-1), rcond=None)
    resid = np.linalg.norm(rows.T @ sol - X.matrix.reshape(-1))
    if resid > tol:
        raise DerivationError(f"derivation is not inner, residual {resid:.3e}")
    return Element(alg, sol)


# -- induced maps ------------------------------------------------------------


def verify_star_isomorphism(
    src: Superalgebra, dst: Superalgebra, phi: np.ndarray, tol: float = 1e-9
) -> None:
    """Check product, unit, parity and star preservation on all basis pairs."""
    phi = np.asarray(phi, dtype=complex)
    if src.dim != dst.dim or phi.shape != (src.dim, src.dim):
        raise IsomorphismError("dimension mismatch")
    if abs(np.linalg.det(phi)) < 1e-12:
        raise IsomorphismError("map is not invertible")
    # products: phi(e_i e_j) = phi(e_i) phi(e_j)
    lhs = np.einsum("ijm,km->ijk", src.structure, phi)
    rhs = np.einsum("mi,nj,mnk->ijk", phi, phi, dst.structure)
    r = np.abs(lhs - rhs).max()
    if r > tol:
        raise IsomorphismError(f"not multiplicative, residual {r:.3e}")
    unit = phi @ np.eye(src.dim)[src.unit_index]
    expect = np.eye(dst.dim)[dst.unit_index]
    if np.abs(unit - expect).max() > tol:
        raise IsomorphismError("unit is not preserved")
    for i in range(src.dim):
        col = phi[:, i]
        off = col[dst.parity != src.parity[i]]
        if off.size and np.abs(off).max() > tol:
            raise IsomorphismError("parity is not preserved")
    # star: phi(a*) = (phi(a))*  <=>  phi S_src^T conj = S_dst^T conj phi
    lhs_m = phi @ src.star_matrix()
    rhs_m = dst.star_matrix() @ phi.conj()
    if np.abs(lhs_m - rhs_m).max() > tol:
        raise IsomorphismError("star is not preserved")


def pushforward(
    phi: np.ndarray,
    x: Superderivation,
    dst: Optional[Superalgebra] = None,
    tol: float = 1e-9,
    verified: bool = False,
) -> Superderivation:
    """Induced map on superderivations: (phi_* X)(B) = phi(X(phi^{-1}(B)))."""
    dst = x.algebra if dst is None else dst
    if not verified:
        verify_star_isomorphism(x.algebra, dst, phi, tol)
    m = phi @ x.matrix @ np.linalg.inv(phi)
    return Superderivation(dst, m, x.parity)


def conjugation_automorphism(alg: Superalgebra, u: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Coefficient-space matrix of A -> u A u^{-1} for a unitary u on a model algebra."""
    if alg.model is None:
        raise AlgebraError("conjugation automorphism needs a matrix model")
    u = np.asarray(u, dtype=complex)
    uinv = np.linalg.inv(u)
    cols = [alg.coeffs_from_model(u @ alg.model[i] @ uinv) for i in range(alg.dim)]
    phi = np.array(cols).T
    verify_star_isomorphism(alg, alg, phi, tol)
    return phi
