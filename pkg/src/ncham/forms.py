"""Cochain calculus over a chosen space of superderivations.

Forms of degree p and parity s are stored as full graded-antisymmetric
component tensors over a C-basis of a bracket-closed derivation space,
component ``C[i1..ip]`` being the algebra element ``w(X_i1, .., X_ip)``.
Permuting two adjacent homogeneous arguments flips the sign times the
Koszul factor ``(-1)^(eps_X eps_Y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .superalgebra import Element, Superalgebra, graded_center
from .derivations import Superderivation, bracket


class FormError(ValueError):
    """A cochain violated antisymmetry, parity or span preconditions."""


class SpanError(ValueError):
    """An argument does not lie in the derivation space."""


# -- derivation spaces -------------------------------------------------------


@dataclass
class DerivationSpace:
    """C-basis of a bracket-closed Lie sub-superalgebra of SDer.

    Stores the expansion of all basis brackets ("closure constants") and,
    when the basis is star-closed, the star coordinates.
    """

    algebra: Superalgebra
    basis: Tuple[Superderivation, ...]
    tol: float = 1e-8
    mats: np.ndarray = field(init=False, repr=False)
    parities: np.ndarray = field(init=False, repr=False)
    closure: np.ndarray = field(init=False, repr=False)
    _pinv: np.ndarray = field(init=False, repr=False)
    _star_coords: Optional[np.ndarray] = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self.basis = tuple(self.basis)
        if not self.basis:
            raise FormError("derivation space needs at least one basis element")
        self.mats = np.array([d.matrix for d in self.basis])
        self.parities = np.array([d.parity for d in self.basis], dtype=int)
        flat = self.mats.reshape(len(self.basis), -1)
        self._pinv = np.linalg.pinv(flat.T)
        self.closure = self._closure_constants()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, X, tol: Optional[float] = None) -> np.ndarray:
        """Coordinates of a derivation (or raw matrix) in the basis span."""
        tol = self.tol if tol is None else tol
        M = X.matrix if isinstance(X, Superderivation) else np.asarray(X, dtype=complex)
        v = M.reshape(-1)
        c = self._pinv @ v
        resid = np.linalg.norm(self.mats.reshape(self.dim, -1).T @ c - v)
        if resid > tol * max(1.0, np.linalg.norm(v)):
            raise SpanError(f"derivation lies outside the space, residual {resid:.3e}")
        return c

    def coords_or_project(self, M: np.ndarray) -> np.ndarray:
        """Least-squares coordinates without the span check (orthogonal extension)."""
        return self._pinv @ np.asarray(M, dtype=complex).reshape(-1)

    def from_coords(self, c: np.ndarray, parity: Optional[int] = None) -> Superderivation:
        c = np.asarray(c, dtype=complex)
        m = np.einsum("a,aij->ij", c, self.mats)
        if parity is None:
            pars = set(int(self.parities[a]) for a in np.flatnonzero(np.abs(c) > 1e-12))
            if len(pars) > 1:
                raise FormError("coordinates mix parities; pass parity explicitly")
            parity = pars.pop() if pars else 0
        return Superderivation(self.algebra, m, parity)

    def _closure_constants(self) -> np.ndarray:
        m = self.dim
        flat = np.empty((m, m, self.algebra.dim ** 2), dtype=complex)
        for a in range(m):
            for b in range(m):
                flat[a, b] = bracket(self.basis[a], self.basis[b]).matrix.reshape(-1)
        coeffs = np.einsum("ck,abk->abc", self._pinv, flat)
        recon = np.einsum("abc,ck->abk", coeffs, self.mats.reshape(m, -1))
        resid = np.abs(recon - flat).max()
        if resid > self.tol * max(1.0, np.abs(flat).max()):
            raise FormError(f"basis is not bracket-closed, residual {resid:.3e}")
        return coeffs

    def star_coords(self) -> np.ndarray:
        """T with X_a* = sum_b T[b, a] X_b; requires a star-closed space."""
        if self._star_coords is None:
            from .derivations import sder_star

            cols = []
            for d in self.basis:
                cols.append(self.coords(sder_star(d)))
            self._star_coords = np.array(cols).T
        return self._star_coords

    def is_center_module_closed(self) -> bool:
        try:
            self._center_module_residual(raise_on_fail=True)
        except SpanError:
            return False
        return True

    def _center_module_residual(self, raise_on_fail: bool = False) -> float:
        worst = 0.0
        for K in graded_center(self.algebra):
            LK = self.algebra.left_mul_matrix(K)
            for d in self.basis:
                try:
                    self.coords(LK @ d.matrix)
                except SpanError:
                    if raise_on_fail:
                        raise
                    worst = np.inf
        return worst


def full_sder_space(alg: Superalgebra, tol: float = 1e-8) -> DerivationSpace:
    from .derivations import sder_basis

    return DerivationSpace(alg, tuple(sder_basis(alg)), tol=tol)


def space_from_generators(
    alg: Superalgebra,
    gens: Sequence[Superderivation],
    close_under_center: bool = False,
    tol: float = 1e-8,
) -> DerivationSpace:
    """Span of the generators, optionally closed as a module over the graded center."""
    from .superalgebra import canonical_rows

    mats = [g.matrix for g in gens]
    pars = [g.parity for g in gens]
    if close_under_center:
        center = graded_center(alg)
        for K, kp in zip(center, _center_parities(alg, center)):
            LK = alg.left_mul_matrix(K)
            for g in gens:
                mats.append(LK @ g.matrix)
                pars.append((g.parity + kp) % 2)
    # split by parity, orthonormalize deterministically
    basis = []
    for p in (0, 1):
        rows = [m.reshape(-1) for m, q in zip(mats, pars) if q == p]
        if not rows:
            continue
        rows = np.array(rows)
        rank = np.linalg.matrix_rank(rows, tol=1e-10 * max(1.0, np.abs(rows).max()))
        sel = canonical_rows(_row_space(rows, rank))
        for v in sel:
            basis.append(Superderivation(alg, v.reshape(alg.dim, alg.dim), p))
    return DerivationSpace(alg, tuple(basis), tol=tol)


def _row_space(rows: np.ndarray, rank: int) -> np.ndarray:
    _, _, vh = np.linalg.svd(rows)
    return vh[:rank]


def _center_parities(alg: Superalgebra, center: np.ndarray) -> List[int]:
    out = []
    for K in center:
        odd = np.abs(K[alg.parity == 1]).max(initial=0.0)
        out.append(1 if odd > 1e-12 else 0)
    return out


# -- forms -------------------------------------------------------------------


@dataclass
class Form:
    """Degree-p, parity-s cochain with graded-antisymmetric components."""

    space: DerivationSpace
    degree: int
    parity: int
    comps: np.ndarray  # shape (m,)*degree + (dim,)

    def __post_init__(self):
        self.comps = np.asarray(self.comps, dtype=complex)
        m, n = self.space.dim, self.space.algebra.dim
        if self.degree < 0:
            raise FormError("degree must be non-negative")
        if self.comps.shape != (m,) * self.degree + (n,):
            raise FormError("component tensor has wrong shape")
        if self.degree > m and not np.any(self.space.parities):
            # on an all-even space such forms vanish identically by antisymmetry
            if np.abs(self.comps).max(initial=0.0) > 1e-8:
                raise FormError("degree exceeds the dimension of an all-even space")
            self.comps = np.zeros_like(self.comps)
        self.parity = int(self.parity) % 2

    # light arithmetic
    def __add__(self, other: "Form") -> "Form":
        self._compat(other)
        return Form(self.space, self.degree, self.parity, self.comps + other.comps)

    def __sub__(self, other: "Form") -> "Form":
        self._compat(other)
        return Form(self.space, self.degree, self.parity, self.comps - other.comps)

    def __rmul__(self, scalar) -> "Form":
        return Form(self.space, self.degree, self.parity, complex(scalar) * self.comps)

    def __neg__(self) -> "Form":
        return Form(self.space, self.degree, self.parity, -self.comps)

    def _compat(self, other: "Form"):
        if self.space is not other.space or self.degree != other.degree or self.parity != other.parity:
            raise FormError("forms are not compatible")

    def norm(self) -> float:
        return float(np.abs(self.comps).max(initial=0.0))

    def antisymmetry_residual(self) -> float:
        """Max deviation from w(..,X,Y,..) = -(-1)^(eps_X eps_Y) w(..,Y,X,..)."""
        p = self.degree
        if p < 2:
            return 0.0
        P = self.space.parities
        worst = 0.0
        for k in range(p - 1):
            swapped = np.swapaxes(self.comps, k, k + 1)
            E = _pair_exponent_grid(P, p, k, k + 1)
            sgn = np.where(E % 2 == 1, -1.0, 1.0)[..., None]
            worst = max(worst, float(np.abs(swapped + sgn * self.comps).max()))
        return worst

    def parity_residual(self) -> float:
        """Component (i1..ip) must lie in the parity-(s + sum eps) subspace."""
        P = self.space.parities
        n_par = self.space.algebra.parity
        p = self.degree
        tup = np.zeros((self.space.dim,) * p, dtype=int) if p else np.zeros((), dtype=int)
        for k in range(p):
            shape = [1] * p
            shape[k] = self.space.dim
            tup = tup + P.reshape(shape)
        want = (self.parity + tup) % 2
        bad = n_par.reshape((1,) * p + (-1,)) != want[..., None]
        vals = np.abs(self.comps)[bad] if np.any(bad) else np.array([0.0])
        return float(vals.max(initial=0.0))

    def validate(self, tol: float = 1e-8) -> "Form":
        r = self.antisymmetry_residual()
        if r > tol:
            raise FormError(f"graded antisymmetry residual {r:.3e}")
        r = self.parity_residual()
        if r > tol:
            raise FormError(f"parity pattern residual {r:.3e}")
        return self


def _pair_exponent_grid(P: np.ndarray, p: int, j: int, k: int) -> np.ndarray:
    """Grid of eps_j * eps_k over a p-slot index tuple."""
    m = len(P)
    shape_j = [1] * p
    shape_j[j] = m
    shape_k = [1] * p
    shape_k[k] = m
    return P.reshape(shape_j) * P.reshape(shape_k)


def zero_form(space: DerivationSpace, degree: int, parity: int = 0) -> Form:
    shape = (space.dim,) * degree + (space.algebra.dim,)
    return Form(space, degree, parity, np.zeros(shape, dtype=complex))


def form_from_element(space: DerivationSpace, a: Element, parity: Optional[int] = None) -> Form:
    p = a.homogeneous_parity() if parity is None else parity
    if p is None:
        raise FormError("0-forms of definite parity need homogeneous elements")
    return Form(space, 0, p, a.coeffs.copy())


def _perm_parity(sigma: Tuple[int, ...]) -> int:
    sign = 0
    for i in range(len(sigma)):
        for j in range(i + 1, len(sigma)):
            if sigma[i] > sigma[j]:
                sign ^= 1
    return sign


def _koszul_exponent_grid(P: np.ndarray, sigma: Tuple[int, ...], total: int) -> np.ndarray:
    """Exponent grid of the reordering sign for argument permutation sigma.

    sigma[t] is the original slot placed at position t; a pair (j < k) of
    original slots contributes eps_j eps_k when their order is inverted.
    The grid ranges over the index tuple (i_0 .. i_{total-1}), no dim axis.
    """
    p = len(sigma)
    inv = [0] * p
    for pos, orig in enumerate(sigma):
        inv[orig] = pos
    m = len(P)
    E = np.zeros((1,) * total, dtype=int)
    for j in range(p):
        for k in range(j + 1, p):
            if inv[j] > inv[k]:
                shape_j = [1] * total
                shape_j[j] = m
                shape_k = [1] * total
                shape_k[k] = m
                E = E + P.reshape(shape_j) * P.reshape(shape_k)
    return E


def antisymmetrize(space: DerivationSpace, T: np.ndarray, parity: int) -> Form:
    """Project a raw component tensor onto graded-antisymmetric forms."""
    T = np.asarray(T, dtype=complex)
    p = T.ndim - 1
    if p == 0:
        return Form(space, 0, parity, T)
    P = space.parities
    out = np.zeros_like(T)
    for sigma in permutations(range(p)):
        kappa = (-1.0) ** _perm_parity(sigma)
        E = _koszul_exponent_grid(P, sigma, p)
        sign = kappa * np.where(E % 2 == 1, -1.0, 1.0)
        moved = np.transpose(T, axes=tuple(sigma) + (p,))
        out += sign[..., None] * moved
    out /= float(math.factorial(p))
    return Form(space, p, parity, out)


def project_parity_pattern(space: DerivationSpace, T: np.ndarray, parity: int) -> np.ndarray:
    """Zero the element components that violate the parity pattern."""
    p = T.ndim - 1
    P = space.parities
    tup = np.zeros((space.dim,) * p, dtype=int) if p else np.zeros((), dtype=int)
    for k in range(p):
        shape = [1] * p
        shape[k] = space.dim
        tup = tup + P.reshape(shape)
    want = (parity + tup) % 2
    mask = (space.algebra.parity.reshape((1,) * p + (-1,)) == want[..., None])
    return np.where(mask, T, 0.0)


def random_form(space: DerivationSpace, degree: int, parity: int, rng: np.random.Generator) -> Form:
    shape = (space.dim,) * degree + (space.algebra.dim,)
    T = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    T = project_parity_pattern(space, T, parity)
    return antisymmetrize(space, T, parity)


# -- operations --------------------------------------------------------------


def evaluate(w: Form, xs: Sequence[Superderivation]) -> Element:
    """Multilinear evaluation; arguments must lie in the space's span."""
    if len(xs) != w.degree:
        raise FormError(f"form of degree {w.degree} takes {w.degree} arguments")
    out = w.comps
    for x in xs:
        c = w.space.coords(x)
        out = np.tensordot(c, out, axes=(0, 0))
    return Element(w.space.algebra, out)


def wedge(a: Form, b: Form) -> Form:
    """Exterior product; degree adds, parity adds mod 2."""
    if a.space is not b.space:
        raise FormError("wedge needs a common derivation space")
    space = a.space
    p, q = a.degree, b.degree
    if p == 0 and q == 0:
        prod = space.algebra.multiply_coeffs(a.comps, b.comps)
        return Form(space, 0, (a.parity + b.parity) % 2, prod)
    P = space.parities
    total = p + q
    m = space.dim
    c = space.algebra.structure
    out = np.zeros((m,) * total + (space.algebra.dim,), dtype=complex)
    for sigma in permutations(range(total)):
        kappa = (-1.0) ** _perm_parity(sigma)
        E = _koszul_exponent_grid(P, sigma, total)
        # beta-parity sign: (-1)^(s_b * sum_{t<=p} eps_{sigma(t)})
        if b.parity % 2:
            for t in range(p):
                shape = [1] * total
                shape[sigma[t]] = m
                E = E + P.reshape(shape)
        sign = kappa * np.where(E % 2 == 1, -1.0, 1.0)
        a_exp = _expand(a.comps, [sigma[t] for t in range(p)], total, m)
        b_exp = _expand(b.comps, [sigma[t] for t in range(p, total)], total, m)
        term = np.einsum("...u,...v,uvk->...k", a_exp, b_exp, c)
        out += sign[..., None] * term
    out /= float(math.factorial(p) * math.factorial(q))
    return Form(space, total, (a.parity + b.parity) % 2, out)


def _expand(comps: np.ndarray, slots: List[int], total: int, m: int) -> np.ndarray:
    """Broadcast a p-form tensor so slot t of the form sits on axis slots[t]."""
    p = comps.ndim - 1
    order = list(np.argsort(slots))
    arranged = np.transpose(comps, axes=tuple(order) + (p,))
    return arranged.reshape([m if i in slots else 1 for i in range(total)] + [comps.shape[-1]])


def exterior_derivative(w: Form) -> Form:
    """Chevalley-Eilenberg style differential with graded signs; d^2 = 0."""
    space = w.space
    p = w.degree
    m = space.dim
    P = space.parities
    mats = space.mats
    f = space.closure
    total = p + 1
    out = np.zeros((m,) * total + (space.algebra.dim,), dtype=complex)

    # first sum: (-1)^(k + eps_k (s + sum_{j<k} eps_j)) X_k [ w(.. without k ..) ]
    applied = np.einsum("xab,...b->x...a", mats, w.comps)  # (m, m^p..., dim)
    for k in range(total):
        term = np.moveaxis(applied, 0, k)
        E = _slot_exponent(P, total, k, w.parity, upto=k)
        sign = (-1.0) ** k * np.where(E % 2 == 1, -1.0, 1.0)
        out += sign[..., None] * term

    # second sum: (-1)^(l + eps_l sum_{k<j<l} eps_j) w(.., [X_k, X_l] at k, .., no l, ..)
    for k in range(total):
        for l in range(k + 1, total):
            moved = np.moveaxis(w.comps, k, 0)  # bracket feeds slot k of w
            term = np.tensordot(f, moved, axes=(2, 0))  # (i_k, i_l, rest..., dim)
            # remaining w-slots j (j != k) sit at output position j if j < l else j + 1
            rest = [j for j in range(p) if j != k]
            dests = [k, l] + [j if j < l else j + 1 for j in rest]
            term = np.moveaxis(term, list(range(p + 1)), dests)
            E = _between_exponent(P, total, k, l)
            sign = (-1.0) ** l * np.where(E % 2 == 1, -1.0, 1.0)
            out += sign[..., None] * term
    return Form(space, total, w.parity, out)


def _slot_exponent(P: np.ndarray, total: int, k: int, s: int, upto: int) -> np.ndarray:
    """eps_k * (s + sum_{j < upto} eps_j) as a grid over (i_0 .. i_{total-1})."""
    m = len(P)
    shape_k = [1] * total
    shape_k[k] = m
    acc = np.zeros((1,) * total, dtype=int) + s
    for j in range(upto):
        shape = [1] * total
        shape[j] = m
        acc = acc + P.reshape(shape)
    return P.reshape(shape_k) * acc


def _between_exponent(P: np.ndarray, total: int, k: int, l: int) -> np.ndarray:
    """eps_l * sum_{k<j<l} eps_j as a grid."""
    m = len(P)
    shape_l = [1] * total
    shape_l[l] = m
    acc = np.zeros((1,) * total, dtype=int)
    for j in range(k + 1, l):
        shape = [1] * total
        shape[j] = m
        acc = acc + P.reshape(shape)
    return P.reshape(shape_l) * acc


def lie_derivative(y: Superderivation, w: Form) -> Form:
    """L_Y on cochains; parity shifts by eps_Y."""
    space = w.space
    c = space.coords(y)
    p = w.degree
    P = space.parities
    out = np.einsum("ab,...b->...a", y.matrix, w.comps)
    BR = np.einsum("a,aic->ic", c, space.closure)  # [Y, X_i] = sum BR[i, c] X_c
    for k in range(p):
        moved = np.moveaxis(w.comps, k, 0)
        term = np.tensordot(BR, moved, axes=(1, 0))  # (i_k, rest..., dim)
        term = np.moveaxis(term, 0, k)
        if y.parity % 2:
            E = _slot_prefix_exponent(P, p, k, w.parity)
            sign = np.where(E % 2 == 1, -1.0, 1.0)
            out -= sign[..., None] * term
        else:
            out -= term
    return Form(space, p, (w.parity + y.parity) % 2, out)


def _slot_prefix_exponent(P: np.ndarray, total: int, k: int, s: int) -> np.ndarray:
    """s + sum_{j<k} eps_j as a grid (multiplied by an odd eps_Y outside)."""
    acc = np.zeros((1,) * total, dtype=int) + s
    m = len(P)
    for j in range(k):
        shape = [1] * total
        shape[j] = m
        acc = acc + P.reshape(shape)
    return np.broadcast_to(acc, (m,) * total) if total else acc


def interior_product(x: Superderivation, w: Form) -> Form:
    """i_X: plug X into the first slot; zero on 0-forms."""
    space = w.space
    if w.degree == 0:
        return zero_form(space, 0, (w.parity + x.parity) % 2)
    c = space.coords(x)
    out = np.tensordot(c, w.comps, axes=(0, 0))
    return Form(space, w.degree - 1, (w.parity + x.parity) % 2, out)


def form_star(w: Form) -> Form:
    """Antilinear involution on cochains.

    Component rule: star the value at starred arguments, times the sign
    (-1)^(sum_{a<b} eps_a eps_b + s sum_a eps_a) of the argument tuple.
    The pair-reordering part makes the canonical 2-form imaginary and the
    fermionic delta-form real in odd sectors; the s-dependent part makes
    the involution commute with the exterior derivative.
    """
    space = w.space
    p = w.degree
    alg = space.algebra
    Smat = alg.star_matrix()
    starred = np.einsum("kb,...b->...k", Smat, w.comps.conj())
    T = space.star_coords()
    out = starred
    for k in range(p):  # contract slot k with conj(T), keeping slot order
        out = np.moveaxis(np.tensordot(T.conj(), np.moveaxis(out, k, 0), axes=(0, 0)), 0, k)
    P = space.parities
    E = np.zeros((1,) * p, dtype=int)
    for a in range(p):
        sa = [1] * p
        sa[a] = space.dim
        if w.parity % 2:
            E = E + P.reshape(sa)
        for b in range(a + 1, p):
            sb = [1] * p
            sb[b] = space.dim
            E = E + P.reshape(sa) * P.reshape(sb)
    if p:
        out = np.where(E % 2 == 1, -1.0, 1.0)[..., None] * out
    return Form(space, p, w.parity, out)


def is_real(w: Form, tol: float = 1e-9) -> bool:
    return (form_star(w) - w).norm() <= tol


def is_imaginary(w: Form, tol: float = 1e-9) -> bool:
    return (form_star(w) + w).norm() <= tol


def pullback(
    phi: np.ndarray,
    w: Form,
    src_space: DerivationSpace,
    tol: float = 1e-8,
    verified: bool = False,
) -> Form:
    """Pull a form on the target of phi back along phi.

    ``(phi^* w)(X_1..X_p) = phi^{-1}[ w(phi_* X_1, .., phi_* X_p) ]``;
    phi must be a *-isomorphism whose pushforward maps the source space
    into the target space (pair condition).
    """
    from .derivations import verify_star_isomorphism

    dst_space = w.space
    if not verified:
        verify_star_isomorphism(src_space.algebra, dst_space.algebra, phi, max(tol, 1e-9))
    phi = np.asarray(phi, dtype=complex)
    phi_inv = np.linalg.inv(phi)
    cols = []
    for d in src_space.basis:
        pushed = phi @ d.matrix @ phi_inv
        try:
            cols.append(dst_space.coords(pushed))
        except SpanError as exc:
            raise SpanError(f"pair condition fails: {exc}") from exc
    M = np.array(cols).T  # phi_* X_a = sum_b M[b, a] Y_b
    out = w.comps
    for k in range(w.degree):
        out = np.moveaxis(np.tensordot(M, np.moveaxis(out, k, 0), axes=(0, 0)), 0, k)
    out = np.einsum("kb,...b->...k", phi_inv, out)
    return Form(src_space, w.degree, w.parity, out)


def check_center_linearity(w: Form, tol: float = 1e-8) -> bool:
    """Module linearity over the graded center.

    Verifies ``w(.., K X_i, ..) = +/- K w(.., X_i, ..)`` slot by slot, the
    sign being the Koszul factor ``(-1)^(eps_K sum_(j<slot) eps_j)`` picked
    up when an odd K crosses the earlier arguments; for even centers
    (matrix algebras) this is plain linearity.
    """
    space = w.space
    alg = space.algebra
    p = w.degree
    if p == 0:
        return True
    center = graded_center(alg)
    P = space.parities
    for K in center:
        kpar = 1 if np.abs(K[alg.parity == 1]).max(initial=0.0) > 1e-12 else 0
        LK = alg.left_mul_matrix(K)
        coords = []
        for d in space.basis:
            try:
                coords.append(space.coords(LK @ d.matrix))
            except SpanError:
                raise SpanError("derivation space is not closed under the center action")
        M = np.array(coords).T  # K X_i = sum_b M[b, i] X_b
        for slot in range(p):
            moved = np.moveaxis(w.comps, slot, 0)
            lhs = np.tensordot(M, moved, axes=(0, 0))
            rhs = np.einsum("kb,...b->...k", LK, moved)
            if kpar:
                # crossing sign over the arguments before this slot
                E = np.zeros((1,) * p, dtype=int)
                for j in range(slot):
                    shape = [1] * p
                    shape[j] = space.dim
                    E = E + P.reshape(shape)
                E = np.moveaxis(np.broadcast_to(E, (space.dim,) * p), slot, 0)
                rhs = np.where(E % 2 == 1, -1.0, 1.0)[..., None] * rhs
            if np.abs(lhs - rhs).max() > tol:
                return False
    return True
