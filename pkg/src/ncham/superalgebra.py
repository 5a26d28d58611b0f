"""Finite-dimensional complex superalgebras given by structure constants.

A superalgebra here is a Z2-graded associative unital *-algebra over C,
described by a graded basis, a rank-3 structure-constant tensor
``c[i, j, k]`` (``e_i e_j = sum_k c[i,j,k] e_k``), a designated basis
vector acting as the unit, and an antilinear involution given by a matrix
``S`` with ``e_i^* = sum_j S[i,j] e_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class AlgebraError(ValueError):
    """A structural invariant of a superalgebra failed to hold."""


class AlgebraMismatch(ValueError):
    """Operands belong to different algebras."""


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


@dataclass(frozen=True)
class Superalgebra:
    """Structure-constant model of a Z2-graded unital *-algebra.

    Immutable after construction; safe to share across threads.  The
    optional ``model`` is a faithful matrix representation (one matrix per
    basis vector, with * realized as conjugate transpose); builders for
    matrix and supermatrix algebras provide it, Grassmann algebras do not.
    """

    dim: int
    labels: tuple
    parity: np.ndarray          # shape (dim,), entries in {0,1}
    structure: np.ndarray       # shape (dim, dim, dim), c[i,j,k]
    unit_index: int
    involution: np.ndarray      # shape (dim, dim), e_i* = S[i,j] e_j
    name: str = "algebra"
    model: Optional[np.ndarray] = None   # shape (dim, n, n) faithful rep
    tol: float = 1e-9
    _left_mul: np.ndarray = field(init=False, repr=False, default=None)
    _right_mul: np.ndarray = field(init=False, repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "parity", np.asarray(self.parity, dtype=int) % 2)
        object.__setattr__(self, "structure", _as_complex(self.structure))
        object.__setattr__(self, "involution", _as_complex(self.involution))
        object.__setattr__(self, "labels", tuple(self.labels))
        if self.structure.shape != (self.dim, self.dim, self.dim):
            raise AlgebraError("structure tensor has wrong shape")
        if len(self.labels) != self.dim or self.parity.shape != (self.dim,):
            raise AlgebraError("labels/parity length must match dim")
        if not 0 <= self.unit_index < self.dim:
            raise AlgebraError("unit index out of range")
        # L[i][k, j] = c[i, j, k]  (left multiplication by e_i)
        # R[i][k, j] = c[j, i, k]  (right multiplication by e_i)
        object.__setattr__(self, "_left_mul", np.ascontiguousarray(self.structure.transpose(0, 2, 1)))
        object.__setattr__(self, "_right_mul", np.ascontiguousarray(self.structure.transpose(1, 2, 0)))
        self._validate()

    # -- validation ---------------------------------------------------

    def _validate(self):
        c, n, tol = self.structure, self.dim, self.tol
        u = self.unit_index
        if self.parity[u] != 0:
            raise AlgebraError("unit basis vector must be even")
        left = np.einsum("ijm,mkl->ijkl", c, c)
        right = np.einsum("jkm,iml->ijkl", c, c)
        r = np.abs(left - right).max()
        if r > tol:
            raise AlgebraError(f"associativity fails, residual {r:.3e}")
        ident = np.eye(n)
        if np.abs(c[u] - ident).max() > tol or np.abs(c[:, u, :] - ident).max() > tol:
            raise AlgebraError("designated unit vector is not a two-sided unit")
        psum = (self.parity[:, None] + self.parity[None, :]) % 2
        bad = np.abs(c) > tol
        if np.any(bad & (self.parity[None, None, :] != psum[:, :, None])):
            raise AlgebraError("structure constants violate the grading")
        S = self.involution
        if np.abs(S.conj() @ S - ident).max() > tol:
            raise AlgebraError("involution is not involutive (conj(S)S != 1)")
        if np.abs(S[u] - ident[u]).max() > tol:
            raise AlgebraError("involution does not fix the unit")
        # parity preservation: S[i, j] = 0 unless parity matches
        if np.any((np.abs(S) > tol) & (self.parity[:, None] != self.parity[None, :])):
            raise AlgebraError("involution does not preserve parity")
        # (e_i e_j)* = e_j* e_i*; star is antilinear so c gets conjugated
        lhs = np.einsum("ijm,mk->ijk", c.conj(), S)
        rhs = np.einsum("jm,in,mnk->ijk", S, S, c)
        r = np.abs(lhs - rhs).max()
        if r > tol:
            raise AlgebraError(f"involution is not antimultiplicative, residual {r:.3e}")

    # -- basic constructors -------------------------------------------

    def element(self, coeffs) -> "Element":
        coeffs = _as_complex(coeffs)
        if coeffs.shape != (self.dim,):
            raise AlgebraError(f"coefficient vector must have length {self.dim}")
        return Element(self, coeffs)

    def basis_element(self, i: int) -> "Element":
        v = np.zeros(self.dim, dtype=complex)
        v[i] = 1.0
        return Element(self, v)

    def unit(self) -> "Element":
        return self.basis_element(self.unit_index)

    def zero(self) -> "Element":
        return Element(self, np.zeros(self.dim, dtype=complex))

    # -- operator views ------------------------------------------------

    def left_mul_matrix(self, coeffs: np.ndarray) -> np.ndarray:
        """Matrix of A -> xA for x with the given coefficients."""
        return np.einsum("i,ikj->kj", _as_complex(coeffs), self._left_mul)

    def right_mul_matrix(self, coeffs: np.ndarray) -> np.ndarray:
        """Matrix of A -> Ax."""
        return np.einsum("i,ikj->kj", _as_complex(coeffs), self._right_mul)

    def parity_projector(self, p: int) -> np.ndarray:
        return np.diag((self.parity == p).astype(float))

    @property
    def parity_sign(self) -> np.ndarray:
        """Diagonal of (-1)^parity."""
        return np.where(self.parity == 0, 1.0, -1.0)

    def star_matrix(self) -> np.ndarray:
        """Linear part of the star map on coefficients: coeffs(a*) = S^T conj(coeffs)."""
        return self.involution.T.copy()

    def multiply_coeffs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", _as_complex(a), _as_complex(b), self.structure)

    def model_matrix(self, coeffs: np.ndarray) -> np.ndarray:
        if self.model is None:
            raise AlgebraError(f"{self.name} has no faithful matrix model")
        return np.einsum("i,iab->ab", _as_complex(coeffs), self.model)

    def coeffs_from_model(self, mat: np.ndarray) -> np.ndarray:
        """Inverse of model_matrix (solves the basis expansion)."""
        if self.model is None:
            raise AlgebraError(f"{self.name} has no faithful matrix model")
        B = self.model.reshape(self.dim, -1).T
        sol, res, rank, _ = np.linalg.lstsq(B, mat.reshape(-1), rcond=None)
        if rank < self.dim:
            raise AlgebraError("matrix model is not a basis")
        return sol

    def is_supercommutative(self, tol: Optional[float] = None) -> bool:
        tol = self.tol if tol is None else tol
        sgn = np.where((self.parity[:, None] * self.parity[None, :]) % 2 == 1, -1.0, 1.0)
        comm = self.structure - sgn[:, :, None] * self.structure.transpose(1, 0, 2)
        return bool(np.abs(comm).max() <= tol)

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return id(self)


@dataclass(frozen=True)
class Element:
    """Coefficient vector over a superalgebra's basis; may mix parities."""

    algebra: Superalgebra
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_complex(self.coeffs))

    # -- parity -------------------------------------------------------

    def parity_part(self, p: int) -> "Element":
        mask = (self.algebra.parity == p)
        return Element(self.algebra, np.where(mask, self.coeffs, 0.0))

    def homogeneous_parity(self, tol: float = 1e-12) -> Optional[int]:
        """Return 0 or 1 if homogeneous (zero counts as even), else None."""
        odd = np.abs(self.parity_part(1).coeffs).max(initial=0.0)
        even = np.abs(self.parity_part(0).coeffs).max(initial=0.0)
        if odd <= tol:
            return 0
        if even <= tol:
            return 1
        return None

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: "Element"):
        if self.algebra is not other.algebra:
            raise AlgebraMismatch("elements belong to different algebras")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self) -> "Element":
        return Element(self.algebra, -self.coeffs)

    def __rmul__(self, scalar) -> "Element":
        if isinstance(scalar, Element):
            raise TypeError("use multiply() or @ for algebra products")
        return Element(self.algebra, complex(scalar) * self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        return Element(self.algebra, complex(other) * self.coeffs)

    def __matmul__(self, other: "Element") -> "Element":
        return multiply(self, other)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self, tol: float = 1e-9) -> bool:
        return bool(np.abs(self.coeffs).max(initial=0.0) <= tol)

    def __repr__(self):
        terms = [
            f"({c:.4g})*{self.algebra.labels[i]}"
            for i, c in enumerate(self.coeffs)
            if abs(c) > 1e-12
        ]
        return " + ".join(terms) if terms else "0"


# -- element operations ----------------------------------------------------


def multiply(a: Element, b: Element) -> Element:
    """Bilinear product from the structure constants."""
    a._check(b)
    return Element(a.algebra, a.algebra.multiply_coeffs(a.coeffs, b.coeffs))


def supercommutator(a: Element, b: Element) -> Element:
    """[A, B] = AB - (-1)^(eps_A eps_B) BA, extended bilinearly over parities."""
    a._check(b)
    alg = a.algebra
    out = np.zeros(alg.dim, dtype=complex)
    for p in (0, 1):
        ap = a.parity_part(p)
        for q in (0, 1):
            bq = b.parity_part(q)
            sign = -1.0 if (p * q) % 2 else 1.0
            out += alg.multiply_coeffs(ap.coeffs, bq.coeffs)
            out -= sign * alg.multiply_coeffs(bq.coeffs, ap.coeffs)
    return Element(alg, out)


def star(a: Element) -> Element:
    """Antilinear involution: coeffs -> S^T conj(coeffs)."""
    return Element(a.algebra, a.algebra.star_matrix() @ a.coeffs.conj())


def is_hermitian(a: Element, tol: float = 1e-9) -> bool:
    return (star(a) - a).is_zero(tol)


def supercommutator_matrix(alg: Superalgebra, coeffs: np.ndarray, par: int) -> np.ndarray:
    """Matrix of B -> [x, B] for homogeneous x of parity ``par``."""
    L = alg.left_mul_matrix(coeffs)
    R = alg.right_mul_matrix(coeffs)
    if par % 2 == 0:
        return L - R
    return L - R @ np.diag(alg.parity_sign)


def graded_center(alg: Superalgebra, tol: Optional[float] = None) -> np.ndarray:
    """Orthonormal basis (rows) of the graded center.

    Computes the joint null space of the maps B -> [e_i, B] over all basis
    vectors, via SVD with a relative singular-value cutoff.
    """
    tol = alg.tol if tol is None else tol
    blocks = []
    for i in range(alg.dim):
        ei = np.zeros(alg.dim)
        ei[i] = 1.0
        blocks.append(supercommutator_matrix(alg, ei, int(alg.parity[i])))
    stacked = np.vstack(blocks)
    _, s, vh = np.linalg.svd(stacked)
    cutoff = max(tol, (s[0] if s.size else 0.0) * tol)
    rows = [vh[k] for k in range(len(s)) if s[k] <= cutoff]
    rows += [vh[k] for k in range(len(s), alg.dim)]
    if not rows:
        return np.zeros((0, alg.dim), dtype=complex)
    return canonical_rows(np.array(rows))


def canonical_rows(rows: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Deterministic orthonormal basis of the row span with fixed phases.

    Representatives are projections of coordinate vectors chosen by leverage
    score (ties broken by index), so the result depends only on the spanned
    subspace, not on the incoming basis.  Each vector's first significant
    entry is rotated to the positive real axis.
    """
    rows = np.asarray(rows, dtype=complex)
    if rows.size == 0:
        return rows
    k, n = rows.shape
    Q = np.linalg.qr(rows.T)[0]  # n x k, orthonormal columns, same span
    leverage = (np.abs(Q) ** 2).sum(axis=1)
    order = np.lexsort((np.arange(n), -leverage))
    picked = []
    for j in order:
        w = Q @ Q[j].conj()      # projection of e_j onto the span
        for u in picked:
            w = w - u * (u.conj() @ w)
        for u in picked:         # second pass for numerical safety
            w = w - u * (u.conj() @ w)
        nrm = np.linalg.norm(w)
        if nrm > 1e-6:
            picked.append(w / nrm)
        if len(picked) == k:
            break
    if len(picked) != k:
        raise RuntimeError("canonicalization failed to reproduce the span")
    fixed = []
    for v in picked:
        idx = np.argmax(np.abs(v) > tol * max(1.0, np.abs(v).max()))
        ph = v[idx] / abs(v[idx])
        fixed.append(v * ph.conj())
    return np.array(fixed)


# -- builders ---------------------------------------------------------------


def _gram_structure_from_model(mats: np.ndarray, parity, name: str, tol: float = 1e-9) -> Superalgebra:
    """Build a Superalgebra from a faithful matrix model (star = conjugate transpose)."""
    mats = _as_complex(mats)
    dim = mats.shape[0]
    B = mats.reshape(dim, -1).T
    Binv = np.linalg.pinv(B)
    unit_index = None
    n = mats.shape[1]
    for i in range(dim):
        if np.abs(mats[i] - np.eye(n)).max() < 1e-12:
            unit_index = i
            break
    if unit_index is None:
        raise AlgebraError("model basis must contain the identity matrix")
    prod = np.einsum("iab,jbc->ijac", mats, mats).reshape(dim * dim, -1)
    c = (Binv @ prod.T).T.reshape(dim, dim, dim)
    stars = mats.conj().transpose(0, 2, 1).reshape(dim, -1)
    S = (Binv @ stars.T).T
    labels = [f"b{i}" for i in range(dim)]
    return Superalgebra(
        dim=dim, labels=labels, parity=np.asarray(parity, dtype=int),
        structure=c, unit_index=unit_index, involution=S, name=name,
        model=mats, tol=tol,
    )


def _hermitian_matrix_units(n: int):
    """Hermitian basis of M_n containing the identity: I, X_ab, Y_ab, diagonals."""
    mats = [np.eye(n, dtype=complex)]
    labels = ["I"]
    pairs = []
    for a in range(n):
        for b in range(a + 1, n):
            X = np.zeros((n, n), dtype=complex)
            X[a, b] = X[b, a] = 1.0
            Y = np.zeros((n, n), dtype=complex)
            Y[a, b] = -1j
            Y[b, a] = 1j
            mats += [X, Y]
            labels += [f"x{a}{b}", f"y{a}{b}"]
            pairs.append((a, b))
    for k in range(1, n):
        D = np.zeros((n, n), dtype=complex)
        D[:k, :k] = np.eye(k)
        D[k, k] = -k
        D *= np.sqrt(2.0 / (k * (k + 1)))
        mats.append(D)
        labels.append(f"d{k}")
    return np.array(mats), labels, pairs


def matrix_algebra(n: int, tol: float = 1e-9) -> Superalgebra:
    """Full matrix algebra M_n(C), trivially graded, hermitian basis with unit first.

    For n = 2 the basis is I, sigma_x, sigma_y, sigma_z.
    """
    if n < 1:
        raise AlgebraError("matrix algebra needs n >= 1")
    mats, labels, _ = _hermitian_matrix_units(n)
    if n == 2:
        labels = ["I", "sx", "sy", "sz"]
    alg = _gram_structure_from_model(mats, np.zeros(len(mats), dtype=int), f"M{n}", tol)
    object.__setattr__(alg, "labels", tuple(labels))
    return alg


def supermatrix_algebra(p: int, q: int, tol: float = 1e-9) -> Superalgebra:
    """Supermatrix algebra M_{p|q}: block grading, hermitian basis with unit first."""
    if p < 0 or q < 0 or p + q < 1:
        raise AlgebraError("supermatrix algebra needs p, q >= 0 with p + q >= 1")
    n = p + q
    mats, labels, _ = _hermitian_matrix_units(n)
    bp = np.array([0] * p + [1] * q)

    def mat_parity(M):
        nz = np.argwhere(np.abs(M) > 1e-14)
        pars = {(bp[a] + bp[b]) % 2 for a, b in nz}
        if len(pars) != 1:
            raise AlgebraError("basis matrix without definite parity")
        return pars.pop()

    parity = np.array([mat_parity(M) for M in mats])
    return _gram_structure_from_model(mats, parity, f"M{p}|{q}", tol)


def grassmann_algebra(n: int, tol: float = 1e-9) -> Superalgebra:
    """Grassmann algebra on n anticommuting self-adjoint generators.

    Basis indexed by subsets (bitmasks, increasing order); theta_S* reverses
    the factor order, giving the sign (-1)^(|S|(|S|-1)/2).
    """
    if n < 0:
        raise AlgebraError("grassmann algebra needs n >= 0")
    dim = 1 << n
    labels = []
    for mask in range(dim):
        bits = [str(i + 1) for i in range(n) if mask >> i & 1]
        labels.append("th" + "".join(bits) if bits else "I")
    parity = np.array([bin(m).count("1") % 2 for m in range(dim)])
    c = np.zeros((dim, dim, dim), dtype=complex)
    for s in range(dim):
        for t in range(dim):
            if s & t:
                continue
            sign = 1.0
            for bit_t in range(n):
                if not (t >> bit_t & 1):
                    continue
                higher = s >> (bit_t + 1)
                sign *= (-1.0) ** bin(higher).count("1")
            c[s, t, s | t] = sign
    S = np.zeros((dim, dim), dtype=complex)
    for m in range(dim):
        k = bin(m).count("1")
        S[m, m] = (-1.0) ** (k * (k - 1) // 2)
    return Superalgebra(
        dim=dim, labels=labels, parity=parity, structure=c,
        unit_index=0, involution=S, name=f"Gr{n}", model=None, tol=tol,
    )


def build_algebra(spec: str, tol: float = 1e-9) -> Superalgebra:
    """Builder dispatch: 'matrix:n', 'supermatrix:p|q', 'grassmann:n'."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "matrix":
            return matrix_algebra(int(arg), tol)
        if kind == "supermatrix":
            p, _, q = arg.partition("|")
            return supermatrix_algebra(int(p), int(q), tol)
        if kind == "grassmann":
            return grassmann_algebra(int(arg), tol)
    except ValueError as exc:
        raise AlgebraError(f"bad builder argument in {spec!r}: {exc}") from exc
    raise AlgebraError(f"unknown builder {spec!r}")
