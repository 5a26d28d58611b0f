"""Skew tensor products of superalgebras and the induced symplectic data.

Multiplication carries the Koszul sign, ``(A x B)(C x D) =
(-1)^(eps_B eps_C) (AC) x (BD)``.  The canonically induced 2-form
``w = w1 x I2 + I1 x w2`` is presymplectic on the lifted derivations for
every factor pair; over the full derivation space of the product it is
nondegenerate exactly when both factors are supercommutative or both
carry a quantum structure with one common parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .superalgebra import Element, Superalgebra
from .derivations import Superderivation, leibniz_residual
from .forms import DerivationSpace, Form, full_sder_space
from .symplectic import SymplecticStructure, SymplecticError


class TensorError(ValueError):
    """Tensor-product construction or solve failure."""


@dataclass(frozen=True)
class TensorAlgebra:
    """Skew tensor product with index helpers; basis pairs flattened row-major."""

    factor1: Superalgebra
    factor2: Superalgebra
    product: Superalgebra

    @property
    def dims(self) -> Tuple[int, int]:
        return self.factor1.dim, self.factor2.dim

    def flat(self, i: int, j: int) -> int:
        return i * self.factor2.dim + j

    def embed1(self, a: Element) -> Element:
        out = np.zeros(self.product.dim, dtype=complex)
        out.reshape(self.factor1.dim, self.factor2.dim)[:, self.factor2.unit_index] = a.coeffs
        return Element(self.product, out)

    def embed2(self, b: Element) -> Element:
        out = np.zeros(self.product.dim, dtype=complex)
        out.reshape(self.factor1.dim, self.factor2.dim)[self.factor1.unit_index, :] = b.coeffs
        return Element(self.product, out)

    def simple(self, a: Element, b: Element) -> Element:
        """A x B as an element (coefficients multiply, no sign)."""
        out = np.outer(a.coeffs, b.coeffs).reshape(-1)
        return Element(self.product, out)

    def op_tensor(self, P: np.ndarray, Q: np.ndarray, q_parity: int) -> np.ndarray:
        """Super tensor product of maps: (P x Q)(a x b) = (-1)^(eps_Q eps_a) P(a) x Q(b)."""
        sign = np.where(self.factor1.parity == 0, 1.0, (-1.0) ** (q_parity % 2))
        return np.kron(P * sign[None, :], Q)

    def lift1(self, X: Superderivation) -> Superderivation:
        m = np.kron(X.matrix, np.eye(self.factor2.dim))
        return Superderivation(self.product, m, X.parity)

    def lift2(self, Y: Superderivation) -> Superderivation:
        m = self.op_tensor(np.eye(self.factor1.dim), Y.matrix, Y.parity)
        return Superderivation(self.product, m, Y.parity)

    def as_quad(self, M: np.ndarray) -> np.ndarray:
        """Reshape a product endomorphism to indices [m, n, k, l]."""
        d1, d2 = self.dims
        return np.asarray(M).reshape(d1, d2, d1, d2).transpose(0, 1, 2, 3)


def build_tensor(a1: Superalgebra, a2: Superalgebra, tol: float = 1e-9) -> TensorAlgebra:
    """Skew tensor product as a validated Superalgebra of dimension dim1*dim2."""
    d1, d2 = a1.dim, a2.dim
    eps1, eps2 = a1.parity, a2.parity
    koszul = np.where((eps2[:, None] * eps1[None, :]) % 2 == 1, -1.0, 1.0)  # [j, k]
    c = np.einsum("jk,ikm,jln->ijklmn", koszul, a1.structure, a2.structure)
    c = c.reshape(d1 * d2, d1 * d2, d1 * d2)
    parity = (eps1[:, None] + eps2[None, :]).reshape(-1) % 2
    # involution with the Koszul sign so that (xy)* = y* x* holds in odd sectors
    ssign = np.where((eps1[:, None] * eps2[None, :]) % 2 == 1, -1.0, 1.0).reshape(-1)
    S = np.kron(a1.involution, a2.involution) * ssign[:, None]
    labels = [f"{la}*{lb}" for la in a1.labels for lb in a2.labels]
    model = None
    if a1.model is not None and a2.model is not None and not eps1.any() and not eps2.any():
        model = np.einsum("iab,jcd->ijacbd", a1.model, a2.model)
        n1, n2 = a1.model.shape[1], a2.model.shape[1]
        model = model.reshape(d1 * d2, n1 * n2, n1 * n2)
    product = Superalgebra(
        dim=d1 * d2, labels=labels, parity=parity, structure=c,
        unit_index=a1.unit_index * d2 + a2.unit_index,
        involution=S, name=f"{a1.name}(x){a2.name}", model=model, tol=tol,
    )
    return TensorAlgebra(a1, a2, product)


def decompose_tensor(
    t: TensorAlgebra, x: Superderivation, tol: float = 1e-8
) -> Tuple[Superderivation, Superderivation]:
    """Unique split x = x1 + x2 along the two embedded factors.

    x1 agrees with x on A x I, kills I x B, and extends by the product
    rule x1(A x B) = x1(A x I) (I x B); x2 mirrors.  The input must be a
    superderivation; the pieces themselves need not satisfy the Leibniz
    rule (only their sum does, in general).
    """
    if x.algebra is not t.product:
        raise TensorError("derivation does not act on this tensor product")
    lr = leibniz_residual(t.product, x.matrix, x.parity)
    if lr > tol:
        raise TensorError(f"input fails the graded Leibniz test, residual {lr:.3e}")
    d1, d2 = t.dims
    alg = t.product
    X1 = np.zeros((alg.dim, alg.dim), dtype=complex)
    X2 = np.zeros((alg.dim, alg.dim), dtype=complex)
    for i in range(d1):
        xi = x.matrix[:, t.flat(i, t.factor2.unit_index)]
        ei = np.zeros(alg.dim)
        ei[t.flat(i, t.factor2.unit_index)] = 1.0
        sign = (-1.0) ** (x.parity * t.factor1.parity[i])
        for j in range(d2):
            unit_j = np.zeros(alg.dim)
            unit_j[t.flat(t.factor1.unit_index, j)] = 1.0
            X1[:, t.flat(i, j)] = alg.multiply_coeffs(xi, unit_j)
            xj = x.matrix[:, t.flat(t.factor1.unit_index, j)]
            X2[:, t.flat(i, j)] = sign * alg.multiply_coeffs(ei, xj)
    r = np.abs(X1 + X2 - x.matrix).max()
    if r > tol:
        raise TensorError(f"split does not reconstruct the derivation, residual {r:.3e}")
    return Superderivation(alg, X1, x.parity), Superderivation(alg, X2, x.parity)


# -- induced pairing over a derivation space of the product -------------------


def lifted_space(t: TensorAlgebra, s1: SymplecticStructure, s2: SymplecticStructure,
                 tol: float = 1e-8) -> DerivationSpace:
    basis = [t.lift1(X) for X in s1.space.basis] + [t.lift2(Y) for Y in s2.space.basis]
    return DerivationSpace(t.product, tuple(basis), tol=tol)


def induced_pairing(
    t: TensorAlgebra,
    s1: SymplecticStructure,
    s2: SymplecticStructure,
    space: DerivationSpace,
) -> np.ndarray:
    """Components C[a, b] = w(X_a, X_b) of the induced 2-form over ``space``.

    Evaluation goes through the restrictions of each derivation to the two
    embedded factors; factor maps outside the factor derivation spaces are
    handled by orthogonal projection (exact whenever the factor spaces are
    the full derivation spaces, as in the matched cases).
    """
    d1, d2 = t.dims
    m = space.dim
    eps1, eps2 = t.factor1.parity, t.factor2.parity
    u1, u2 = t.factor1.unit_index, t.factor2.unit_index
    C1, C2 = s1.omega.comps, s2.omega.comps

    # factor restrictions of every basis derivation
    quads = np.array([t.as_quad(X.matrix) for X in space.basis])  # (m, d1, d2, d1, d2)
    # Xi1[a, n][row, k] = quads[a][row, n, k, u2], hat twist (-1)^(eps2[n] eps1[k])
    twist = np.where((eps2[:, None] * eps1[None, :]) % 2 == 1, -1.0, 1.0)  # [n, k]
    Xi1 = quads[:, :, :, :, u2].transpose(0, 2, 1, 3) * twist[None, :, None, :]
    # Xi2[a, mu][n, l] = quads[a][mu, n, u1, l]
    Xi2 = quads[:, :, :, u1, :]

    # coordinates of the restrictions in the factor derivation spaces
    P1 = np.einsum("AK,anK->anA", s1.space._pinv, Xi1.reshape(m, d2, -1))
    P2 = np.einsum("BK,amK->amB", s2.space._pinv, Xi2.reshape(m, d1, -1))

    out = np.zeros((m, m, t.product.dim), dtype=complex)
    g2prod = t.factor2.structure  # g_n' g_n = sum_y c2[n', n, y]
    g1prod = t.factor1.structure
    sA = space.parities

    for a in range(m):
        # (2,0): sum_{n,n'} (-1)^(eps_b eps2[n]) w1(Xi1^n_a, Xi1^n'_b) (g_n' g_n)
        H1 = np.einsum("nA,ABx->nBx", P1[a], C1)
        # (0,2): sum_{mu,mu'} (-1)^(eps1[mu'] (eps_a + eps1[mu])) (f_mu f_mu') w2(Xi2^mu_a, Xi2^mu'_b)
        H2 = np.einsum("mB,BCy->mCy", P2[a], C2)
        sgn2 = np.where((eps1[None, :] * (sA[a] + eps1[:, None])) % 2 == 1, -1.0, 1.0)  # [mu, mu']
        for b in range(m):
            val1 = np.einsum("nBx,mB->nmx", H1, P1[b])  # [n, n', x]
            sgn1 = np.where((sA[b] * eps2) % 2 == 1, -1.0, 1.0)
            out[a, b] += np.einsum("n,nmx,mny->xy", sgn1, val1, g2prod).reshape(-1)
            val2 = np.einsum("mCy,nC->mny", H2, P2[b])  # [mu, mu', y]
            out[a, b] += np.einsum("mn,mny,mnx->xy", sgn2, val2, g1prod).reshape(-1)
    return out


@dataclass
class TensorVerdict:
    kind: str                        # supercommutative | quantum | degenerate
    lam: Optional[complex] = None
    witness: Optional[tuple] = None  # (mode, label)
    diagnostics: dict = field(default_factory=dict)


@dataclass
class TensorContext:
    """Cached Theorem-style analysis of a factor pair."""

    tensor: TensorAlgebra
    s1: SymplecticStructure
    s2: SymplecticStructure
    space: DerivationSpace = None
    pairing: np.ndarray = None
    flat: np.ndarray = None
    verdict: TensorVerdict = None

    def __post_init__(self):
        if self.space is None:
            self.space = full_sder_space(self.tensor.product)
        self.pairing = induced_pairing(self.tensor, self.s1, self.s2, self.space)
        m, n = self.space.dim, self.tensor.product.dim
        self.flat = self.pairing.transpose(1, 2, 0).reshape(m * n, m)

    def rhs(self, coeffs: np.ndarray) -> np.ndarray:
        alg = self.tensor.product
        dA = np.zeros((self.space.dim, alg.dim), dtype=complex)
        for p in (0, 1):
            part = np.where(alg.parity == p, coeffs, 0.0)
            if not np.any(np.abs(part)):
                continue
            sgn = np.where((self.space.parities * p) % 2 == 1, -1.0, 1.0)
            dA += sgn[:, None] * np.einsum("bij,j->bi", self.space.mats, part)
        return (-dA).reshape(-1)

    def solve(self, a: Element, tol: float = 1e-8) -> Superderivation:
        """Direct solve of i_Y w = -dA over the product derivation space."""
        rhs = self.rhs(a.coeffs)
        y, *_ = np.linalg.lstsq(self.flat, rhs, rcond=None)
        resid = np.linalg.norm(self.flat @ y - rhs)
        if resid > tol * max(1.0, np.linalg.norm(rhs)):
            raise SymplecticError("degenerate", witness=a,
                                  message=f"no Hamiltonian derivation, residual {resid:.3e}")
        p = a.homogeneous_parity()
        mat = np.einsum("a,aij->ij", y, self.space.mats)
        return Superderivation(self.tensor.product, mat, 0 if p is None else p)


def _fit_lambda(s: SymplecticStructure, tol: float) -> Tuple[complex, float]:
    """Least-squares lambda with lambda {A,C} = -[A, C] over all basis pairs."""
    from .superalgebra import supercommutator

    alg = s.algebra
    pbs, comms = [], []
    for i in range(alg.dim):
        for k in range(alg.dim):
            a, c = alg.basis_element(i), alg.basis_element(k)
            pbs.append(s.poisson_bracket(a, c).coeffs)
            comms.append(supercommutator(a, c).coeffs)
    pb = np.concatenate(pbs)
    cm = np.concatenate(comms)
    denom = np.vdot(pb, pb).real
    if denom < tol:
        return 0.0, float(np.abs(cm).max(initial=0.0))
    lam = -np.vdot(pb, cm) / denom
    resid = float(np.abs(lam * pb + cm).max())
    return complex(lam), resid


def theorem2_verdict(
    t: TensorAlgebra,
    s1: SymplecticStructure,
    s2: SymplecticStructure,
    ctx: Optional[TensorContext] = None,
    tol: float = 1e-8,
) -> TensorVerdict:
    """Nondegeneracy analysis of the induced form over the full derivation space.

    Valid outcomes: both factors supercommutative (lambda = 0), or both
    non-supercommutative with quantum structures sharing one parameter
    (lambda reported, |lambda| being the Planck-type constant).  Otherwise
    degenerate, with the first failing basis element as witness.
    """
    ctx = TensorContext(t, s1, s2) if ctx is None else ctx
    diag = {}
    # uniqueness of solutions
    svals = np.linalg.svd(ctx.flat, compute_uv=False)
    diag["smallest_singular_value"] = float(svals[-1]) if svals.size else 0.0
    unique = svals.size > 0 and svals[-1] > 1e-7 * max(svals[0], 1.0)
    if not unique:
        verdict = TensorVerdict("degenerate", witness=("non-unique", None), diagnostics=diag)
        ctx.verdict = verdict
        return verdict
    # existence for every basis element
    alg = t.product
    for k in range(alg.dim):
        e = alg.basis_element(k)
        rhs = ctx.rhs(e.coeffs)
        y, *_ = np.linalg.lstsq(ctx.flat, rhs, rcond=None)
        resid = np.linalg.norm(ctx.flat @ y - rhs)
        if resid > tol * max(1.0, np.linalg.norm(rhs)):
            diag["existence_residual"] = float(resid)
            verdict = TensorVerdict("degenerate", witness=("no-solution", alg.labels[k]),
                                    diagnostics=diag)
            ctx.verdict = verdict
            return verdict
    sc1 = t.factor1.is_supercommutative()
    sc2 = t.factor2.is_supercommutative()
    if sc1 and sc2:
        verdict = TensorVerdict("supercommutative", lam=0.0, diagnostics=diag)
        ctx.verdict = verdict
        return verdict
    lam1, r1 = _fit_lambda(s1, tol)
    lam2, r2 = _fit_lambda(s2, tol)
    diag["lambda_residuals"] = (float(r1), float(r2))
    if r1 > tol or r2 > tol or abs(lam1 - lam2) > tol:
        raise TensorError(
            "nondegenerate induced form with inconsistent lambda fits "
            f"({lam1:.6g} vs {lam2:.6g}); this indicates an internal error"
        )
    verdict = TensorVerdict("quantum", lam=complex(lam1), diagnostics=diag)
    ctx.verdict = verdict
    return verdict


# -- Hamiltonian solutions and brackets --------------------------------------


def hamiltonian_ansatz(
    t: TensorAlgebra,
    s1: SymplecticStructure,
    s2: SymplecticStructure,
    a: Element,
    b: Element,
    lam: complex,
) -> Superderivation:
    """Y = Y_A x mu(B) + mu(A) x Y_B + lam Y_A x Y_B for homogeneous a, b."""
    pa, pb = a.homogeneous_parity(), b.homogeneous_parity()
    if pa is None or pb is None:
        raise TensorError("ansatz needs homogeneous factor elements")
    YA = s1.hamiltonian_derivation(a).matrix
    YB = s2.hamiltonian_derivation(b).matrix
    muA = t.factor1.left_mul_matrix(a.coeffs)
    muB = t.factor2.left_mul_matrix(b.coeffs)
    m = t.op_tensor(YA, muB, pb) + t.op_tensor(muA, YB, pb) + lam * t.op_tensor(YA, YB, pb)
    return Superderivation(t.product, m, (pa + pb) % 2)


def ansatz_leibniz_residual(
    t: TensorAlgebra,
    s1: SymplecticStructure,
    s2: SymplecticStructure,
    a: Element,
    b: Element,
    lam: complex,
) -> float:
    """Graded Leibniz residual of the ansatz; vanishes only at the true lambda."""
    pa, pb = a.homogeneous_parity(), b.homogeneous_parity()
    Y = hamiltonian_ansatz(t, s1, s2, a, b, lam)
    return leibniz_residual(t.product, Y.matrix, (pa + pb) % 2)


def solve_tensor_hamiltonian(
    ctx: TensorContext, a: Element, b: Element, tol: float = 1e-8
) -> Superderivation:
    """Direct solve for Y_{A x B}; valid Theorem-2 cases only."""
    if ctx.verdict is None:
        theorem2_verdict(ctx.tensor, ctx.s1, ctx.s2, ctx)
    if ctx.verdict.kind == "degenerate":
        raise SymplecticError("degenerate", witness=ctx.verdict.witness,
                              message="induced form is degenerate")
    return ctx.solve(ctx.tensor.simple(a, b), tol=tol)


def tensor_poisson_bracket(ctx: TensorContext, x: Element, y: Element) -> Element:
    """Bracket on the product in the symmetric two-factor shape.

    {A x B, C x D} = eta_BC [ {A,C} x (BD + eta_BD DB)/2
                              + (AC + eta_AC CA)/2 x {B,D} ],
    extended bilinearly to sums of simple tensors.
    """
    if ctx.verdict is None:
        theorem2_verdict(ctx.tensor, ctx.s1, ctx.s2, ctx)
    if ctx.verdict.kind == "degenerate":
        raise SymplecticError("degenerate", witness=ctx.verdict.witness,
                              message="induced form is degenerate")
    return Element(ctx.tensor.product, _pb_table(ctx) @ np.kron(x.coeffs, y.coeffs))


def _pb_table(ctx: TensorContext) -> np.ndarray:
    """Matrix of the bilinear bracket over basis pairs, cached on the context."""
    if "pb_table" in ctx.verdict.diagnostics:
        return ctx.verdict.diagnostics["pb_table"]
    t = ctx.tensor
    a1, a2 = t.factor1, t.factor2
    d1, d2 = t.dims
    pb1 = np.empty((d1, d1, d1), dtype=complex)
    pb2 = np.empty((d2, d2, d2), dtype=complex)
    for i in range(d1):
        for k in range(d1):
            pb1[i, k] = ctx.s1.poisson_bracket(a1.basis_element(i), a1.basis_element(k)).coeffs
    for j in range(d2):
        for l in range(d2):
            pb2[j, l] = ctx.s2.poisson_bracket(a2.basis_element(j), a2.basis_element(l)).coeffs
    e1, e2 = a1.parity, a2.parity
    eta11 = np.where((e1[:, None] * e1[None, :]) % 2 == 1, -1.0, 1.0)
    eta22 = np.where((e2[:, None] * e2[None, :]) % 2 == 1, -1.0, 1.0)
    anti1 = 0.5 * (a1.structure + np.einsum("ik,kim->ikm", eta11, a1.structure))
    anti2 = 0.5 * (a2.structure + np.einsum("jl,ljn->jln", eta22, a2.structure))
    eta = np.where((e2[:, None] * e1[None, :]) % 2 == 1, -1.0, 1.0)  # [j, k]
    table = np.einsum("jk,ikm,jln->ijklmn", eta, pb1, anti2) \
        + np.einsum("jk,ikm,jln->ijklmn", eta, anti1, pb2)
    table = table.reshape(d1 * d2, d1 * d2, d1 * d2).transpose(2, 0, 1).reshape(d1 * d2, -1)
    ctx.verdict.diagnostics["pb_table"] = table
    return table


def naive_poisson_table(ctx: TensorContext) -> np.ndarray:
    """Bracket table without the symmetrized products (lambda term dropped)."""
    t = ctx.tensor
    a1, a2 = t.factor1, t.factor2
    d1, d2 = t.dims
    pb1 = np.empty((d1, d1, d1), dtype=complex)
    pb2 = np.empty((d2, d2, d2), dtype=complex)
    for i in range(d1):
        for k in range(d1):
            pb1[i, k] = ctx.s1.poisson_bracket(a1.basis_element(i), a1.basis_element(k)).coeffs
    for j in range(d2):
        for l in range(d2):
            pb2[j, l] = ctx.s2.poisson_bracket(a2.basis_element(j), a2.basis_element(l)).coeffs
    e1, e2 = a1.parity, a2.parity
    eta = np.where((e2[:, None] * e1[None, :]) % 2 == 1, -1.0, 1.0)
    table = np.einsum("jk,ikm,jln->ijklmn", eta, pb1, a2.structure) \
        + np.einsum("jk,ikm,jln->ijklmn", eta, a1.structure, pb2)
    return table.reshape(d1 * d2, d1 * d2, d1 * d2).transpose(2, 0, 1).reshape(d1 * d2, -1)


def coupled_evolution(
    ctx: TensorContext, total_h: Element, a: Element, t: float
) -> Element:
    """Heisenberg evolution on the product under H = H1 x I + I x H2 + H_int."""
    from scipy.linalg import expm

    table = _pb_table(ctx)
    dim = ctx.tensor.product.dim
    # generator G with G e_k = {H, e_k}
    G = np.empty((dim, dim), dtype=complex)
    for k in range(dim):
        ek = np.zeros(dim)
        ek[k] = 1.0
        G[:, k] = table @ np.kron(total_h.coeffs, ek)
    return Element(ctx.tensor.product, expm(float(t) * G) @ a.coeffs)


def induced_two_form(
    t: TensorAlgebra,
    s1: SymplecticStructure,
    s2: SymplecticStructure,
    space: Optional[DerivationSpace] = None,
    tol: float = 1e-8,
) -> Form:
    """Induced 2-form over the lifted factor derivations (default) or a given space.

    Over the lifted space the form is always presymplectic: even, closed,
    and real when the factor forms are real, for every factor pair.
    """
    space = lifted_space(t, s1, s2, tol=tol) if space is None else space
    comps = induced_pairing(t, s1, s2, space)
    return Form(space, 2, 0, comps)
