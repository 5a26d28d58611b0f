"""Lie algebra actions on symplectic superalgebras.

Covers the homomorphism and local-Hamiltonicity checks for a set of even
generators, the obstruction 2-cocycle ``alpha(a, b) = {h_a, h_b} -
h_[a,b]``, trivial-coefficient degree-2 cohomology, central extensions,
and the momentum map sending a state to ``xi -> <phi, h_xi>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence

import numpy as np

from .superalgebra import Element, canonical_rows
from .derivations import Superderivation, bracket
from .forms import interior_product, lie_derivative
from .states import State, expectation
from .symplectic import SymplecticStructure


class LieActionError(ValueError):
    """Structure constants or generators violate a Lie-action invariant."""


def check_lie_structure(C: np.ndarray, tol: float = 1e-9) -> None:
    """Antisymmetry and Jacobi identity of structure constants C[a, b, c]."""
    C = np.asarray(C)
    r = np.abs(C + C.transpose(1, 0, 2)).max(initial=0.0)
    if r > tol:
        raise LieActionError(f"structure constants are not antisymmetric, residual {r:.3e}")
    jac = (np.einsum("abe,ecf->abcf", C, C)
           + np.einsum("bce,eaf->bcaf", C, C).transpose(2, 0, 1, 3)
           + np.einsum("cae,ebf->cabf", C, C).transpose(1, 2, 0, 3))
    r = np.abs(jac).max(initial=0.0)
    if r > tol:
        raise LieActionError(f"Jacobi identity fails, residual {r:.3e}")


@dataclass
class LieAlgebraAction:
    """Even generators Z_a of a Lie algebra acting on a symplectic superalgebra."""

    structure_constants: np.ndarray          # C[a, b, c]
    generators: Sequence[Superderivation]
    hamiltonians: Optional[List[Element]] = None

    def __post_init__(self):
        self.structure_constants = np.asarray(self.structure_constants, dtype=complex)
        self.generators = list(self.generators)
        n = len(self.generators)
        if self.structure_constants.shape != (n, n, n):
            raise LieActionError("structure constants must be (dim_g, dim_g, dim_g)")
        check_lie_structure(self.structure_constants)
        for z in self.generators:
            if z.parity % 2:
                raise LieActionError("generators must be even superderivations")

    @property
    def dim(self) -> int:
        return len(self.generators)


def _exact_hamiltonian(s: SymplecticStructure, z: Superderivation,
                       tol: float) -> Optional[Element]:
    """Solve i_Z w = -dh for h, or None when the 1-form is not exact."""
    one_form = interior_product(z, s.omega)
    m, n = s.space.dim, s.algebra.dim
    # (dh)(X_b) = sum_p (-1)^(eps_b p) X_b(h_p), linear in h
    cols = np.zeros((m * n, n), dtype=complex)
    apar = s.algebra.parity
    for p in (0, 1):
        proj = np.diag((apar == p).astype(float))
        sgn = np.where((s.space.parities * p) % 2 == 1, -1.0, 1.0)
        block = np.einsum("b,bij,jk->bik", sgn, s.space.mats, proj)
        cols += block.reshape(m * n, n)
    rhs = -one_form.comps.reshape(-1)
    h, *_ = np.linalg.lstsq(cols, rhs, rcond=None)
    resid = np.linalg.norm(cols @ h - rhs)
    if resid > tol * max(1.0, np.linalg.norm(rhs)):
        return None
    return Element(s.algebra, h)


def verify_action(action: LieAlgebraAction, s: SymplecticStructure,
                  tol: float = 1e-9) -> Dict:
    """Report homomorphism, invariance, Hamiltonicity and the Poisson property."""
    C = action.structure_constants
    Z = action.generators
    n = action.dim
    report: Dict = {}
    hom = 0.0
    for a in range(n):
        for b in range(n):
            target = sum(C[a, b, c] * Z[c].matrix for c in range(n))
            hom = max(hom, float(np.abs(bracket(Z[a], Z[b]).matrix - target).max()))
    report["homomorphism_residual"] = hom
    inv = max(float(lie_derivative(z, s.omega).norm()) for z in Z)
    report["locally_hamiltonian_residual"] = inv
    hams = action.hamiltonians
    if hams is None:
        hams = []
        for z in Z:
            h = _exact_hamiltonian(s, z, tol)
            if h is None:
                report["hamiltonian"] = False
                report["poisson"] = False
                return report
            hams.append(h)
        action.hamiltonians = hams
    # generators must reproduce: Y_{h_a} = Z_a
    gen_res = max(
        float(np.abs(s.hamiltonian_derivation(h).matrix - z.matrix).max())
        for h, z in zip(hams, Z)
    )
    report["generator_match_residual"] = gen_res
    report["hamiltonian"] = gen_res <= 10 * tol
    pois = 0.0
    for a in range(n):
        for b in range(n):
            lhs = s.poisson_bracket(hams[a], hams[b])
            rhs = sum(complex(C[a, b, c]) * hams[c].coeffs for c in range(n))
            pois = max(pois, float(np.abs(lhs.coeffs - rhs).max()))
    report["poisson_residual"] = pois
    report["poisson"] = report["hamiltonian"] and pois <= 10 * tol
    report["valid"] = (hom <= tol and inv <= tol)
    return report


def obstruction_cocycle(action: LieAlgebraAction, s: SymplecticStructure,
                        tol: float = 1e-9) -> np.ndarray:
    """alpha[a, b] as elements; checks neutrality and the cocycle identity."""
    if action.hamiltonians is None:
        raise LieActionError("obstruction cocycle needs a Hamiltonian action")
    hams = action.hamiltonians
    C = action.structure_constants
    n = action.dim
    alg = s.algebra
    alpha = np.zeros((n, n, alg.dim), dtype=complex)
    for a in range(n):
        for b in range(n):
            h_ab = sum(complex(C[a, b, c]) * hams[c].coeffs for c in range(n))
            alpha[a, b] = s.poisson_bracket(hams[a], hams[b]).coeffs - h_ab
    # neutrality: the Hamiltonian derivation of every alpha value vanishes
    for a in range(n):
        for b in range(n):
            val = Element(alg, alpha[a, b])
            if val.norm() <= tol:
                continue
            y = s.hamiltonian_derivation(val)
            if np.abs(y.matrix).max() > 10 * tol:
                raise LieActionError(
                    f"obstruction value at ({a},{b}) is not neutral"
                )
    # cocycle identity: alpha([ab], c) + alpha([bc], a) + alpha([ca], b) = 0
    cyc = (np.einsum("abe,ecx->abcx", C, alpha)
           + np.einsum("bce,eax->bcax", C, alpha).transpose(2, 0, 1, 3)
           + np.einsum("cae,ebx->cabx", C, alpha).transpose(1, 2, 0, 3))
    r = np.abs(cyc).max(initial=0.0)
    if r > 10 * tol:
        raise LieActionError(f"cocycle identity fails, residual {r:.3e}")
    return alpha


# -- trivial-coefficient cohomology in degree 2 -------------------------------


def _pair_index(n: int):
    pairs = list(combinations(range(n), 2))
    return pairs, {p: k for k, p in enumerate(pairs)}


def ce_cohomology_h2(C: np.ndarray, tol: float = 1e-9):
    """Dimension and representatives of degree-2 cohomology, trivial coefficients.

    Cochains are real antisymmetric arrays; the differential is
    ``(d lam)(a, b) = -lam([a, b])`` on 1-cochains and the cyclic sum on
    2-cochains.  Returns (dim, representatives[r][a, b]).
    """
    C = np.asarray(C)
    if np.iscomplexobj(C):
        if np.abs(C.imag).max(initial=0.0) > tol:
            raise LieActionError("second cohomology here expects real structure constants")
        C = C.real
    n = C.shape[0]
    check_lie_structure(C, tol)
    pairs, pidx = _pair_index(n)
    npairs = len(pairs)
    if npairs == 0:
        return 0, np.zeros((0, n, n))
    # d1: 1-cochains -> 2-cochains, (d lam)(a,b) = -sum_c C[a,b,c] lam_c
    D1 = np.zeros((npairs, n))
    for (a, b), k in pidx.items():
        D1[k] = -C[a, b, :]
    # d2: 2-cochains -> 3-cochains (cyclic sum with a minus sign)
    triples = list(combinations(range(n), 3))
    D2 = np.zeros((len(triples), npairs))

    def eta_entry(vec, e, c):
        if e == c:
            return 0.0
        return vec[pidx[(e, c)]] if e < c else -vec[pidx[(c, e)]]

    for row, (a, b, c) in enumerate(triples):
        for k in range(npairs):
            vec = np.zeros(npairs)
            vec[k] = 1.0
            total = 0.0
            for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                total += sum(C[x, y, e] * eta_entry(vec, e, z) for e in range(n))
            D2[row, k] = -total
    # kernel of D2
    if len(triples):
        _, sv, vh = np.linalg.svd(D2)
        cut = max(tol, (sv[0] if sv.size else 0.0) * 1e-10)
        null = [vh[i] for i in range(len(sv)) if sv[i] <= cut]
        null += [vh[i] for i in range(len(sv), npairs)]
        Znull = np.array(null) if null else np.zeros((0, npairs))
    else:
        Znull = np.eye(npairs)
    rank_b = np.linalg.matrix_rank(D1, tol=1e-10) if n else 0
    dim_h2 = Znull.shape[0] - rank_b
    # representatives: kernel directions orthogonal to the coboundary image
    if dim_h2 <= 0:
        return 0, np.zeros((0, n, n))
    if rank_b:
        Q, _ = np.linalg.qr(D1)
        proj = np.eye(npairs) - Q @ Q.T
        reps_raw = Znull @ proj.T
    else:
        reps_raw = Znull
    sv = np.linalg.svd(reps_raw, compute_uv=False)
    keep = int((sv > 1e-10 * max(1.0, sv[0])).sum())
    reps = canonical_rows(_row_space(reps_raw, keep)).real
    out = np.zeros((len(reps), n, n))
    for r, vec in enumerate(reps):
        for (a, b), k in pidx.items():
            out[r, a, b] = vec[k]
            out[r, b, a] = -vec[k]
    return dim_h2, out


def _row_space(rows: np.ndarray, rank: int) -> np.ndarray:
    _, _, vh = np.linalg.svd(rows)
    return vh[:rank]


def central_extension(C: np.ndarray, representatives: np.ndarray,
                      tol: float = 1e-9) -> np.ndarray:
    """Structure constants of the extension by central generators M_r.

    ``[xi_a, xi_b] = C[a,b,c] xi_c + sum_r eta_r(a, b) M_r`` with the M_r
    central; the result is Jacobi-verified.
    """
    C = np.asarray(C, dtype=float)
    reps = np.asarray(representatives, dtype=float)
    n = C.shape[0]
    m = reps.shape[0]
    out = np.zeros((n + m, n + m, n + m))
    out[:n, :n, :n] = C
    for r in range(m):
        out[:n, :n, n + r] = reps[r]
    check_lie_structure(out, tol)
    return out


def momentum_map(action: LieAlgebraAction, phi: State) -> np.ndarray:
    """Covector <h~(phi), xi_a> = <phi, h_a> in the dual basis."""
    if action.hamiltonians is None:
        raise LieActionError("momentum map needs a Hamiltonian action")
    return np.array([expectation(phi, h) for h in action.hamiltonians])


def equivariance_residual(action: LieAlgebraAction, s: SymplecticStructure,
                          phi: State) -> float:
    """Infinitesimal equivariance: <phi, {h_a, h_b}> = <h~(phi), [xi_a, xi_b]>."""
    if action.hamiltonians is None:
        raise LieActionError("equivariance check needs a Hamiltonian action")
    mm = momentum_map(action, phi)
    C = action.structure_constants
    n = action.dim
    worst = 0.0
    for a in range(n):
        for b in range(n):
            lhs = expectation(phi, s.poisson_bracket(action.hamiltonians[a],
                                                     action.hamiltonians[b]))
            rhs = complex(np.sum(C[a, b, :] * mm))
            worst = max(worst, abs(lhs - rhs))
    return worst
