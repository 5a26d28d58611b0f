"""Cochain calculus: evaluation, wedge, d, Lie derivative, contraction, star."""

import numpy as np
import pytest

from ncham import (
    DerivationSpace,
    Form,
    SpanError,
    bracket,
    canonical_two_form,
    check_center_linearity,
    evaluate,
    exterior_derivative,
    form_from_element,
    form_star,
    full_sder_space,
    inner,
    interior_product,
    is_imaginary,
    is_real,
    lie_derivative,
    pullback,
    quantum_form,
    random_form,
    supercommutator,
    wedge,
)
from ncham.forms import zero_form


def rand_homog_der(space, rng, parity=None):
    pars = sorted(set(int(q) for q in space.parities))
    p = int(pars[rng.integers(0, len(pars))]) if parity is None else parity
    c = np.where(space.parities == p,
                 rng.normal(size=space.dim) + 1j * rng.normal(size=space.dim), 0)
    return space.from_coords(c, p)


@pytest.fixture(scope="module")
def m2_canonical(m2):
    return canonical_two_form(m2)


def test_evaluate_canonical_on_inner_pair(m2, m2_canonical):
    space, wc = m2_canonical
    sx, sy = m2.basis_element(1), m2.basis_element(2)
    val = evaluate(wc, [inner(sx), inner(sy)])
    assert (val - supercommutator(sx, sy)).is_zero(1e-10)
    assert abs(val.coeffs[3] - 2j) < 1e-10


def test_evaluate_repeated_even_argument_vanishes(m2_canonical, rng):
    space, wc = m2_canonical
    X = rand_homog_der(space, rng, 0)
    assert evaluate(wc, [X, X]).is_zero(1e-10)


def test_evaluate_basis_tuple_returns_component(m2_canonical):
    space, wc = m2_canonical
    val = evaluate(wc, [space.basis[0], space.basis[2]])
    assert np.allclose(val.coeffs, wc.comps[0, 2], atol=1e-12)


def test_evaluate_rejects_outside_span(m2, m2_canonical):
    space, wc = m2_canonical
    from ncham import Superderivation

    junk = Superderivation(m2, np.eye(4), 0)  # identity map is not a derivation
    with pytest.raises(SpanError):
        evaluate(wc, [junk, space.basis[0]])


def test_wedge_zero_form_is_left_multiplication(m2, m2_space, rng):
    a = m2.element(rng.normal(size=4) + 1j * rng.normal(size=4)).parity_part(0)
    beta = random_form(m2_space, 1, 0, rng)
    out = wedge(form_from_element(m2_space, a), beta)
    for b in range(m2_space.dim):
        expect = m2.multiply_coeffs(a.coeffs, beta.comps[b])
        assert np.allclose(out.comps[b], expect, atol=1e-10)


def test_wedge_even_one_forms_two_slot_formula(m2_space, m2, rng):
    alpha = random_form(m2_space, 1, 0, rng)
    beta = random_form(m2_space, 1, 0, rng)
    w = wedge(alpha, beta)
    for i in range(m2_space.dim):
        for j in range(m2_space.dim):
            direct = (m2.multiply_coeffs(alpha.comps[i], beta.comps[j])
                      - m2.multiply_coeffs(alpha.comps[j], beta.comps[i]))
            assert np.allclose(w.comps[i, j], direct, atol=1e-10)


def test_wedge_alpha_alpha_vanishes_on_diagonal(m2_space, rng):
    alpha = random_form(m2_space, 1, 0, rng)
    w = wedge(alpha, alpha)
    X = rand_homog_der(m2_space, rng, 0)
    assert evaluate(w, [X, X]).is_zero(1e-10)


def test_d_zero_form_is_derivation_action(m2_space, m2, rng):
    a = m2.element(rng.normal(size=4)).parity_part(0)
    dA = exterior_derivative(form_from_element(m2_space, a))
    X = rand_homog_der(m2_space, rng, 0)
    assert (evaluate(dA, [X]) - X(a)).is_zero(1e-10)


def test_canonical_form_closed(m2_canonical):
    space, wc = m2_canonical
    assert exterior_derivative(wc).norm() < 1e-12


def test_d_squared_zero_random(m2_space, rng):
    for p in (0, 1, 2):
        w = random_form(m2_space, p, 0, rng)
        assert exterior_derivative(exterior_derivative(w)).norm() < 1e-10


def test_canonical_form_invariant(m2_canonical):
    space, wc = m2_canonical
    for X in space.basis:
        assert lie_derivative(X, wc).norm() < 1e-12


def test_lie_derivative_on_zero_forms(m2_space, m2, rng):
    a = m2.element(rng.normal(size=4)).parity_part(0)
    Y = rand_homog_der(m2_space, rng, 0)
    out = lie_derivative(Y, form_from_element(m2_space, a))
    assert np.allclose(out.comps, (Y(a)).coeffs, atol=1e-12)


def test_lie_interior_commutator_identity(gr2_fermionic, rng):
    # (L_Y i_X - i_X L_Y) w = (-1)^(eps_Y eps_w) i_[Y,X] w
    space = gr2_fermionic.space
    for _ in range(5):
        w = random_form(space, 2, int(rng.integers(0, 2)), rng)
        X = rand_homog_der(space, rng)
        Y = rand_homog_der(space, rng)
        lhs = lie_derivative(Y, interior_product(X, w)) \
            - interior_product(X, lie_derivative(Y, w))
        rhs = (-1.0) ** (Y.parity * w.parity) * interior_product(bracket(Y, X), w)
        assert (lhs - rhs).norm() < 1e-9


def test_interior_product_zero_on_zero_forms(m2_space, m2):
    a = form_from_element(m2_space, m2.unit())
    X = m2_space.basis[0]
    assert interior_product(X, a).norm() == 0.0


def test_cartan_identity_random(m11, rng):
    space = full_sder_space(m11)
    for _ in range(8):
        p = int(rng.integers(1, 3))
        w = random_form(space, p, int(rng.integers(0, 2)), rng)
        X = rand_homog_der(space, rng)
        lhs = interior_product(X, exterior_derivative(w)) \
            + exterior_derivative(interior_product(X, w))
        rhs = (-1.0) ** (X.parity * w.parity) * lie_derivative(X, w)
        assert (lhs - rhs).norm() < 1e-9


def test_contraction_of_canonical_by_inner_is_minus_d(m2, m2_canonical, rng):
    space, wc = m2_canonical
    a = m2.element(rng.normal(size=4) + 1j * rng.normal(size=4)).parity_part(0)
    lhs = interior_product(inner(a, 0), wc)
    dA = exterior_derivative(form_from_element(m2_space := space, a))
    assert (lhs + dA).norm() < 1e-10


def test_pullback_identity(m2_canonical):
    space, wc = m2_canonical
    out = pullback(np.eye(space.algebra.dim), wc, space, verified=True)
    assert (out - wc).norm() < 1e-12


def test_pullback_commutes_with_d(m2, m2_space, rng):
    from ncham import conjugation_automorphism

    u = np.array([[np.cos(0.3), 1j * np.sin(0.3)], [1j * np.sin(0.3), np.cos(0.3)]])
    phi = conjugation_automorphism(m2, u)
    alpha = random_form(m2_space, 1, 0, rng)
    lhs = pullback(phi, exterior_derivative(alpha), m2_space, verified=True)
    rhs = exterior_derivative(pullback(phi, alpha, m2_space, verified=True))
    assert (lhs - rhs).norm() < 1e-10


def test_infinitesimal_pullback_finite_difference(m2, m2_quantum):
    # pulled-back form along the flow of Y differs by -t L_Y w + O(t^2)
    from ncham import HamiltonianSystem

    space = m2_quantum.space
    sysm = HamiltonianSystem(m2_quantum, 0.8 * m2.basis_element(3))
    Y = m2_quantum.hamiltonian_derivation(0.8 * m2.basis_element(3))
    h = 1e-5
    plus = pullback(sysm.evolution_matrix(h), m2_quantum.omega, space, verified=True)
    minus = pullback(sysm.evolution_matrix(-h), m2_quantum.omega, space, verified=True)
    num = (1.0 / (2 * h)) * (plus - minus)
    exact = -1.0 * lie_derivative(Y, m2_quantum.omega)
    assert (num - exact).norm() < 1e-6


def test_star_canonical_imaginary_quantum_real(m2, m2_quantum, m2_canonical):
    space, wc = m2_canonical
    assert is_imaginary(wc)
    assert not is_real(wc)
    assert is_real(m2_quantum.omega)


def test_star_involutive(gr2_fermionic, rng):
    space = gr2_fermionic.space
    w = random_form(space, 2, 0, rng)
    assert (form_star(form_star(w)) - w).norm() < 1e-10


def test_star_commutes_with_d(m11, rng):
    space = full_sder_space(m11)
    for p in (0, 1, 2):
        w = random_form(space, p, int(rng.integers(0, 2)), rng)
        lhs = exterior_derivative(form_star(w))
        rhs = form_star(exterior_derivative(w))
        assert (lhs - rhs).norm() < 1e-9


def test_center_linearity_scalar_center(m2_canonical):
    space, wc = m2_canonical
    assert check_center_linearity(wc)


def test_center_linearity_grassmann_frame(gr2, gr2_fermionic):
    assert check_center_linearity(gr2_fermionic.omega)


def test_center_linearity_detects_corruption(gr2_fermionic):
    w = gr2_fermionic.omega
    bad = Form(w.space, 2, 0, w.comps.copy())
    # overwrite one component with a center-incompatible value
    idx = np.unravel_index(np.argmax(np.abs(bad.comps)), bad.comps.shape)
    bad.comps[idx[0], idx[1]] = np.roll(bad.comps[idx[0], idx[1]], 1) + 0.5
    assert not check_center_linearity(bad)


def test_degree_cap_on_even_spaces(m2_space):
    with pytest.raises(Exception):
        Form(m2_space, 4, 0, np.ones((3, 3, 3, 3, 4)))
    # zero components of too-high degree are tolerated (d of a top form)
    z = Form(m2_space, 4, 0, np.zeros((3, 3, 3, 3, 4)))
    assert z.norm() == 0.0


def test_pullback_duality_two_paths(m2, m2_space, rng):
    # (phi^* w)(X1, X2) = phi^{-1}[ w(phi_* X1, phi_* X2) ], evaluated both ways
    from ncham import conjugation_automorphism, pushforward

    u = np.array([[np.cos(0.7), np.sin(0.7)], [-np.sin(0.7), np.cos(0.7)]])
    phi = conjugation_automorphism(m2, u)
    w = random_form(m2_space, 2, 0, rng)
    pulled = pullback(phi, w, m2_space, verified=True)
    phi_inv = np.linalg.inv(phi)
    for _ in range(4):
        xs = [rand_homog_der(m2_space, rng, 0) for _ in range(2)]
        lhs = evaluate(pulled, xs).coeffs
        pushed = [pushforward(phi, x, verified=True) for x in xs]
        rhs = phi_inv @ evaluate(w, pushed).coeffs
        assert np.abs(lhs - rhs).max() < 1e-9
