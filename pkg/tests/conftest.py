import numpy as np
import pytest

from ncham import (
    build_tensor,
    fermionic_form,
    full_sder_space,
    grassmann_algebra,
    matrix_algebra,
    quantum_form,
    supermatrix_algebra,
)


@pytest.fixture(scope="session")
def m2():
    return matrix_algebra(2)


@pytest.fixture(scope="session")
def m3():
    return matrix_algebra(3)


@pytest.fixture(scope="session")
def gr2():
    return grassmann_algebra(2)


@pytest.fixture(scope="session")
def m11():
    return supermatrix_algebra(1, 1)


@pytest.fixture(scope="session")
def m2_quantum(m2):
    return quantum_form(m2, hbar=1.0)


@pytest.fixture(scope="session")
def gr2_fermionic(gr2):
    return fermionic_form(gr2, 2)


@pytest.fixture(scope="session")
def m2_space(m2):
    return full_sder_space(m2)


@pytest.fixture(scope="session")
def t22(m2):
    return build_tensor(m2, m2)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240809)


def pauli(m2, name):
    return m2.basis_element({"I": 0, "sx": 1, "sy": 2, "sz": 3}[name])
