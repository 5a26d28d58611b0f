"""Hamiltonian mechanics on finite-dimensional complex superalgebras.

Structure constants in, verified symplectic geometry out: superderivation
spaces, the graded cochain calculus, canonical/quantum/fermionic
symplectic structures, Poisson brackets, states and exact time evolution,
skew tensor products with the matched-parameter analysis, Lie algebra
actions with momentum maps, and the time-extended invariant machinery.
"""

from .config import RunConfig, default_tolerance
from .superalgebra import (
    AlgebraError,
    AlgebraMismatch,
    Element,
    Superalgebra,
    build_algebra,
    graded_center,
    grassmann_algebra,
    is_hermitian,
    matrix_algebra,
    multiply,
    star,
    supercommutator,
    supermatrix_algebra,
)
from .derivations import (
    DerivationError,
    IsomorphismError,
    Superderivation,
    bracket,
    conjugation_automorphism,
    inner,
    inner_pair,
    is_special,
    pushforward,
    sder_basis,
    sder_dimensions,
    sder_star,
    verify_star_isomorphism,
)
from .forms import (
    DerivationSpace,
    Form,
    FormError,
    SpanError,
    antisymmetrize,
    check_center_linearity,
    evaluate,
    exterior_derivative,
    form_from_element,
    form_star,
    full_sder_space,
    interior_product,
    is_imaginary,
    is_real,
    lie_derivative,
    pullback,
    random_form,
    space_from_generators,
    wedge,
    zero_form,
)
from .symplectic import (
    SymplecticError,
    SymplecticStructure,
    canonical_form,
    canonical_two_form,
    fermionic_form,
    quantum_form,
    verify_symplectic,
)
from .states import (
    HamiltonianSystem,
    State,
    StateError,
    check_symmetry,
    evolve_heisenberg,
    evolve_liouville,
    expectation,
    maximally_mixed_state,
    state_from_density,
    state_from_vector,
    transpose_action,
)
from .tensor import (
    TensorAlgebra,
    TensorContext,
    TensorError,
    TensorVerdict,
    build_tensor,
    coupled_evolution,
    decompose_tensor,
    hamiltonian_ansatz,
    induced_two_form,
    solve_tensor_hamiltonian,
    tensor_poisson_bracket,
    theorem2_verdict,
)
from .lie_actions import (
    LieActionError,
    LieAlgebraAction,
    ce_cohomology_h2,
    central_extension,
    equivariance_residual,
    momentum_map,
    obstruction_cocycle,
    verify_action,
)
from .extended import (
    ExtendedAlgebra,
    ExtendedDerivation,
    ExtendedElement,
    ExtendedError,
    ExtendedForm,
    build_extended,
    evolution_derivation,
    extended_d,
    extended_element,
    extended_interior,
    extended_poisson,
    hamilton_extended,
    noether_check,
    poincare_cartan,
    presymplectic_omega,
)

__version__ = "0.1.0"
