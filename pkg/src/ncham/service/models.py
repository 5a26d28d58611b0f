"""Pydantic request/response models for the compute service.

Complex scalars travel as [re, im] pairs throughout; algebra and form
specs mirror the JSON spec-file layout, so files can be posted verbatim.
"""

from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field


class AlgebraSpec(BaseModel):
    builder: Optional[str] = Field(None, description="matrix:n, supermatrix:p|q or grassmann:n")
    dim: Optional[int] = None
    labels: Optional[List[str]] = None
    parity: Optional[List[int]] = None
    unit: Optional[int] = None
    structure: Optional[List[List[float]]] = Field(
        None, description="sparse triplets [i, j, k, re, im]")
    involution: Optional[List[List[float]]] = Field(
        None, description="sparse entries [i, j, re, im]")
    name: Optional[str] = None

    def as_dict(self) -> dict:
        return self.model_dump(exclude_none=True)


class FormSpec(BaseModel):
    form: Literal["canonical", "quantum", "fermionic", "components"]
    hbar: float = 1.0
    b: Optional[List[float]] = None
    components: Optional[List[Any]] = None
    require_real: bool = True

    def as_dict(self) -> dict:
        return self.model_dump(exclude_none=True)


class SystemSpec(BaseModel):
    algebra: AlgebraSpec
    form: FormSpec

    def as_dict(self) -> dict:
        return {"algebra": self.algebra.as_dict(), "form": self.form.as_dict()}


class ElementSpec(BaseModel):
    coeffs: Optional[List[List[float]]] = None
    basis: Optional[Union[str, int]] = None
    scale: Optional[List[float]] = None

    def as_dict(self) -> Union[dict, list]:
        return self.model_dump(exclude_none=True)


class StateSpec(BaseModel):
    vector: Optional[List[List[float]]] = None
    density: Optional[List[List[List[float]]]] = None
    functional: Optional[List[List[float]]] = None
    kind: Optional[Literal["maximally-mixed"]] = None

    def as_dict(self) -> dict:
        return self.model_dump(exclude_none=True)


class LieSpec(BaseModel):
    dim: int
    structure: List[List[float]] = Field(default_factory=list,
                                         description="sparse triplets [a, b, c, re, im]")
    hamiltonians: Optional[List[ElementSpec]] = None
    generators: Optional[List[List[List[List[float]]]]] = Field(
        None, description="even generator matrices, entries as [re, im] pairs")

    def as_dict(self) -> dict:
        out = {"dim": self.dim, "structure": self.structure}
        if self.hamiltonians is not None:
            out["hamiltonians"] = [h.as_dict() for h in self.hamiltonians]
        if self.generators is not None:
            out["generators"] = self.generators
        return out


# -- requests -----------------------------------------------------------------


class VerifyAlgebraRequest(BaseModel):
    algebra: AlgebraSpec
    tolerance: Optional[float] = None


class SderBasisRequest(BaseModel):
    algebra: AlgebraSpec
    tolerance: Optional[float] = None


class CheckSymplecticRequest(BaseModel):
    system: SystemSpec
    tolerance: Optional[float] = None


class PoissonRequest(BaseModel):
    system: SystemSpec
    a: ElementSpec
    b: ElementSpec
    tolerance: Optional[float] = None


class EvolveRequest(BaseModel):
    system: SystemSpec
    hamiltonian: ElementSpec
    times: Optional[List[float]] = None
    t_max: float = 10.0
    steps: int = 21
    observable: Optional[ElementSpec] = None
    state: Optional[StateSpec] = None
    tolerance: Optional[float] = None


class TensorCheckRequest(BaseModel):
    system1: SystemSpec
    system2: SystemSpec
    tolerance: Optional[float] = None


class ActionCheckRequest(BaseModel):
    system: SystemSpec
    lie: LieSpec
    state: Optional[StateSpec] = None
    tolerance: Optional[float] = None


class H2Request(BaseModel):
    lie: LieSpec
    tolerance: Optional[float] = None


class NoetherRequest(BaseModel):
    system: SystemSpec
    hamiltonian_powers: List[ElementSpec] = Field(
        description="coefficients of the Hamiltonian polynomial, by power of t")
    generator: ElementSpec
    degree_bound: int = 4
    tolerance: Optional[float] = None


class SuiteRequest(BaseModel):
    seed: int = 42
    tolerance: Optional[float] = None
    calculus_instances: int = 50
    poisson_instances: int = 100


# -- responses ----------------------------------------------------------------


class CheckResult(BaseModel):
    name: str
    passed: bool
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    detail: Optional[Dict[str, Any]] = None


class VerifyAlgebraResponse(BaseModel):
    valid: bool
    name: str
    dim: int
    checks: List[CheckResult]
    center_dimension: int


class SderBasisResponse(BaseModel):
    dim_even: int
    dim_odd: int
    parities: List[int]
    worst_leibniz_residual: float
    all_inner: bool


class SymplecticResponse(BaseModel):
    valid: bool
    reason: Optional[str] = None
    witness: Optional[List[Any]] = None
    reality: Optional[str] = None
    exact: Optional[bool] = None
    message: Optional[str] = None


class PoissonResponse(BaseModel):
    coeffs: List[List[float]]
    labels: List[str]


class EvolveResponse(BaseModel):
    times: List[float]
    columns: List[str]
    rows: List[List[float]]


class TensorCheckResponse(BaseModel):
    verdict: str
    lam: Optional[List[float]] = None
    planck_magnitude: Optional[float] = None
    witness: Optional[List[Any]] = None
    diagnostics: Dict[str, Any] = Field(default_factory=dict)


class ActionCheckResponse(BaseModel):
    homomorphism_residual: float
    locally_hamiltonian_residual: float
    hamiltonian: bool
    poisson: bool
    poisson_residual: Optional[float] = None
    generator_match_residual: Optional[float] = None
    momentum_map: Optional[List[List[float]]] = None
    equivariance_residual: Optional[float] = None


class H2Response(BaseModel):
    dim: int
    representatives: List[List[List[float]]]


class NoetherResponse(BaseModel):
    closed: bool
    exact: bool
    conserved: bool
    closed_residual: float
    exact_residual: Optional[float] = None
    conservation_residual: Optional[float] = None
    invariant_powers: Optional[List[List[List[float]]]] = None


class SuiteResponse(BaseModel):
    passed: bool
    config: Dict[str, Any]
    checks: List[CheckResult]
