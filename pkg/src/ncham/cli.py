"""Command-line client for the kernel; thin wrapper over the service handlers.

Exit codes: 0 when the command ran and its checks passed (verdicts such as
"degenerate" count as results, not failures), 1 when a mathematical check
failed, 2 on malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .config import DEFAULT_SEED, default_tolerance
from .specio import SpecError, dump_report, load_json
from .superalgebra import AlgebraError
from .symplectic import SymplecticError
from .service import handlers
from .service import models as m


def _json_arg(raw: str, loc: str):
    """Inline JSON, or @path to read from a file."""
    if raw.startswith("@"):
        return load_json(raw[1:])
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SpecError(loc, f"invalid JSON ({exc.msg})")


def _emit(args, payload: dict) -> None:
    fmt = args.format
    if fmt == "csv" and "rows" in payload:
        cols = payload["columns"]
        lines = [",".join(cols)]
        for row in payload["rows"]:
            lines.append(",".join(repr(float(v)) for v in row))
        sys.stdout.write("\n".join(lines) + "\n")
        return
    if fmt == "csv":
        fmt = "json"
    sys.stdout.write(dump_report(payload, fmt))


def _element_spec(raw: str, loc: str) -> m.ElementSpec:
    data = _json_arg(raw, loc)
    if isinstance(data, list):
        return m.ElementSpec(coeffs=data)
    return m.ElementSpec(**data)


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ncham",
        description="Computational kernel for Hamiltonian mechanics on "
                    "finite-dimensional superalgebras.",
        epilog="Sign conventions: the bracket is {A,B} = w(Y_A, Y_B) = Y_A(B), "
               "which differs from the textbook classical bracket by a sign; "
               "the canonical 2-form is imaginary and the quantum form "
               "b*w_c with imaginary b is real.",
    )
    parser.add_argument("--tol", type=float, default=None,
                        help="absolute tolerance (default 1e-9, or NCHAM_TOL)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--format", choices=("text", "json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-algebra", help="check the axioms of an algebra spec")
    p.add_argument("algebra", help="algebra spec file")

    p = sub.add_parser("sder-basis", help="dimensions and parity split of the derivation space")
    p.add_argument("algebra")

    p = sub.add_parser("check-symplectic", help="validate a 2-form as a symplectic structure")
    p.add_argument("system", help="combined {algebra, form} spec file")

    p = sub.add_parser("pb", help="Poisson bracket of two elements")
    p.add_argument("system")
    p.add_argument("--a", required=True, help="element spec (inline JSON or @file)")
    p.add_argument("--b", required=True)

    p = sub.add_parser("evolve", help="time evolution, CSV time series")
    p.add_argument("system")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--observable", default=None)
    p.add_argument("--state", default=None)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=21)

    p = sub.add_parser("tensor-check", help="induced-form verdict for a factor pair")
    p.add_argument("system1")
    p.add_argument("system2")

    p = sub.add_parser("action-check", help="verify a Lie algebra action")
    p.add_argument("system")
    p.add_argument("lie", help="Lie algebra spec file")
    p.add_argument("--state", default=None, help="state spec for the momentum map")

    p = sub.add_parser("h2", help="degree-2 cohomology with trivial coefficients")
    p.add_argument("lie")

    p = sub.add_parser("noether-check", help="solve for a conserved invariant")
    p.add_argument("system")
    p.add_argument("--hamiltonian", required=True,
                   help="JSON list of element specs, one per power of t")
    p.add_argument("--generator", required=True)
    p.add_argument("--degree", type=int, default=4)

    p = sub.add_parser("suite", help="run the full deterministic check battery")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--calculus-instances", type=int, default=50)
    p.add_argument("--poisson-instances", type=int, default=100)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except SpecError as exc:
        sys.stderr.write(f"spec error: {exc}\n")
        return 2
    except AlgebraError as exc:
        sys.stderr.write(f"algebra error: {exc}\n")
        return 2
    except Exception as exc:  # pydantic shape errors and similar input faults
        from pydantic import ValidationError

        if isinstance(exc, (ValidationError, TypeError)):
            sys.stderr.write(f"input error: {exc}\n")
            return 2
        raise


def _dispatch(args) -> int:
    tol = args.tol if args.tol is not None else default_tolerance()

    if args.command == "verify-algebra":
        req = m.VerifyAlgebraRequest(algebra=m.AlgebraSpec(**load_json(args.algebra)),
                                     tolerance=tol)
        out = handlers.verify_algebra(req)
        _emit(args, out.model_dump())
        return 0 if out.valid else 1

    if args.command == "sder-basis":
        req = m.SderBasisRequest(algebra=m.AlgebraSpec(**load_json(args.algebra)),
                                 tolerance=tol)
        out = handlers.sder_basis_info(req)
        _emit(args, out.model_dump())
        return 0

    if args.command == "check-symplectic":
        req = m.CheckSymplecticRequest(system=m.SystemSpec(**load_json(args.system)),
                                       tolerance=tol)
        out = handlers.check_symplectic(req)
        _emit(args, out.model_dump())
        return 0

    if args.command == "pb":
        req = m.PoissonRequest(system=m.SystemSpec(**load_json(args.system)),
                               a=_element_spec(args.a, "a"),
                               b=_element_spec(args.b, "b"), tolerance=tol)
        try:
            out = handlers.poisson(req)
        except SymplecticError as exc:
            sys.stderr.write(f"symplectic error: {exc}\n")
            return 1
        _emit(args, out.model_dump())
        return 0

    if args.command == "evolve":
        req = m.EvolveRequest(
            system=m.SystemSpec(**load_json(args.system)),
            hamiltonian=_element_spec(args.hamiltonian, "hamiltonian"),
            observable=(None if args.observable is None
                        else _element_spec(args.observable, "observable")),
            state=(None if args.state is None
                   else m.StateSpec(**_json_arg(args.state, "state"))),
            t_max=args.t_max, steps=args.steps, tolerance=tol,
        )
        out = handlers.evolve(req)
        _emit(args, out.model_dump())
        return 0

    if args.command == "tensor-check":
        req = m.TensorCheckRequest(system1=m.SystemSpec(**load_json(args.system1)),
                                   system2=m.SystemSpec(**load_json(args.system2)),
                                   tolerance=tol)
        out = handlers.tensor_check(req)
        _emit(args, out.model_dump())
        return 0

    if args.command == "action-check":
        req = m.ActionCheckRequest(
            system=m.SystemSpec(**load_json(args.system)),
            lie=m.LieSpec(**load_json(args.lie)),
            state=(None if args.state is None
                   else m.StateSpec(**_json_arg(args.state, "state"))),
            tolerance=tol,
        )
        out = handlers.action_check(req)
        _emit(args, out.model_dump())
        return 0

    if args.command == "h2":
        req = m.H2Request(lie=m.LieSpec(**load_json(args.lie)), tolerance=tol)
        out = handlers.h2(req)
        _emit(args, out.model_dump())
        return 0

    if args.command == "noether-check":
        powers = _json_arg(args.hamiltonian, "hamiltonian")
        if not isinstance(powers, list):
            raise SpecError("hamiltonian", "expected a JSON list of element specs")
        req = m.NoetherRequest(
            system=m.SystemSpec(**load_json(args.system)),
            hamiltonian_powers=[
                m.ElementSpec(coeffs=p) if isinstance(p, list) else m.ElementSpec(**p)
                for p in powers
            ],
            generator=_element_spec(args.generator, "generator"),
            degree_bound=args.degree, tolerance=tol,
        )
        out = handlers.noether(req)
        _emit(args, out.model_dump())
        return 0

    if args.command == "suite":
        req = m.SuiteRequest(seed=args.seed, tolerance=tol,
                             calculus_instances=args.calculus_instances,
                             poisson_instances=args.poisson_instances)
        out = handlers.suite(req)
        _emit(args, out.model_dump(exclude_none=True))
        return 0 if out.passed else 1

    raise SpecError("command", f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
