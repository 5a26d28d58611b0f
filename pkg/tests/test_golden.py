"""Golden-report regression: structural values exact, residuals bounded.

The golden file freezes every concrete reference value the battery
produces (derivation dimensions, center dimensions, product verdicts and
the universal parameter, momentum-map values, cohomology dimensions);
residual-type entries are compared against their recorded tolerances so
the test stays robust to harmless last-digit drift.
"""

import json
from pathlib import Path

import pytest

from ncham.config import RunConfig
from ncham.suite import run_suite

GOLDEN = Path(__file__).parent / "golden" / "suite_seed42.json"


@pytest.fixture(scope="module")
def fresh():
    return run_suite(RunConfig(seed=42), calculus_instances=50, poisson_instances=100)


@pytest.fixture(scope="module")
def golden():
    with open(GOLDEN) as fh:
        return json.load(fh)


def test_same_check_roster(fresh, golden):
    assert [c["name"] for c in fresh["checks"]] == [c["name"] for c in golden["checks"]]


def test_all_flags_and_details_match(fresh, golden):
    for new, old in zip(fresh["checks"], golden["checks"]):
        assert new["passed"] == old["passed"], new["name"]
        if "detail" in old:
            _compare(new["name"], new.get("detail"), old["detail"])


def _compare(name, new, old):
    assert type(new) == type(old) or isinstance(new, (int, float)) and isinstance(old, (int, float)), name
    if isinstance(old, dict):
        assert set(new) == set(old), name
        for k in old:
            _compare(f"{name}.{k}", new[k], old[k])
    elif isinstance(old, list):
        assert len(new) == len(old), name
        for a, b in zip(new, old):
            _compare(name, a, b)
    elif isinstance(old, float):
        assert abs(new - old) <= 1e-8, f"{name}: {new} vs {old}"
    else:
        assert new == old, name


def test_residuals_within_recorded_tolerances(fresh, golden):
    for new, old in zip(fresh["checks"], golden["checks"]):
        if "residual" in old:
            assert new["residual"] <= old["tolerance"], new["name"]


def test_whole_battery_green(fresh):
    assert fresh["passed"]
