import json
import math

import pytest

from utils.config import load_defaults
from utils.errors import BranchCut, ConfigError, RouteMismatch
from verification.context import Suite, SuiteContext
from verification.report import (
    all_passed,
    exit_code,
    failed,
    lower_bound,
    record,
    render,
    rounded,
    summary,
    upper_bound,
)
from verification.suites import ALL_SCOPE, SUITES, check_names, run_scope

SLOW_CHECKS = {("lattice", "conservation"), ("lattice", "conservation_flows"), ("lattice", "rk4_order"),
               ("hydro", "pde_conservation")}


def _cases():
    for scope in ALL_SCOPE:
        for name in sorted(SUITES[scope].checks):
            marks = [pytest.mark.slow] if (scope, name) in SLOW_CHECKS else []
            yield pytest.param(scope, name, marks=marks, id=f"{scope}.{name}")


@pytest.fixture
def ctx():
    return SuiteContext(seed=7, points=5, settings=load_defaults())


# ---------- Results ----------

def test_upper_and_lower_bounds():
    ok = upper_bound("a", [1e-14, 3e-13], 1e-12)
    assert ok.passed and ok.points_tested == 2 and ok.max_residual == 3e-13
    assert not upper_bound("a", [1e-14, 2e-12], 1e-12).passed
    assert not upper_bound("a", [], 1e-12).passed
    assert not upper_bound("a", [float("nan")], 1e-12).passed

    control = lower_bound("b", [0.5, 0.2], 0.1)
    assert control.passed and control.max_residual == 0.2
    assert not lower_bound("b", [0.5, 0.05], 0.1).passed


def test_record_never_fails():
    r = record("c", [10.0, 3.0])
    assert r.passed and r.tolerance is None and r.max_residual == 10.0


def test_failed_result_carries_error():
    r = failed("d", RouteMismatch("route", 1.0, 0.1))
    assert not r.passed and r.points_tested == 0
    assert r.detail.startswith("RouteMismatch")


def test_report_keys_and_order():
    results = [upper_bound("z.check", [1e-13], 1e-12), lower_bound("a.check", [0.3], 0.1)]
    doc = json.loads(render(results))
    assert [d["check_name"] for d in doc] == ["a.check", "z.check"]
    assert {"check_name", "points_tested", "max_residual", "tolerance", "pass"} <= set(doc[1])
    assert doc[0]["bound"] == "lower"
    assert "bound" not in doc[1]


def test_rounding_is_stable():
    assert rounded(1 / 3) == float("0.333333333333")
    assert rounded(float("nan")) is None
    assert rounded(None) is None
    assert math.isclose(rounded(1.23456789012345e-9), 1.23456789012e-9)


def test_summary():
    results = [upper_bound("a", [1.0], 0.1), upper_bound("b", [0.0], 0.1)]
    assert summary(results) == {"checks": 2, "failed": 1, "failures": ["a"]}
    assert not all_passed(results)


# ---------- Suites ----------

def test_generators_depend_on_seed_and_name(ctx):
    first = ctx.rng("lattice.factorization").uniform(size=3)
    again = ctx.rng("lattice.factorization").uniform(size=3)
    other = ctx.rng("lattice.dressing").uniform(size=3)
    assert list(first) == list(again)
    assert list(first) != list(other)


def test_tolerance_override():
    ctx = SuiteContext(seed=1, points=1, settings={"tolerances": {"x.y": 0.5}})
    assert ctx.tol("x.y", 1e-12) == 0.5
    assert ctx.tol("x.z", 1e-12) == 1e-12


def test_suite_turns_check_failures_into_results(ctx):
    suite = Suite("demo")

    @suite.check("broken")
    def broken(_ctx):
        raise RouteMismatch("demo", 1.0, 1e-3)

    @suite.check("fine")
    def fine(_ctx):
        return [upper_bound(suite.qualified("fine"), [0.0], 1.0)]

    results = suite.run(ctx)
    assert [r.check_name for r in results] == ["demo.broken", "demo.fine"]
    assert [r.passed for r in results] == [False, True]


def test_numerical_error_is_reported_with_exit_code_3(ctx):
    suite = Suite("demo")

    @suite.check("cut")
    def cut(_ctx):
        raise BranchCut("log crossed the cut")

    @suite.check("mismatch")
    def mismatch(_ctx):
        raise RouteMismatch("demo", 1.0, 1e-3)

    @suite.check("fine")
    def fine(_ctx):
        return [upper_bound(suite.qualified("fine"), [0.0], 1.0)]

    results = suite.run(ctx)
    assert [r.check_name for r in results] == ["demo.cut", "demo.fine", "demo.mismatch"]
    assert results[0].detail.startswith("BranchCut")
    assert [r.exit_code for r in results if not r.passed] == [3, 1]
    assert exit_code(results) == 3
    assert exit_code(results[1:]) == 1
    assert exit_code(results[1:2]) == 0


def test_unknown_scope_or_check(ctx):
    with pytest.raises(ConfigError):
        run_scope("quantum", ctx)
    with pytest.raises(ConfigError):
        run_scope("lattice", ctx, "no_such_check")


def test_check_names_cover_all_suites():
    names = check_names("all")
    assert names == sorted(names)
    for scope in ALL_SCOPE:
        assert set(SUITES[scope].checks) <= set(names)


@pytest.mark.parametrize("scope, name", list(_cases()))
def test_check_passes(ctx, scope, name):
    results = run_scope(scope, ctx, name)
    assert results
    bad = [r.to_dict() for r in results if not r.passed]
    assert not bad, bad


def test_tightened_tolerance_fails_the_check():
    settings = load_defaults()
    settings["tolerances"] = {"frobenius.c_vs_prepotential": 1e-300}
    results = run_scope("frobenius", SuiteContext(seed=7, points=5, settings=settings), "c_vs_prepotential")
    by_name = {r.check_name: r for r in results}
    assert not by_name["frobenius.c_vs_prepotential"].passed


def test_qualified_check_name_selects_one_suite(ctx):
    results = run_scope("all", ctx, "mirror.elliptic")
    assert results
    assert all(r.check_name.startswith("mirror.") for r in results)
    with pytest.raises(ConfigError):
        run_scope("lattice", ctx, "mirror.elliptic")
