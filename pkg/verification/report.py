"""
Check results and their deterministic JSON rendering.

A check is an upper bound (the residual must stay below the tolerance), a lower
bound (a negative control: the deviation must exceed the threshold), or a
record (a measured number that is reported and never fails).
"""
import json
import math
from dataclasses import dataclass
from typing import Iterable, List

from utils.errors import exit_code_for

UPPER = "upper"
LOWER = "lower"
RECORD = "record"

SIGNIFICANT_DIGITS = 12


@dataclass
class CheckResult:
    check_name: str
    points_tested: int
    max_residual: float
    tolerance: float | None
    passed: bool
    bound: str = UPPER
    detail: str | None = None
    exit_code: int = 1      # what a failure of this check makes the CLI return

    def to_dict(self) -> dict:
        out = {
            "check_name": self.check_name,
            "points_tested": self.points_tested,
            "max_residual": rounded(self.max_residual),
            "tolerance": rounded(self.tolerance),
            "pass": self.passed,
        }
        if self.bound != UPPER:
            out["bound"] = self.bound
        if self.detail is not None:
            out["detail"] = self.detail
        return out


# ---------- Builders ----------

def _worst(values: Iterable[float], pick) -> tuple:
    values = [float(v) for v in values]
    if not values:
        return 0, float("nan")
    if any(math.isnan(v) for v in values):
        return len(values), float("nan")
    return len(values), pick(values)


def upper_bound(name: str, residuals: Iterable[float], tol: float, detail: str | None = None) -> CheckResult:
    count, worst = _worst(residuals, max)
    ok = count > 0 and math.isfinite(worst) and worst <= tol
    return CheckResult(name, count, worst, tol, ok, UPPER, detail)


def lower_bound(name: str, deviations: Iterable[float], threshold: float,
                detail: str | None = None) -> CheckResult:
    """Negative control: the smallest deviation is reported and must exceed `threshold`."""
    count, least = _worst(deviations, min)
    ok = count > 0 and math.isfinite(least) and least > threshold
    return CheckResult(name, count, least, threshold, ok, LOWER, detail)


def record(name: str, values: Iterable[float], detail: str | None = None) -> CheckResult:
    count, worst = _worst(values, max)
    return CheckResult(name, count, worst, None, True, RECORD, detail)


def failed(name: str, error: Exception) -> CheckResult:
    """A check that could not be evaluated. Numerical errors keep their exit code."""
    return CheckResult(name, 0, float("nan"), None, False, UPPER, f"{type(error).__name__}: {error}",
                       exit_code_for(error))


# ---------- Rendering ----------

def rounded(x):
    if x is None:
        return None
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def render(results: List[CheckResult]) -> str:
    ordered = sorted(results, key=lambda r: r.check_name)
    return json.dumps([r.to_dict() for r in ordered], sort_keys=True, indent=2) + "\n"


def all_passed(results: List[CheckResult]) -> bool:
    return all(r.passed for r in results)


def exit_code(results: List[CheckResult]) -> int:
    return max((r.exit_code for r in results if not r.passed), default=0)


def summary(results: List[CheckResult]) -> dict:
    failures = sorted(r.check_name for r in results if not r.passed)
    return {"checks": len(results), "failed": len(failures), "failures": failures}
