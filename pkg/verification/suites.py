from typing import Dict, List, Tuple

from utils.errors import ConfigError
from verification.context import Suite, SuiteContext
from verification.frobenius_suite import FROBENIUS
from verification.hydro_suite import HYDRO
from verification.lattice_suite import LATTICE
from verification.mirror_suite import MIRROR
from verification.report import CheckResult
from verification.specfun_suite import SPECFUN

SUITES: Dict[str, Suite] = {s.name: s for s in (SPECFUN, LATTICE, HYDRO, FROBENIUS, MIRROR)}

# what `verify all` runs, in order
ALL_SCOPE = ("specfun", "lattice", "hydro", "frobenius", "mirror")


def check_names(scope: str) -> List[str]:
    suites = ALL_SCOPE if scope == "all" else (scope,)
    return sorted(name for s in suites for name in SUITES[s].checks)


def _selection(scope: str, only: str) -> Tuple[Tuple[str, ...], str]:
    """Suites to run and the bare check name; `only` may be 'check' or 'suite.check'."""
    suites = ALL_SCOPE if scope == "all" else (scope,)
    if only in (None, "all"):
        return suites, "all"

    prefix, _, bare = only.rpartition(".")
    if prefix:
        if prefix not in suites:
            raise ConfigError(f"check {only!r} is not in scope {scope!r}")
        suites = (prefix,)
    if not any(bare in SUITES[s].checks for s in suites):
        raise ConfigError(f"unknown check {only!r} in scope {scope!r}; known: {', '.join(check_names(scope))}")
    return tuple(s for s in suites if bare in SUITES[s].checks), bare


def run_scope(scope: str, ctx: SuiteContext, only: str = "all") -> List[CheckResult]:
    """Run one suite (or every suite for scope 'all'), optionally a single check by name."""
    if scope != "all" and scope not in SUITES:
        raise ConfigError(f"unknown verification scope {scope!r}; choose from all, {', '.join(ALL_SCOPE)}")
    suites, bare = _selection(scope, only)

    results: List[CheckResult] = []
    for name in suites:
        results.extend(SUITES[name].run(ctx, bare))
    return results
