import zlib
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from utils.errors import CheckFailure, NumericalError
from utils.logger import get_logger
from verification.report import CheckResult, failed

log = get_logger("verify")

CheckFn = Callable[["SuiteContext"], List[CheckResult]]


@dataclass
class SuiteContext:
    seed: int
    points: int
    settings: dict = field(default_factory=dict)

    def rng(self, name: str) -> np.random.Generator:
        """Independent generator per check: the result of one check never depends on which others ran."""
        return np.random.default_rng([self.seed, zlib.crc32(name.encode())])

    def tol(self, name: str, default: float) -> float:
        return float((self.settings.get("tolerances") or {}).get(name, default))

    def section(self, name: str) -> dict:
        return self.settings.get(name) or {}


class Suite:
    """Named group of checks. Check names in reports are `<suite>.<check>`."""

    def __init__(self, name: str):
        self.name = name
        self.checks: Dict[str, CheckFn] = {}

    def check(self, name: str):
        def register(fn: CheckFn) -> CheckFn:
            self.checks[name] = fn
            return fn
        return register

    def qualified(self, name: str) -> str:
        return f"{self.name}.{name}"

    def run(self, ctx: SuiteContext, only: str = "all") -> List[CheckResult]:
        selected = sorted(self.checks) if only in (None, "all") else [n for n in sorted(self.checks) if n == only]
        results: List[CheckResult] = []
        log.info("suite %s: %d checks, seed %d, %d points", self.name, len(selected), ctx.seed, ctx.points)
        for name in selected:
            try:
                results.extend(self.checks[name](ctx))
            except (CheckFailure, NumericalError) as e:
                log.warning("check %s failed: %s", self.qualified(name), e)
                results.append(failed(self.qualified(name), e))
        bad = [r.check_name for r in results if not r.passed]
        if bad:
            log.warning("suite %s: %d failing: %s", self.name, len(bad), ", ".join(bad))
        return results
