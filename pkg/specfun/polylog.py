import cmath

from specfun.series import DEFAULT_CONTROL, SeriesControl
from utils.errors import BranchCut, DomainError, NoConvergence


def _on_cut(x: complex) -> bool:
    return x.imag == 0 and x.real >= 1


def polylog(s: int, x, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Li_s(x) for s in {0, 1, 2, 3}."""
    x = complex(x)

    if s == 0:
        if _on_cut(x):
            raise BranchCut(f"Li0 undefined at x = {x}")
        return x / (1 - x)
    if s == 1:
        if _on_cut(x):
            raise BranchCut(f"Li1 on branch cut at x = {x}")
        return -cmath.log(1 - x)
    if s not in (2, 3):
        raise DomainError(f"polylog order {s} not supported")

    r = abs(x)
    if r >= 1:
        raise DomainError(f"Li{s} series needs |x| < 1, got {r:.6g}")

    total = 0.0 + 0.0j
    power = 1.0 + 0.0j
    for k in range(1, ctl.max_terms + 1):
        power *= x
        total += power / k**s
        # tail sum_{j>k} |x|^j / j^s <= |x|^(k+1) / ((k+1)^s (1-|x|))
        if r ** (k + 1) / ((k + 1) ** s * (1 - r)) <= ctl.tol:
            return total

    raise NoConvergence(f"Li{s} not converged after {ctl.max_terms} terms at |x| = {r:.6g}")
