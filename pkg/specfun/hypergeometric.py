"""
Pochhammer symbols, the Gauss series 2F1 and the Humbert double series Psi2.

All series are summed term by term with a geometric tail bound, so the
returned value is within `ctl.tol` of the limit once the term ratio has
settled below one.
"""
from typing import List

from specfun.series import DEFAULT_CONTROL, SeriesControl, nonpositive_integer
from utils.errors import NoConvergence, PoleAtC


def pochhammer(a: complex, n: int) -> complex:
    if n < 0:
        raise ValueError(f"pochhammer needs n >= 0, got {n}")
    out = 1.0 + 0.0j
    for k in range(n):
        out *= a + k
    return out


def _tail_small(term: complex, ratio: float, total: complex, tol: float) -> bool:
    if ratio >= 1.0:
        return False
    return abs(term) * ratio / (1.0 - ratio) <= tol * max(1.0, abs(total))


def gauss_2f1(a, b, c, x, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """2F1(a, b; c; x) by direct summation. Terminating series are exact."""
    a, b, c, x = complex(a), complex(b), complex(c), complex(x)
    if x == 0:
        return 1.0 + 0.0j

    n_a, n_b = nonpositive_integer(a), nonpositive_integer(b)
    stops = [n for n in (n_a, n_b) if n is not None]
    degree = min(stops) if stops else None

    if degree is None and abs(x) >= 1:
        raise NoConvergence(f"2F1 series diverges at |x| = {abs(x):.3g}")

    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    k = 0
    while True:
        if degree is not None and k >= degree:
            return total
        if c + k == 0:
            raise PoleAtC(f"2F1: c = {c} hits a pole at k = {k}")

        step = (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        term *= step
        total += term
        k += 1

        if degree is None and c + k != 0:
            k_next = k
            # the term ratio tends to |x|, possibly from below
            ratio = max(abs((a + k_next) * (b + k_next) / ((c + k_next) * (k_next + 1)) * x), abs(x))
            if _tail_small(term, ratio, total, ctl.tol):
                return total

        if k >= ctl.max_terms:
            raise NoConvergence(f"2F1 not converged after {k} terms (x = {x})")


def psi2_diagonals(a, b, c, x, y, count: int) -> List[complex]:
    """
    Anti-diagonal sums S_d = sum_{l+m=d} (a)_d / ((b)_l (c)_m) x^l y^m / (l! m!)
    for d = 0..count-1. Psi2(a;b,c;zeta x, zeta y) = sum_d S_d zeta^d.
    """
    a, b, c, x, y = complex(a), complex(b), complex(c), complex(x), complex(y)
    if nonpositive_integer(b) is not None or nonpositive_integer(c) is not None:
        raise PoleAtC(f"Psi2: lower parameters must avoid 0, -1, -2, ... (b={b}, c={c})")

    # u[l] = x^l / ((b)_l l!), w[m] = y^m / ((c)_m m!)
    u = [1.0 + 0.0j]
    w = [1.0 + 0.0j]
    poch_a = 1.0 + 0.0j
    sums = []
    for d in range(count):
        if d > 0:
            u.append(u[-1] * x / ((b + d - 1) * d))
            w.append(w[-1] * y / ((c + d - 1) * d))
            poch_a *= a + d - 1
        sums.append(poch_a * sum(u[l] * w[d - l] for l in range(d + 1)))
    return sums


def humbert_psi2(a, b, c, x, y, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """
    Humbert Psi2(a; b, c; x, y) summed over anti-diagonals l + m = d.

    Stops on the ratio test of the absolute majorant sum_l |(a)_d u_l w_m|,
    which bounds every diagonal from above whatever the cancellation inside it.
    """
    a, b, c, x, y = complex(a), complex(b), complex(c), complex(x), complex(y)
    if nonpositive_integer(b) is not None or nonpositive_integer(c) is not None:
        raise PoleAtC(f"Psi2: lower parameters must avoid 0, -1, -2, ... (b={b}, c={c})")

    u = [1.0 + 0.0j]
    w = [1.0 + 0.0j]
    poch_a = 1.0 + 0.0j
    total = 1.0 + 0.0j
    previous = 1.0
    # past this diagonal the majorant ratios are decreasing
    settle = abs(a) + abs(b) + abs(c) + abs(x) + abs(y)
    for d in range(1, ctl.max_terms):
        u.append(u[-1] * x / ((b + d - 1) * d))
        w.append(w[-1] * y / ((c + d - 1) * d))
        poch_a *= a + d - 1
        pairs = [u[l] * w[d - l] for l in range(d + 1)]
        total += poch_a * sum(pairs)

        majorant = abs(poch_a) * sum(abs(p) for p in pairs)
        if majorant == 0:
            # (a)_d = 0 or x = y = 0: every later diagonal vanishes too
            return total
        ratio, previous = majorant / previous, majorant
        if d > settle and _tail_small(majorant, ratio, total, ctl.tol):
            return total

    raise NoConvergence(f"Psi2 not converged within {ctl.max_terms} anti-diagonals")
