from typing import Dict, List

import numpy as np


def compute_drift(curves: Dict[str, List[complex]]) -> Dict[str, dict]:
    """Relative drift of every monitored quantity against its initial value."""
    out = {}
    for name, values in curves.items():
        series = np.asarray(values, dtype=complex)
        if series.size == 0:
            continue
        start = series[0]
        scale = abs(start) if abs(start) > 0 else 1.0
        dev = np.abs(series - start)
        out[name] = {
            "initial_re": float(start.real),
            "initial_im": float(start.imag),
            "final_re": float(series[-1].real),
            "final_im": float(series[-1].imag),
            "max_abs_drift": float(dev.max()),
            "max_rel_drift": float(dev.max() / scale),
        }
    return out


def order_estimate(errors: List[float], ratio: float = 2.0) -> float:
    """Observed convergence order from errors at successively refined steps."""
    errors = np.asarray(errors, dtype=float)
    if errors.size < 2 or np.any(errors <= 0):
        return float("nan")
    return float(np.mean(np.log(errors[:-1] / errors[1:]) / np.log(ratio)))
