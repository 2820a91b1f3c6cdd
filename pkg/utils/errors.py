class AlcpError(Exception):
    """Base error. `exit_code` is what the CLI returns when this escapes a command."""

    exit_code = 3


# ---------- Config ----------

class ConfigError(AlcpError):
    exit_code = 2


# ---------- Numerical failures (exit 3) ----------

class NumericalError(AlcpError):
    exit_code = 3


class NoConvergence(NumericalError):
    pass


class PoleAtC(NumericalError):
    pass


class DomainError(NumericalError):
    pass


class BranchCut(NumericalError):
    pass


class BlowUp(NumericalError):
    pass


class GradientCatastrophe(NumericalError):
    pass


class WindowTooSmall(NumericalError):
    pass


class ZeroY(NumericalError):
    pass


class ShapeViolation(NumericalError):
    pass


class PoleHit(NumericalError):
    pass


class ProjectionFailure(NumericalError):
    pass


class DegenerateCritical(NumericalError):
    pass


class DiscriminantHit(NumericalError):
    pass


class IntegerZ(NumericalError):
    pass


# ---------- Check failures (exit 1) ----------

class CheckFailure(AlcpError):
    exit_code = 1


class RouteMismatch(CheckFailure):
    def __init__(self, name: str, gap: float, tol: float):
        super().__init__(f"{name}: routes disagree by {gap:.3e} (tol {tol:.1e})")
        self.name = name
        self.gap = gap
        self.tol = tol


class ConventionMismatch(CheckFailure):
    pass


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, AlcpError):
        return exc.exit_code
    return 3
