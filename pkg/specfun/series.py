from dataclasses import dataclass

from utils.errors import ConfigError


@dataclass(frozen=True)
class SeriesControl:
    tol: float = 1e-13          # absolute truncation tolerance
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.tol > 0:
            raise ConfigError(f"SeriesControl.tol must be > 0, got {self.tol}")
        if self.max_terms < 1:
            raise ConfigError(f"SeriesControl.max_terms must be >= 1, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()


def nonpositive_integer(a: complex) -> int | None:
    """Return n if a == -n for an integer n >= 0, else None."""
    a = complex(a)
    if a.imag != 0 or a.real > 0 or a.real != int(a.real):
        return None
    return -int(a.real)
