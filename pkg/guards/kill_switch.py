from dataclasses import dataclass

from utils.errors import NumericalError


@dataclass
class KillSwitchState:
    active: bool
    reason: str
    time: float
    step: int
    error: type = NumericalError


class NumericalKillSwitch:
    """
    Halts an integration once the state leaves the regular domain.
    The first trigger wins; later ones are ignored.
    """

    def __init__(self):
        self.state: KillSwitchState | None = None

    def trigger(self, reason: str, *, time: float, step: int, error: type = NumericalError):
        if self.state is None:
            self.state = KillSwitchState(
                active=True,
                reason=reason,
                time=time,
                step=step,
                error=error,
            )

    def is_active(self) -> bool:
        return self.state is not None and self.state.active

    def reason(self) -> str | None:
        return self.state.reason if self.state else None

    def raise_if_active(self):
        if self.is_active():
            raise self.state.error(
                f"{self.state.reason} (step {self.state.step}, t = {self.state.time:.6g})"
            )
