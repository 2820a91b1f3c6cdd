import json
from pathlib import Path
from typing import Iterable, List

import numpy as np
import pandas as pd

from hydro.field import HydroField
from simulation.engine import Snapshot
from utils.logger import get_logger

log = get_logger("data.artifacts")

TRAJECTORY_COLUMNS = ["time", "site", "re_x", "im_x", "re_y", "im_y"]
FIELD_COLUMNS = ["x", "re_v", "im_v", "re_w", "im_w"]
PERIOD_COLUMNS = ["z", "v", "w", "re_p1", "im_p1", "re_p2", "im_p2", "route", "abs_route_gap"]

# round-trip precision for float columns
FLOAT_FORMAT = "%.17g"


class ArtifactWriter:
    def __init__(self, out_dir: str | Path):
        self.out_dir = Path(out_dir)

    def _path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / name

    def _csv(self, df: pd.DataFrame, name: str) -> Path:
        path = self._path(name)
        df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        log.info("wrote %s (%d rows)", path, len(df))
        return path

    # ---------- Tables ----------

    def trajectory(self, snapshots: List[Snapshot], name: str = "trajectory.csv") -> Path:
        """One row per (recorded time, site)."""
        frames = []
        for snap in snapshots:
            s = snap.state
            frames.append(pd.DataFrame({
                "time": np.full(s.size, snap.time),
                "site": s.sites,
                "re_x": s.x.real, "im_x": s.x.imag,
                "re_y": s.y.real, "im_y": s.y.imag,
            }))
        df = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=TRAJECTORY_COLUMNS)
        return self._csv(df[TRAJECTORY_COLUMNS], name)

    def field(self, f: HydroField, name: str = "field.csv") -> Path:
        df = pd.DataFrame({
            "x": f.x,
            "re_v": f.v.real, "im_v": f.v.imag,
            "re_w": f.w.real, "im_w": f.w.imag,
        })
        return self._csv(df[FIELD_COLUMNS], name)

    def period_table(self, rows: Iterable[dict], name: str = "periods.csv") -> Path:
        df = pd.DataFrame(list(rows), columns=PERIOD_COLUMNS)
        df = df.sort_values(["z", "v", "w", "route"], kind="mergesort").reset_index(drop=True)
        return self._csv(df, name)

    # ---------- Documents ----------

    def json(self, payload, name: str) -> Path:
        path = self._path(name)
        path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        log.info("wrote %s", path)
        return path

    def text(self, text: str, name: str) -> Path:
        path = self._path(name)
        path.write_text(text)
        log.info("wrote %s", path)
        return path


def series_payload(times: List[float], curves: dict, drift: dict) -> dict:
    """Conserved-quantity time series split into real and imaginary parts."""
    return {
        "times": [float(t) for t in times],
        "series": {
            key: {"re": [complex(c).real for c in values], "im": [complex(c).imag for c in values]}
            for key, values in curves.items()
        },
        "drift": drift,
    }
