"""Reliability and timing benchmark over matcher configurations."""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .energy import MatchWindow
from .global_match import NE, global_match
from .imageio import check_pair
from .linegrow import GrowConfig, line_grow_match, warmup
from .reliability_filter import filter_unreliable, map_energy, reliability


@dataclass(frozen=True)
class BenchConfig:
    label: str
    algorithm: str  # "global" or "linegrow"
    win: MatchWindow
    d_max: int = 40
    iterations: int = 10
    v_lg: Optional[float] = None

    def __post_init__(self):
        if self.algorithm not in ("global", "linegrow"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "linegrow" and self.v_lg is None:
            raise ValueError("linegrow configurations need v_lg")


CANONICAL_CONFIGS = (
    BenchConfig("global 1x1", "global", MatchWindow(1, 1)),
    BenchConfig("global 1x5", "global", MatchWindow(1, 5)),
    BenchConfig("global 3x3", "global", MatchWindow(3, 3)),
    BenchConfig("linegrow VLG=60", "linegrow", MatchWindow(1, 5), v_lg=60.0),
    BenchConfig("linegrow VLG=10", "linegrow", MatchWindow(1, 5), v_lg=10.0),
)


@dataclass(frozen=True)
class BenchRecord:
    label: str
    r_d_unfiltered: float
    r_d_filtered: float
    seconds: float
    retained_fraction: float
    bad_pixel_rate: Optional[float] = None


CSV_FIELDS = ("label", "r_d_unfiltered", "r_d_filtered", "seconds",
              "retained_fraction", "bad_pixel_rate")


def run_match(left, right, cfg: BenchConfig) -> np.ndarray:
    if cfg.algorithm == "global":
        return global_match(left, right, cfg.win, cfg.d_max, cfg.iterations)[0]
    return line_grow_match(left, right, GrowConfig(cfg.win, cfg.d_max, cfg.v_lg))[0]


def run_benchmark(left, right, configs: Sequence[BenchConfig] = CANONICAL_CONFIGS,
                  alpha: float = 1.0, truth=None, truth_scale: float = 1.0,
                  bad_threshold: float = 1.0, idle_policy: str = "zero") -> list[BenchRecord]:
    """Run match -> map energy -> filter for each configuration.

    Only the matching stage is timed. ``idle_policy`` decides how pixels the
    matcher left without an estimate are scored before filtering: ``"zero"``
    treats them as disparity 0, the plain-image convention in which "no
    estimate" only arises from the filter; ``"ne"`` excludes them.
    """
    configs = list(configs)
    if not configs:
        raise ValueError("no benchmark configurations given")
    if idle_policy not in ("zero", "ne"):
        raise ValueError("idle_policy must be 'zero' or 'ne'")
    left, right = check_pair(left, right)
    if any(c.algorithm == "linegrow" for c in configs):
        warmup()
    records = []
    for cfg in configs:
        t0 = time.perf_counter()
        disp = run_match(left, right, cfg)
        seconds = time.perf_counter() - t0
        if idle_policy == "zero":
            disp = np.where(disp == NE, 0, disp).astype(np.int32)
        e_d = map_energy(left, right, disp, cfg.win)
        before = reliability(e_d)
        d_f, _, after = filter_unreliable(disp, e_d, alpha)
        bad = None
        if truth is not None:
            bad = bad_pixel_rate(d_f, truth, bad_threshold, truth_scale)
        records.append(BenchRecord(cfg.label, before.r_d, after.r_d, max(seconds, 1e-9),
                                   after.retained_fraction, bad))
    return records


def bad_pixel_rate(disparity, truth, threshold: float = 1.0, scale: float = 1.0) -> float:
    """Fraction of estimated pixels with ``|d - truth/scale| > threshold``.

    Pixels where the truth is not finite are ignored.
    """
    d = np.asarray(disparity)
    gt = np.asarray(truth, dtype=np.float64) / scale
    if d.shape != gt.shape:
        raise ValueError(f"disparity {d.shape} and ground truth {gt.shape} differ")
    est = (d != NE) & np.isfinite(gt)
    if not est.any():
        raise ValueError("no estimated pixels to score")
    return float(np.mean(np.abs(d[est] - gt[est]) > threshold))


def records_to_csv(records, fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(CSV_FIELDS)
    for r in records:
        writer.writerow([r.label, repr(r.r_d_unfiltered), repr(r.r_d_filtered),
                         f"{r.seconds:.6f}", repr(r.retained_fraction),
                         "" if r.bad_pixel_rate is None else repr(r.bad_pixel_rate)])
    return buf.getvalue() if fh is None else ""


def format_table(records) -> str:
    head = f"{'config':<18}{'R_d':>12}{'R_d filt':>12}{'seconds':>10}{'retained':>10}{'bad':>8}"
    lines = [head, "-" * len(head)]
    for r in records:
        bad = "" if r.bad_pixel_rate is None else f"{r.bad_pixel_rate:.3f}"
        lines.append(f"{r.label:<18}{r.r_d_unfiltered:>12.5g}{r.r_d_filtered:>12.5g}"
                     f"{r.seconds:>10.4f}{r.retained_fraction:>10.3f}{bad:>8}")
    return "\n".join(lines)
