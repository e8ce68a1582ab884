"""Command-line interface: ``regionstereo {match,filter,depth,cloud,bench}``.

Settings resolve as defaults < ``--config`` file < command-line flags. Exit
codes: 0 success, 1 pipeline error, 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import imageio
from .depth import CameraRig, depth_from_disparity, export_ply, median_filter, project_xyz
from .energy import MatchWindow
from .evaluation import BenchConfig, format_table, records_to_csv, run_benchmark
from .global_match import NE, global_match
from .linegrow import GrowConfig, line_grow_match, set_threads_from_env
from .reliability_filter import filter_unreliable, map_energy, reliability


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    algorithm: str = "global"
    n: int = 1
    m: int = 1
    d_max: int = 40
    iterations: int = 10
    v_lg: float = 60.0
    alpha: float = 1.0
    f: float = 30.0
    t: float = 20.0
    median: int = 1
    truth_scale: float = 1.0
    bad_threshold: float = 1.0
    idle_policy: str = "zero"

    def validate(self) -> "RunConfig":
        if self.algorithm not in ("global", "linegrow"):
            raise ConfigError(f"algorithm must be 'global' or 'linegrow', not {self.algorithm!r}")
        if self.n < 1 or self.m < 1:
            raise ConfigError(f"window must be at least 1x1 (n={self.n}, m={self.m})")
        if self.algorithm == "linegrow" and self.n != 1:
            raise ConfigError("linegrow uses a line window: n must be 1")
        if not 0 <= self.d_max <= 255:
            raise ConfigError("d_max must be in 0..255")
        if self.iterations < 0:
            raise ConfigError("iterations must be >= 0")
        if self.v_lg < 0 or self.alpha < 0:
            raise ConfigError("v_lg and alpha must be >= 0")
        if self.f <= 0 or self.t <= 0:
            raise ConfigError("f and t must be > 0")
        if self.median < 1 or self.median % 2 == 0:
            raise ConfigError("median window must be a positive odd integer")
        if self.truth_scale <= 0:
            raise ConfigError("truth_scale must be > 0")
        if self.idle_policy not in ("zero", "ne"):
            raise ConfigError("idle_policy must be 'zero' or 'ne'")
        return self

    @property
    def window(self) -> MatchWindow:
        return MatchWindow(self.n, self.m)

    def dump(self) -> str:
        return "\n".join(f"{k} = {v!r}" if isinstance(v, str) else f"{k} = {v}"
                         for k, v in asdict(self).items())


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"int": int, "float": float, "str": str}


def _coerce(key, value, line=None):
    kind = _FIELD_TYPES[key]
    where = f" (line {line})" if line else ""
    if kind == "int" and (isinstance(value, bool) or not isinstance(value, int)):
        raise ConfigError(f"{key} must be an integer{where}")
    if kind == "float" and (isinstance(value, bool) or not isinstance(value, (int, float))):
        raise ConfigError(f"{key} must be a number{where}")
    if kind == "str" and not isinstance(value, str):
        raise ConfigError(f"{key} must be a string{where}")
    return _CASTS[kind](value)


def _key_line(text: str, key: str):
    for no, raw in enumerate(text.splitlines(), 1):
        if raw.split("=", 1)[0].strip() == key:
            return no
    return None


def load_config(path, overrides: dict | None = None) -> RunConfig:
    """Read a ``key = value`` (TOML) file over the defaults, then apply ``overrides``."""
    text = Path(path).read_text() if path is not None else ""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    values = {}
    for key, value in data.items():
        line = _key_line(text, key)
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}: unknown key {key!r} (line {line})")
        values[key] = _coerce(key, value, line)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return RunConfig(**values).validate()


# --- disparity files ------------------------------------------------------------

def mask_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".mask" + p.suffix)


def write_disparity(disp, path) -> None:
    """Raw disparity PGM (NE written as 0) plus a sidecar mask (255 = estimated)."""
    est = disp != NE
    imageio.save_gray(np.where(est, disp, 0).astype(np.uint8), path)
    imageio.save_gray(np.where(est, 255, 0).astype(np.uint8), mask_path(path))


def read_disparity(path) -> np.ndarray:
    disp = imageio.load_gray(path).astype(np.int32)
    mp = mask_path(path)
    if mp.exists():
        mask = imageio.load_gray(mp)
        if mask.shape != disp.shape:
            raise ValueError(f"mask {mp} does not match {path}")
        disp[mask == 0] = NE
    return disp


# --- subcommands ----------------------------------------------------------------

def _match(args, cfg: RunConfig) -> None:
    left, right = imageio.load_stereo_pair(args.left, args.right)
    if cfg.algorithm == "global":
        disp, volume = global_match(left, right, cfg.window, cfg.d_max, cfg.iterations)
        if args.dump_energy:
            out = Path(args.dump_energy)
            out.mkdir(parents=True, exist_ok=True)
            for d, slice_ in enumerate(volume):
                imageio.save_gray(slice_, out / f"energy_{d:03d}.pgm", normalize=True)
    else:
        disp, status = line_grow_match(left, right, GrowConfig(cfg.window, cfg.d_max, cfg.v_lg))
        if args.status_out:
            imageio.save_gray((status * 85).astype(np.uint8), args.status_out)
    write_disparity(disp, args.output)
    if args.energy_out:
        imageio.save_gray(map_energy(left, right, disp, cfg.window), args.energy_out, normalize=True)
    print(f"estimated pixels: {int((disp != NE).sum())} / {disp.size}")


def _filter(args, cfg: RunConfig) -> None:
    left, right = imageio.load_stereo_pair(args.left, args.right)
    disp = read_disparity(args.disparity)
    e_d = map_energy(left, right, disp, cfg.window)
    before = reliability(e_d)
    d_f, e_f, report = filter_unreliable(disp, e_d, cfg.alpha)
    write_disparity(d_f, args.output)
    if args.energy_out:
        imageio.save_gray(e_f, args.energy_out, normalize=True)
    print(f"unfiltered R_d = {before.r_d:.6g}")
    print(report)
    print("csv: r_d,s_d,mean_energy,ve,alpha,retained_fraction")
    print("csv: " + ",".join(repr(v) for v in report.as_row().values()))


def _depth_map(args, cfg: RunConfig):
    disp = read_disparity(args.disparity)
    if cfg.median > 1:
        disp = median_filter(disp, cfg.median)
    return depth_from_disparity(disp, CameraRig(cfg.f, cfg.t))


def _depth(args, cfg: RunConfig) -> None:
    z = _depth_map(args, cfg)
    imageio.save_gray(z, args.output, normalize=True)
    if args.raw:
        np.save(args.raw, z)
    print(f"depth pixels: {int(np.isfinite(z).sum())}")


def _cloud(args, cfg: RunConfig) -> None:
    right = imageio.load_color(args.right)
    z = _depth_map(args, cfg)
    cloud = project_xyz(z, CameraRig(cfg.f, cfg.t), right)
    export_ply(cloud, args.output)
    print(f"points: {len(cloud)}")


def _bench(args, cfg: RunConfig) -> None:
    left, right = imageio.load_stereo_pair(args.left, args.right)
    truth = imageio.load_gray(args.truth).astype(np.float64) if args.truth else None
    configs = [
        BenchConfig("global 1x1", "global", MatchWindow(1, 1), cfg.d_max, cfg.iterations),
        BenchConfig("global 1x5", "global", MatchWindow(1, 5), cfg.d_max, cfg.iterations),
        BenchConfig("global 3x3", "global", MatchWindow(3, 3), cfg.d_max, cfg.iterations),
        BenchConfig("linegrow VLG=60", "linegrow", MatchWindow(1, 5), cfg.d_max, v_lg=60.0),
        BenchConfig("linegrow VLG=10", "linegrow", MatchWindow(1, 5), cfg.d_max, v_lg=10.0),
    ]
    records = run_benchmark(left, right, configs, cfg.alpha, truth, cfg.truth_scale,
                            cfg.bad_threshold, cfg.idle_policy)
    with open(args.output, "w", newline="") as fh:
        records_to_csv(records, fh)
    print(format_table(records))


def _add_common(p, *, window=True):
    p.add_argument("--config", help="key = value settings file")
    if window:
        p.add_argument("-n", type=int, help="window rows")
        p.add_argument("-m", type=int, help="window columns")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regionstereo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", help="compute a disparity map")
    _add_common(p)
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output", required=True, help="disparity PGM")
    p.add_argument("--algorithm", choices=("global", "linegrow"))
    p.add_argument("--dmax", dest="d_max", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--vlg", dest="v_lg", type=float)
    p.add_argument("--energy-out", help="normalized E_d PGM")
    p.add_argument("--status-out", help="point status PGM (linegrow)")
    p.add_argument("--dump-energy", metavar="DIR", help="smoothed energy slices (global)")

    p = sub.add_parser("filter", help="drop unreliable disparities")
    _add_common(p)
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("disparity")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--energy-out")

    for name, helptext in (("depth", "disparity to depth map"), ("cloud", "disparity to PLY")):
        p = sub.add_parser(name, help=helptext)
        _add_common(p, window=False)
        if name == "cloud":
            p.add_argument("right", help="color source image")
        p.add_argument("disparity")
        p.add_argument("-o", "--output", required=True)
        p.add_argument("--f", type=float)
        p.add_argument("--t", type=float)
        p.add_argument("--median", type=int, help="odd median window, 1 disables")
        if name == "depth":
            p.add_argument("--raw", help="also save depth as .npy")

    p = sub.add_parser("bench", help="reliability/speed comparison of five configurations")
    _add_common(p, window=False)
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("-o", "--output", required=True, help="CSV report")
    p.add_argument("--dmax", dest="d_max", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--truth", help="ground-truth disparity image")
    p.add_argument("--truth-scale", type=float)
    p.add_argument("--bad-threshold", type=float)
    p.add_argument("--idle-policy", choices=("zero", "ne"))
    return parser


_COMMANDS = {"match": _match, "filter": _filter, "depth": _depth, "cloud": _cloud, "bench": _bench}
_NON_CONFIG = {"command", "config", "left", "right", "disparity", "output", "energy_out",
               "status_out", "dump_energy", "raw", "truth"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    overrides = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}
    try:
        set_threads_from_env()
        cfg = load_config(args.config, overrides)
        print(cfg.dump())
        _COMMANDS[args.command](args, cfg)
    except (ValueError, OSError) as exc:
        print(f"regionstereo: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
