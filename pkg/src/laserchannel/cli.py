"""Command-line front end: ``simulate``, ``sweep`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error,
3 numerical or resource failure (headroom, convergence, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import apply_channel, kraus_set, rho_coherent_closed
from .errors import HeadroomError, LaserChannelError
from .fock import coherent_density, expectation, number_operator, von_neumann_entropy
from .lindblad import IntegrationConfig, evolve_series
from .observables import entropy_closed, mean_photon_closed, recommended_dim
from .params import LaserParams

logger = logging.getLogger("laserchannel")

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3
METHODS = ("closed", "kraus", "lindblad")
THREADS_ENV = "LASERCHANNEL_THREADS"
MIN_AUTO_DIM, MAX_AUTO_DIM = 32, 512


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    g: float
    kappa: float
    z_re: float = 0.0
    z_im: float = 0.0
    t_max: float = 1.0
    t_steps: int = 10
    dim: int | None = None
    methods: tuple[str, ...] = ("closed",)

    def __post_init__(self):
        if self.t_steps < 1:
            raise UsageError("t_steps must be >= 1")
        if not (math.isfinite(self.t_max) and self.t_max >= 0):
            raise UsageError("t_max must be finite and >= 0")
        if self.dim is not None and self.dim < 2:
            raise UsageError("dim must be >= 2")
        bad = [m for m in self.methods if m not in METHODS]
        if bad or not self.methods:
            raise UsageError(f"methods must be a non-empty subset of {','.join(METHODS)}; got {self.methods}")
        for name in ("g", "kappa", "z_re", "z_im"):
            if not math.isfinite(getattr(self, name)):
                raise UsageError(f"{name} must be finite")
        if self.g < 0 or self.kappa < 0:
            raise UsageError("g and kappa must be non-negative")

    @property
    def z(self) -> complex:
        return complex(self.z_re, self.z_im)

    @property
    def params(self) -> LaserParams:
        return LaserParams(self.g, self.kappa)

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.t_steps + 1)


def auto_dim(z: complex, params: LaserParams, t_max: float) -> int:
    """``max(32, ceil(4 <n>(t_max) + 20))``, capped at 512 with a warning."""
    # sized on <n>(t_max) only; matrix_dim covers a decaying input
    dim = recommended_dim(z, params, t_max, minimum=MIN_AUTO_DIM)
    if dim > MAX_AUTO_DIM:
        logger.warning("auto dimension %d exceeds %d; capping (matrix methods may fail headroom checks)",
                       dim, MAX_AUTO_DIM)
        dim = MAX_AUTO_DIM
    return dim


def _upper_population(rho) -> float:
    d = rho.shape[0]
    return float(np.real(np.trace(rho[d // 2:, d // 2:])))


def matrix_dim(z: complex, params: LaserParams, t_max: float, headroom_tol: float = 1e-10) -> int:
    """Auto dimension, grown until input and final state leave the upper half empty.

    The formula alone sizes the space for the mean; the Kraus route also needs
    the Poisson and geometric tails below ``dim/2``.
    """
    dim = auto_dim(z, params, t_max)
    while dim < MAX_AUTO_DIM:
        try:
            final = rho_coherent_closed(z, params, t_max, dim)
        except HeadroomError:
            final = np.ones((dim, dim))
        if max(_upper_population(coherent_density(z, dim)), _upper_population(final)) <= headroom_tol:
            break
        dim = min(MAX_AUTO_DIM, int(math.ceil(dim * 1.25)))
    else:
        logger.warning("dimension capped at %d; matrix methods may fail headroom checks", MAX_AUTO_DIM)
    return dim


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(rows, header, out_path):
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    text = buf.getvalue()
    if out_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _specific(s, n):
    return s / n if n > 0 else float("nan")


def simulate_rows(config: RunConfig) -> tuple[list[str], list[list[float]]]:
    """Header and rows of the ``simulate`` table."""
    times = config.times()
    p, z = config.params, config.z
    header = ["t"]
    columns = {}
    if "closed" in config.methods:
        n = [mean_photon_closed(z, p, t) for t in times]
        s = [entropy_closed(p, t) for t in times]
        columns.update(n_closed=n, S_closed=s, specific_entropy=[_specific(a, b) for a, b in zip(s, n)])
    if "kraus" in config.methods or "lindblad" in config.methods:
        dim = config.dim or matrix_dim(z, p, config.t_max)
        rho0 = coherent_density(z, dim)
        number = number_operator(dim)
        if "kraus" in config.methods:
            states = [apply_channel(kraus_set(p, t, dim), rho0) for t in times]
            columns["n_kraus"] = [expectation(r, number).real for r in states]
            columns["S_kraus"] = [von_neumann_entropy(r) for r in states]
        if "lindblad" in config.methods:
            states = evolve_series(rho0, p, times, IntegrationConfig())
            columns["n_lindblad"] = [expectation(r, number).real for r in states]
            columns["S_lindblad"] = [von_neumann_entropy(r) for r in states]
    order = ["n_closed", "S_closed", "specific_entropy", "n_kraus", "S_kraus", "n_lindblad", "S_lindblad"]
    header += [c for c in order if c in columns]
    rows = [[t] + [columns[c][k] for c in header[1:]] for k, t in enumerate(times)]
    return header, rows


def sweep_rows(g_list, kappa, z, t_max, t_steps, threads: int | None = None):
    """Long-format closed-form series, one block per gain in ``g_list`` order."""
    if not g_list:
        raise UsageError("g list must not be empty")
    configs = [RunConfig(g=g, kappa=kappa, z_re=complex(z).real, z_im=complex(z).imag,
                         t_max=t_max, t_steps=t_steps) for g in g_list]

    def series(cfg):
        p = cfg.params
        out = []
        for t in cfg.times():
            n = mean_photon_closed(cfg.z, p, t)
            s = entropy_closed(p, t)
            out.append([f"g={_fmt(cfg.g)}", cfg.g, cfg.kappa, t, n, s, _specific(s, n)])
        return out

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(series, configs))  # map keeps input order
    else:
        blocks = [series(c) for c in configs]
    header = ["series", "g", "kappa", "t", "n", "S", "specific_entropy"]
    return header, [row for block in blocks for row in block]


def _threads_from_env():
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be >= 1")
    return n


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment. Keys use flag names without dashes."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _methods(text: str) -> tuple[str, ...]:
    return tuple(m.strip() for m in text.split(",") if m.strip())


def _add_run_flags(p, g_type):
    p.add_argument("--g", type=g_type, help="gain rate" + (" (comma-separated list)" if g_type is not float else ""))
    p.add_argument("--kappa", type=float, help="loss rate")
    p.add_argument("--z-re", type=float, help="real part of the coherent amplitude")
    p.add_argument("--z-im", type=float, help="imaginary part of the coherent amplitude")
    p.add_argument("--t-max", type=float)
    p.add_argument("--t-steps", type=int)
    p.add_argument("--out", help="output CSV path (default or '-': stdout)")
    p.add_argument("--config", help="key=value file; command-line flags take precedence")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laserchannel", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="time series of <n> and S for one parameter point")
    _add_run_flags(sim, float)
    sim.add_argument("--dim", type=int, help="Fock dimension for matrix methods (default: automatic)")
    sim.add_argument("--methods", type=_methods, help="comma-separated subset of closed,kraus,lindblad")

    sw = sub.add_parser("sweep", help="closed-form series for several gains (long format)")
    _add_run_flags(sw, _float_list)

    ver = sub.add_parser("verify", help="run the cross-validation suite")
    ver.add_argument("--profile", choices=("default", "strict"), default="default")
    return parser


_CONFIG_TYPES = {"g": float, "kappa": float, "z_re": float, "z_im": float, "t_max": float,
                 "t_steps": int, "dim": int, "methods": _methods, "out": str}


def _merge(args, defaults):
    values = dict(defaults)
    if getattr(args, "config", None):
        for key, raw in read_config_file(args.config).items():
            if key not in _CONFIG_TYPES:
                raise UsageError(f"unknown config key {key!r}")
            conv = _float_list if (key == "g" and args.command == "sweep") else _CONFIG_TYPES[key]
            try:
                values[key] = conv(raw)
            except ValueError as exc:
                raise UsageError(f"bad value for {key}: {raw!r}") from exc
    for key in _CONFIG_TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return values


def cmd_simulate(config: RunConfig, out_path: str | None = "-") -> int:
    header, rows = simulate_rows(config)
    _write_csv(rows, header, out_path)
    return EXIT_OK


def cmd_sweep(g_list, kappa, z, t_max, t_steps, out_path: str | None = "-") -> int:
    header, rows = sweep_rows(g_list, kappa, z, t_max, t_steps, threads=_threads_from_env())
    _write_csv(rows, header, out_path)
    return EXIT_OK


def cmd_verify(profile: str = "default", stream=None) -> int:
    from .verification import run_checks

    stream = stream or sys.stdout

    def show(res):
        print(res.line(), file=stream, flush=True)

    results = run_checks(profile, progress=show)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed (profile={profile})", file=stream)
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def _describe(exc: BaseException) -> str:
    """Module that raised ``exc`` (innermost package frame) for error messages."""
    tb, module = exc.__traceback__, "laserchannel"
    while tb is not None:
        name = tb.tb_frame.f_globals.get("__name__", "")
        if name.startswith("laserchannel.") and name != __name__:
            module = name
        tb = tb.tb_next
    return module


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    point = ""
    try:
        if args.command == "verify":
            return cmd_verify(args.profile)
        if args.command == "simulate":
            v = _merge(args, {"z_re": 0.0, "z_im": 0.0, "t_max": 1.0, "t_steps": 10, "methods": ("closed",)})
            missing = [k for k in ("g", "kappa") if k not in v]
            if missing:
                raise UsageError(f"missing required parameter(s): {', '.join(missing)}")
            cfg = RunConfig(**{k: v[k] for k in RunConfig.__dataclass_fields__ if k in v})
            point = f"g={cfg.g}, kappa={cfg.kappa}, z={cfg.z}, t_max={cfg.t_max}, dim={cfg.dim or 'auto'}"
            return cmd_simulate(cfg, v.get("out", "-"))
        v = _merge(args, {"z_re": 0.0, "z_im": 0.0, "t_max": 1.0, "t_steps": 10})
        if "kappa" not in v:
            raise UsageError("missing required parameter: kappa")
        point = f"g={v.get('g')}, kappa={v['kappa']}, t_max={v['t_max']}"
        return cmd_sweep(v.get("g") or [], v["kappa"], complex(v["z_re"], v["z_im"]), v["t_max"],
                         v["t_steps"], v.get("out", "-"))
    except UsageError as exc:
        print(f"laserchannel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LaserChannelError, MemoryError) as exc:
        where = f" at {point}" if point else ""
        print(f"laserchannel: {type(exc).__name__} in {_describe(exc)}{where}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
