"""Command-line front end.

Subcommands write plain CSV/JSON; plotting is left to the user. Exit codes
are 0 on success, 2 for configuration errors and 3 for I/O errors. Outputs
are only written once every computation has succeeded.

Settings come from, in increasing precedence: built-in defaults, a JSON
``--config`` file whose keys are the long flag names, and command-line flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from pathlib import Path

from .errors import CdmaError
from .metrics import capacity, max_sinr, mean_squared_sinr, sinr, sinr_bounds, sir
from .optimizer import DEFAULT_EPS, DEFAULT_L, run_algorithm1, solve_single
from .params import SystemParams
from .sequences import SequenceSet, gold_codes, random_sequences
from .simulator import SimConfig, BerReport, run_ber
from .spectral import build_sigma

log = logging.getLogger("cdmaopt")

DEFAULTS = {
    "n": 31,
    "k": 7,
    "p": 1.0,
    "tc": 1.0,
    "n0": 0.0,
    "ebn0": None,
    "l": DEFAULT_L,
    "eps": DEFAULT_EPS,
    "u": 10_000,
    "seed": None,
    "init": None,
    "in": None,
    "out": None,
    "trace": None,
    "iterations": None,
    "log_base": "2",
}

TRACE_COLUMNS = ("sweep", "user", "lambda_min", "objective_F")
METRIC_COLUMNS = ("user", "sinr", "sir", "lambda_min", "max_sinr", "capacity_bits", "sinr_lower", "sinr_upper")


class ConfigError(Exception):
    pass


class OutputError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(float(x))
    return str(x)


def _float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).split(",") if x.strip()]


def _int_list(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of default settings")
    common.add_argument("--n", type=int, help="sequence length N")
    common.add_argument("--k", type=int, help="number of users K")
    common.add_argument("--p", type=float, help="signal power P")
    common.add_argument("--tc", type=float, help="chip duration Tc")
    common.add_argument("--n0", type=float, help="noise parameter N0")
    common.add_argument("--ebn0", help="Eb/N0 in dB, comma separated")
    common.add_argument("--l", type=int, help="maximum number of sweeps L")
    common.add_argument("--eps", type=float, help="convergence threshold")
    common.add_argument("--u", type=int, help="Monte-Carlo trials per user and grid point")
    common.add_argument("--seed", type=int)
    common.add_argument("--init", choices=("gold", "random", "file"))
    common.add_argument("--in", dest="in_", action="append", metavar="[LABEL=]PATH",
                        help="input sequence-set JSON (repeatable for simulate)")
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--trace", help="trace CSV path for optimize")
    common.add_argument("--iterations", help="sweep counts to simulate, comma separated")
    common.add_argument("--log-base", dest="log_base", choices=("2", "e"))
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cdmaopt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="write Gold or random initial sequences")
    sub.add_parser("optimize", parents=[common], help="run the all-user sweep")
    sub.add_parser("metrics", parents=[common], help="per-user SINR, capacity and bounds")
    sub.add_parser("simulate", parents=[common], help="Monte-Carlo BER")
    return parser


def resolve(ns: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if ns.config:
        try:
            loaded = json.loads(Path(ns.config).read_text())
        except OSError as exc:
            raise OutputError(f"cannot read config {ns.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {ns.config} is not valid JSON: {exc}") from exc
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key not in cfg:
                raise ConfigError(f"unknown config key {key!r}")
            cfg[key] = value
    for key in cfg:
        attr = "in_" if key == "in" else key
        value = getattr(ns, attr, None)
        if value is not None:
            cfg[key] = value
    if isinstance(cfg["in"], str):
        cfg["in"] = [cfg["in"]]
    return cfg


def _params(cfg: dict, N: int, K: int) -> SystemParams:
    try:
        return SystemParams(N=N, K=K, P=float(cfg["p"]), Tc=float(cfg["tc"]), N0=float(cfg["n0"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _require_seed(cfg: dict, why: str) -> int:
    if cfg["seed"] is None:
        raise ConfigError(f"--seed is required {why}")
    return int(cfg["seed"])


def _generated(cfg: dict) -> SequenceSet:
    init = cfg["init"]
    K = int(cfg["k"])
    if init == "gold":
        if int(cfg["n"]) != 31:
            raise ConfigError("gold codes are only available for N=31")
        return gold_codes(K)
    if init == "random":
        return random_sequences(K, int(cfg["n"]), _require_seed(cfg, "for random sequences"))
    raise ConfigError(f"--init must be gold or random, got {init!r}")


def _split_label(spec: str) -> tuple[str, str]:
    if "=" in spec:
        label, path = spec.split("=", 1)
        return label, path
    return Path(spec).stem, spec


def _load(path: str) -> SequenceSet:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    try:
        return SequenceSet.from_json(text)
    except (ValueError, CdmaError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _inputs(cfg: dict, allow_many: bool = False) -> list[tuple[str, SequenceSet]]:
    if cfg["init"] in ("gold", "random"):
        return [(cfg["init"], _generated(cfg))]
    paths = cfg["in"] or []
    if not paths:
        raise ConfigError("an input set is required: pass --in PATH or --init gold|random")
    if len(paths) > 1 and not allow_many:
        raise ConfigError("this command takes a single --in")
    return [(label, _load(path)) for label, path in map(_split_label, paths)]


def _sweep_args(cfg: dict) -> tuple[int, float]:
    L, eps = int(cfg["l"]), float(cfg["eps"])
    if L < 1:
        raise ConfigError(f"L must be >= 1, got {L}")
    if not eps > 0:
        raise ConfigError(f"eps must be positive, got {eps}")
    return L, eps


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _emit(outputs: list[tuple[str | None, str]]) -> None:
    """Stage every file next to its target, then rename them all into place."""
    staged = []
    try:
        for path, text in outputs:
            if path is None or path == "-":
                continue
            target = Path(path)
            fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
            staged.append((tmp, target))
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
        for tmp, target in staged:
            os.replace(tmp, target)
    except OSError as exc:
        for tmp, _ in staged:
            Path(tmp).unlink(missing_ok=True)
        raise OutputError(f"cannot write output: {exc}") from exc
    for path, text in outputs:
        if path is None or path == "-":
            sys.stdout.write(text)


# -- commands ----------------------------------------------------------------


def cmd_generate(cfg: dict) -> list[tuple[str | None, str]]:
    if cfg["init"] not in ("gold", "random"):
        raise ConfigError("generate needs --init gold or --init random")
    return [(cfg["out"], _generated(cfg).to_json())]


def cmd_optimize(cfg: dict) -> list[tuple[str | None, str]]:
    L, eps = _sweep_args(cfg)
    [(_, initial)] = _inputs(cfg)
    final, trace = run_algorithm1(initial, L, eps)
    rows = [(u.sweep, u.user + 1, u.lambda_min, u.objective) for u in trace.updates]
    log.info("F: %.6e -> %.6e after %d sweeps", trace.initial_objective, trace.objectives[-1], len(trace.sweeps))
    trace_path = cfg["trace"]
    if trace_path is None and cfg["out"] not in (None, "-"):
        trace_path = str(Path(cfg["out"]).with_suffix(".trace.csv"))
    return [(cfg["out"], final.to_json()), (trace_path, _csv(TRACE_COLUMNS, rows))]


def _noise_params(cfg: dict, N: int, K: int) -> SystemParams:
    if cfg["ebn0"] is None:
        return _params(cfg, N, K)
    grid = _float_list(cfg["ebn0"])
    if len(grid) != 1:
        raise ConfigError("metrics takes a single --ebn0 value")
    base = _params(cfg, N, K)
    return SystemParams.from_ebn0_db(N, K, grid[0], P=base.P, Tc=base.Tc)


def metrics_rows(seqs: SequenceSet, params: SystemParams, log_base: str = "2") -> list[tuple]:
    base = math.e if log_base == "e" else 2.0
    rows = []
    for i in range(seqs.K):
        sol = solve_single(seqs, i)
        bounds = sinr_bounds(build_sigma(seqs, i), params)
        rows.append((
            i + 1,
            sinr(seqs, i, params),
            sir(seqs, i),
            sol.lambda_min,
            max_sinr(sol.lambda_min, params),
            capacity(sol.lambda_min, params, base),
            bounds.sinr_lower,
            bounds.sinr_upper,
        ))
    arithmetic, harmonic = mean_squared_sinr(seqs, params)
    blank = [""] * (len(METRIC_COLUMNS) - 2)
    rows.append(("mean_sq_sinr_arithmetic", arithmetic, *blank))
    rows.append(("mean_sq_sinr_harmonic", harmonic, *blank))
    return rows


def cmd_metrics(cfg: dict) -> list[tuple[str | None, str]]:
    [(_, seqs)] = _inputs(cfg)
    params = _noise_params(cfg, seqs.N, seqs.K)
    return [(cfg["out"], _csv(METRIC_COLUMNS, metrics_rows(seqs, params, str(cfg["log_base"]))))]


def cmd_simulate(cfg: dict) -> list[tuple[str | None, str]]:
    seed = _require_seed(cfg, "for simulate")
    if cfg["ebn0"] is None:
        raise ConfigError("simulate needs an --ebn0 grid")
    try:
        sim = SimConfig(U=int(cfg["u"]), ebn0_db=_float_list(cfg["ebn0"]), seed=seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    inputs = _inputs(cfg, allow_many=True)
    iterations = _int_list(cfg["iterations"]) if cfg["iterations"] is not None else [0]
    if any(l < 0 for l in iterations):
        raise ConfigError("--iterations must be nonnegative")
    eps = float(cfg["eps"])
    if not eps > 0:
        raise ConfigError(f"eps must be positive, got {eps}")

    report = BerReport()
    for label, seqs in inputs:
        params = _params(cfg, seqs.N, seqs.K)
        sweeps = max(iterations)
        snaps = {0: seqs}
        if sweeps > 0:
            _, trace = run_algorithm1(seqs, sweeps, eps, snapshot_at=iterations)
            snaps.update(trace.snapshots)
        for l in iterations:
            if l == 0:
                name = label
            elif len(inputs) == 1:
                name = f"iter{l}"
            else:
                name = f"{label}-iter{l}"
            report.extend(run_ber(snaps[l], params, sim, name))
    return [(cfg["out"], report.to_csv())]


COMMANDS = {
    "generate": cmd_generate,
    "optimize": cmd_optimize,
    "metrics": cmd_metrics,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve(ns)
        outputs = COMMANDS[ns.command](cfg)
        _emit(outputs)
    except (ConfigError, CdmaError, ValueError) as exc:
        print(f"cdmaopt {ns.command}: {exc}", file=sys.stderr)
        return 2
    except OutputError as exc:
        print(f"cdmaopt {ns.command}: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
