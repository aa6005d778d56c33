"""Command-line orchestration: sweeps, thresholds, baselines, FSS reports.

Subcommands
    codes      list the code registry with computed (N, K)
    sweep      WER vs erasure rate for BB codes under BP-OSD (CSV)
    baseline   the same sweep preset for toric MWPM baselines (CSV)
    threshold  pseudo-threshold search with bootstrap CIs (JSON)
    fss        finite-size-scaling report from a sweep CSV + threshold JSON

Every CSV/JSON result gets a sibling *_meta.json with the base seed,
per-point seeds, package versions, platform, and a config echo; apart from
the timestamp field the metadata is deterministic, and the result files
themselves are byte-stable across reruns with identical configs. All
randomness flows from --seed through per-point and per-shot seed
derivation plus stage-tagged bootstrap seeds ("pstar-boot", "fss-boot").

Exit codes: 0 success, 2 config error, 3 no threshold crossing, 4 I/O
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bposd import BpOsdConfig
from .codes import get_code, registry_names
from .fss import FssDataset, FssWindowError, bootstrap_fss, fit_collapse, fit_linearized, window_sensitivity
from .montecarlo import (
    DECODER_NAMES,
    derive_point_seed,
    estimate_wer,
    stable_point_id,
    tagged_seed,
)
from .threshold import NoCrossingError, find_threshold

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_CROSSING = 3
EXIT_IO = 4

CSV_COLUMNS = [
    "code", "family", "n", "k", "l_param", "m_param", "decoder",
    "p", "shots", "failures", "wer", "wilson_lo", "wilson_hi", "point_seed",
]

DEFAULT_BB_CODES = ["bb-12x6", "bb-18x9", "bb-24x12", "bb-30x15", "bb-36x18"]
DEFAULT_TORIC_CODES = ["toric-12", "toric-24", "toric-30", "toric-36"]


class ConfigError(Exception):
    pass


def _parse_codes(raw: str) -> list[str]:
    names = [c.strip() for c in raw.split(",") if c.strip()]
    if not names:
        raise ConfigError("empty code list")
    return names


def _resolve_codes(names):
    codes = []
    for name in names:
        try:
            codes.append(get_code(name))
        except KeyError:
            raise ConfigError(
                f"unknown code {name!r}; registry: {', '.join(registry_names())} "
                "(toric-L works for any L >= 2)"
            )
    return codes


def _p_grid(args) -> list[float]:
    if args.p_list:
        values = [float(v) for v in args.p_list.split(",") if v.strip()]
    else:
        if args.p_step <= 0:
            raise ConfigError("--p-step must be positive")
        count = int(round((args.p_stop - args.p_start) / args.p_step))
        values = [round(args.p_start + i * args.p_step, 9) for i in range(count + 1)]
        values = [v for v in values if v <= args.p_stop + 1e-12]
    if not values or any(not 0.0 <= v <= 1.0 for v in values):
        raise ConfigError(f"p values must lie in [0, 1], got {values}")
    return values


def _bposd_config(args) -> BpOsdConfig:
    try:
        return BpOsdConfig(
            max_iterations=args.max_iter,
            osd_order=args.osd_order,
            unerased_prior=args.unerased_prior,
            min_sum_scale=args.min_sum_scale,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def _apply_preset(args, default_shots: int) -> int:
    shots = args.shots if args.shots is not None else default_shots
    if args.preset == "desk":
        shots = max(1, shots // 10)
    if shots < 1:
        raise ConfigError("shots must be >= 1")
    return shots


def _preset_codes(args, defaults: list[str]) -> list[str]:
    names = _parse_codes(args.codes) if args.codes else list(defaults)
    if args.preset == "desk" and not args.codes:
        names = names[:2]
    return names


def _prepare_out(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise IOError(f"output directory {out} is not writable: {exc}")
    return out


def write_run_metadata(path: Path, command: str, config: dict, points: list[dict],
                       counters: dict, base_seed: int) -> dict:
    """Emit the reproducibility metadata JSON next to a result file."""
    import numba
    import scipy

    meta = {
        "artifact": {"name": "erasurelab", "version": __version__},
        "base_seed": base_seed,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "platform": {
            "python": platform.python_version(),
            "system": platform.platform(),
            "machine": platform.machine(),
        },
        "versions": {
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "numba": numba.__version__,
        },
        "command": command,
        "config": config,
        "points": points,
        "counters": counters,
    }
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return meta


def _config_echo(args, skip=("func",)) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _fmt(value: float) -> str:
    return repr(float(value))


def cmd_codes(args) -> int:
    print(f"{'name':<12} {'family':<7} {'n':>5} {'k':>3} {'l':>3} {'m':>3}")
    for name in registry_names():
        code = get_code(name)
        print(
            f"{code.name:<12} {code.family:<7} {code.n:>5} {code.k:>3} "
            f"{code.l_param:>3} {code.m_param:>3}"
        )
    print("(toric-L resolves for any L >= 2)")
    return EXIT_OK


def _run_sweep(args, default_codes, default_shots, default_decoder, csv_name) -> int:
    shots = _apply_preset(args, default_shots)
    names = _preset_codes(args, default_codes)
    codes = _resolve_codes(names)
    decoder = args.decoder or default_decoder
    if decoder not in DECODER_NAMES:
        raise ConfigError(f"unknown decoder {decoder!r}; known: {', '.join(DECODER_NAMES)}")
    cfg = _bposd_config(args)
    grid = _p_grid(args)
    out = _prepare_out(args)

    rows = []
    points_meta = []
    for code in codes:
        for p in grid:
            point_id = stable_point_id(code.name, decoder, p, shots)
            point_seed = derive_point_seed(args.seed, point_id)
            point = estimate_wer(
                code, decoder, p, shots, point_seed, cfg=cfg, workers=args.threads
            )
            rows.append([
                code.name, code.family, code.n, code.k, code.l_param, code.m_param,
                decoder, _fmt(p), shots, point.failures, _fmt(point.wer),
                _fmt(point.wilson_lo), _fmt(point.wilson_hi), point.point_seed,
            ])
            points_meta.append({
                "code": code.name, "decoder": decoder, "p": p, "shots": shots,
                "point_id": point_id, "point_seed": point_seed,
            })

    csv_path = out / csv_name
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        writer.writerows(rows)
    write_run_metadata(
        out / (csv_path.stem + "_meta.json"),
        command=args.command,
        config=_config_echo(args),
        points=points_meta,
        counters={},
        base_seed=args.seed,
    )
    print(f"wrote {csv_path} ({len(rows)} points)")
    return EXIT_OK


def cmd_sweep(args) -> int:
    return _run_sweep(args, DEFAULT_BB_CODES, 200_000, "bposd", "sweep.csv")


def cmd_baseline(args) -> int:
    return _run_sweep(args, DEFAULT_TORIC_CODES, 50_000, "mwpm-erasure", "baseline.csv")


def cmd_threshold(args) -> int:
    shots = _apply_preset(args, 200_000)
    names = _preset_codes(args, DEFAULT_BB_CODES)
    codes = _resolve_codes(names)
    decoder = args.decoder or "bposd"
    if decoder not in DECODER_NAMES:
        raise ConfigError(f"unknown decoder {decoder!r}; known: {', '.join(DECODER_NAMES)}")
    cfg = _bposd_config(args)
    out = _prepare_out(args)

    results = {}
    points_meta = []
    counters = {"bootstrap_clamps": 0}
    any_missing = False
    for code in codes:

        def evaluate(p, code=code):
            point_id = stable_point_id(code.name, decoder, p, shots)
            point_seed = derive_point_seed(args.seed, point_id)
            point = estimate_wer(
                code, decoder, p, shots, point_seed, cfg=cfg, workers=args.threads
            )
            points_meta.append({
                "code": code.name, "decoder": decoder, "p": p, "shots": shots,
                "point_id": point_id, "point_seed": point_seed,
            })
            return point

        try:
            res = find_threshold(
                evaluate,
                target=args.target_wer,
                tol=args.tol,
                max_evals=args.max_evals,
                bootstrap_iterations=args.bootstrap_iters,
                bootstrap_seed=tagged_seed(args.seed, "pstar-boot", code.name),
            )
        except NoCrossingError as exc:
            any_missing = True
            results[code.name] = {"status": "no-crossing", "error": str(exc)}
            print(f"{code.name}: no crossing ({exc})")
            continue
        counters["bootstrap_clamps"] += res.clamp_count
        results[code.name] = {
            "status": "ok",
            "n": code.n,
            "k": code.k,
            "p_star": res.p_star,
            "ci_lo": res.ci_lo,
            "ci_hi": res.ci_hi,
            "clamp_count": res.clamp_count,
            "warning": res.warning,
            "bracket": asdict(res.bracket),
            "evaluations": [
                {
                    "p": w.p, "shots": w.shots, "failures": w.failures, "wer": w.wer,
                    "wilson_lo": w.wilson_lo, "wilson_hi": w.wilson_hi,
                    "point_seed": w.point_seed,
                }
                for w in res.evaluations
            ],
        }
        print(f"{code.name}: p* = {res.p_star:.4f} [{res.ci_lo:.4f}, {res.ci_hi:.4f}]")

    payload = {"target_wer": args.target_wer, "shots": shots, "decoder": decoder,
               "results": results}
    (out / "threshold.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    write_run_metadata(
        out / "threshold_meta.json",
        command="threshold",
        config=_config_echo(args),
        points=points_meta,
        counters=counters,
        base_seed=args.seed,
    )
    print(f"wrote {out / 'threshold.json'}")
    return EXIT_NO_CROSSING if any_missing else EXIT_OK


def _read_sweep_csv(path: Path):
    """Rows of the sweep schema -> (FssDataset rows, n by code name)."""
    rows = []
    n_by_code = {}
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise IOError(f"cannot read {path}: {exc}")
    with fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ConfigError(f"{path}: missing columns {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                n = int(row["n"])
                rows.append((
                    n, float(row["p"]), float(row["wer"]),
                    int(row["shots"]), int(row["failures"]),
                ))
                n_by_code[row["code"]] = n
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{path}: malformed row {lineno}: {exc}")
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return rows, n_by_code


def _read_pstars(path: Path, n_by_code: dict):
    try:
        payload = json.loads(path.read_text())
    except OSError as exc:
        raise IOError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}")
    centers = {}
    with_ci = {}
    for code_name, entry in payload.get("results", {}).items():
        if entry.get("status") != "ok" or code_name not in n_by_code:
            continue
        n = n_by_code[code_name]
        centers[n] = float(entry["p_star"])
        half = 0.5 * (float(entry["ci_hi"]) - float(entry["ci_lo"]))
        with_ci[n] = (float(entry["p_star"]), half)
    if not centers:
        raise ConfigError(f"{path}: no usable p* entries for the sweep's codes")
    return centers, with_ci


def cmd_fss(args) -> int:
    out = _prepare_out(args)
    rows, n_by_code = _read_sweep_csv(Path(args.input))
    centers, with_ci = _read_pstars(Path(args.pstars), n_by_code)
    data = FssDataset.from_rows(rows)
    windows = [float(w) for w in args.windows.split(",") if w.strip()]

    try:
        base = fit_collapse(data, centers, window=args.window)
    except FssWindowError as exc:
        raise ConfigError(f"collapse fit refused: {exc}")
    ci_p, ci_nu, skipped, flagged = bootstrap_fss(
        data, centers, base,
        iterations=args.bootstrap_iters,
        bootstrap_seed=tagged_seed(args.seed, "fss-boot"),
    )
    sens, spread = window_sensitivity(data, centers, windows=windows)

    linearized = None
    if len(with_ci) >= 3:
        fit = fit_linearized(with_ci, base.nu)
        linearized = {"p_inf": fit.p_inf, "c": fit.c, "ci": list(fit.ci)}

    report = {
        "p_inf": base.p_inf,
        "nu": base.nu,
        "ci_p_inf": list(ci_p),
        "ci_nu": list(ci_nu),
        "window": base.window,
        "rss": base.rss,
        "coeffs": base.poly_coeffs,
        "window_sensitivity": {
            **{
                f"{w:g}": (
                    None if r is None else {"p_inf": r.p_inf, "nu": r.nu, "rss": r.rss}
                )
                for w, r in sens.items()
            },
            "spread": spread,
        },
        "linearized": linearized,
        "bootstrap": {
            "iterations": args.bootstrap_iters,
            "skipped": skipped,
            "flagged": flagged,
        },
    }
    (out / "fss.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    write_run_metadata(
        out / "fss_meta.json",
        command="fss",
        config=_config_echo(args),
        points=[],
        counters={"fss_bootstrap_skips": skipped},
        base_seed=args.seed,
    )
    print(
        f"p_inf = {base.p_inf:.4f} [{ci_p[0]:.4f}, {ci_p[1]:.4f}], "
        f"nu = {base.nu:.3f} [{ci_nu[0]:.3f}, {ci_nu[1]:.3f}]"
    )
    print(f"wrote {out / 'fss.json'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erasurelab",
        description="Erasure-channel threshold estimation for BB and toric codes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=12345, help="base seed (default 12345)")
    common.add_argument("--threads", type=int, default=1, help="worker process cap")
    common.add_argument("--out", default="runs", help="output directory")
    common.add_argument("--preset", choices=["desk"], default=None,
                        help="desk: shots/10 and a trimmed code list")

    dec = argparse.ArgumentParser(add_help=False)
    dec.add_argument("--decoder", choices=list(DECODER_NAMES), default=None)
    dec.add_argument("--max-iter", type=int, default=50, help="BP iteration cap")
    dec.add_argument("--osd-order", type=int, default=10, help="OSD sweep order")
    dec.add_argument("--unerased-prior", type=float, default=1e-10)
    dec.add_argument("--min-sum-scale", type=float, default=1.0)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--p-start", type=float, default=0.30)
    grid.add_argument("--p-stop", type=float, default=0.55)
    grid.add_argument("--p-step", type=float, default=0.01)
    grid.add_argument("--p-list", default=None, help="explicit comma-separated p values")

    sub.add_parser("codes", parents=[], help="list the code registry").set_defaults(
        func=cmd_codes
    )

    p_sweep = sub.add_parser("sweep", parents=[common, dec, grid],
                             help="WER sweep (default: BB codes, BP-OSD, 200k shots)")
    p_sweep.add_argument("--codes", default=None, help="comma-separated registry names")
    p_sweep.add_argument("--shots", type=int, default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_base = sub.add_parser("baseline", parents=[common, dec, grid],
                            help="toric MWPM baseline sweep (default 50k shots)")
    p_base.add_argument("--codes", default=None)
    p_base.add_argument("--shots", type=int, default=None)
    p_base.set_defaults(func=cmd_baseline)

    p_thr = sub.add_parser("threshold", parents=[common, dec],
                           help="pseudo-threshold search per code")
    p_thr.add_argument("--codes", default=None)
    p_thr.add_argument("--shots", type=int, default=None)
    p_thr.add_argument("--target-wer", type=float, default=0.10)
    p_thr.add_argument("--tol", type=float, default=5e-4)
    p_thr.add_argument("--max-evals", type=int, default=10)
    p_thr.add_argument("--bootstrap-iters", type=int, default=5000)
    p_thr.set_defaults(func=cmd_threshold)

    p_fss = sub.add_parser("fss", parents=[common],
                           help="finite-size-scaling report from sweep + thresholds")
    p_fss.add_argument("--input", required=True, help="sweep CSV")
    p_fss.add_argument("--pstars", required=True, help="threshold JSON")
    p_fss.add_argument("--window", type=float, default=0.06)
    p_fss.add_argument("--windows", default="0.04,0.06,0.08")
    p_fss.add_argument("--bootstrap-iters", type=int, default=500)
    p_fss.set_defaults(func=cmd_fss)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
