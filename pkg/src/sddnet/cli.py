"""Command line driver: ``sddnet {simulate, estimate, evaluate, replay}``.

Output layout: one directory per Fourier index under ``--out`` plus a
top-level ``summary.csv`` and ``manifest.json``. The manifest holds every
resolved parameter, so ``sddnet replay --manifest M --out DIR`` reproduces
the run file for file.

Exit codes: 0 success, 2 input error, 3 numerical failure (including any
method that failed at some frequency; its other results are still written).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .dtrace import SolverOptions
from .errors import InputError, NumericalError, SDDError, StructureError
from .matrix_io import read_real_csv, write_complex_csv, write_real_csv
from .metrics import aggregate, score, write_csv, write_json
from .pipeline import METHODS, estimate_at, expanded_spectra
from .spectral import (
    BANDS_HZ,
    band_indices,
    default_bandwidth,
    evenly_spaced_indices,
    fourier_index_for_radians,
    nearest_fourier_index,
)
from .timeseries_io import TimeSeriesPanel, load_panel, write_panel
from .tuning import count_edges, write_trace
from .varsim import (
    DEFAULT_SEEDS,
    SimSetting,
    build_setting,
    condition_seeds,
    simulate_var1,
    true_difference,
)

log = logging.getLogger("sddnet")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def _write_manifest(out: Path, command: str, args: dict, **extra) -> None:
    manifest = {
        "command": command,
        "args": args,
        "versions": {"sddnet": __version__, "numpy": np.__version__},
        **extra,
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o))


# --------------------------------------------------------------------- simulate

def cmd_simulate(args: dict, out: Path) -> int:
    setting_id = args["setting"]
    model_seed = args["model_seed"]
    if model_seed is None:
        model_seed = DEFAULT_SEEDS[setting_id]
        args["model_seed"] = model_seed
    A1, A2 = build_setting(SimSetting(setting_id, model_seed, args["p"]))
    s1, s2 = condition_seeds(args["seed"])
    n = args["n"]
    x1 = simulate_var1(A1, n, args["burn_in"], s1, label="condition1")
    x2 = simulate_var1(A2, n, args["burn_in"], s2, label="condition2")
    out.mkdir(parents=True, exist_ok=True)
    write_panel(x1, out / "condition1.csv")
    write_panel(x2, out / "condition2.csv")
    write_real_csv(A1.transition, out / "transition1.csv")
    write_real_csv(A2.transition, out / "transition2.csv")

    idx = evenly_spaced_indices(n, args["n_freqs"])
    truth_dir = out / "truth"
    truth_dir.mkdir(exist_ok=True)
    rows = []
    for j in idx:
        lam = 2.0 * np.pi * j / n
        T = true_difference(A1, A2, lam)
        d = truth_dir / str(int(j))
        d.mkdir(exist_ok=True)
        write_real_csv(T.matrix, d / "delta_expanded.csv")
        write_complex_csv(T.matrix[: T.p, : T.p] + 1j * T.matrix[T.p:, : T.p], d / "delta_complex.csv")
        rows.append((int(j), lam, int(np.count_nonzero(np.abs(T.matrix) > 1e-6)), count_edges(T.matrix)))
    with open(truth_dir / "frequencies.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["freq_index", "frequency", "n_true_edges", "unique_edges"])
        for r in rows:
            w.writerow([r[0], repr(float(r[1])), r[2], r[3]])
    _write_manifest(out, "simulate", args, condition_seeds=[s1, s2],
                    freq_indices=[int(j) for j in idx])
    log.info("simulated setting %d, n=%d, %d truth frequencies", setting_id, n, len(idx))
    return EXIT_OK


# --------------------------------------------------------------------- estimate

def _resolve_indices(args: dict, n: int, fs) -> list:
    if args.get("freq_indices"):
        idx = [int(j) for j in args["freq_indices"]]
        bad = [j for j in idx if not 0 <= j <= n // 2]
        if bad:
            raise InputError(f"Fourier indices {bad} outside [0, {n // 2}]")
        return idx
    if args.get("band"):
        if fs is None:
            raise InputError("--band requires --fs")
        return sorted(set(band_indices(BANDS_HZ[args["band"]], n, fs)))
    if args.get("freqs"):
        if fs is not None:
            return sorted({nearest_fourier_index(f, n, fs) for f in args["freqs"]})
        return sorted({fourier_index_for_radians(f, n) for f in args["freqs"]})
    return [int(j) for j in evenly_spaced_indices(n, args["n_freqs"])]


def _estimate_job(job):
    """Estimate one frequency and write its files; runs in a worker process."""
    j, lam, S1, S2, n, p, methods, k, gamma, opts, fdir, dump = job
    fdir = Path(fdir)
    fdir.mkdir(parents=True, exist_ok=True)
    if dump:
        write_complex_csv(S1.matrix[:p, :p] + 1j * S1.matrix[p:, :p], fdir / "spectrum1_complex.csv")
        write_complex_csv(S2.matrix[:p, :p] + 1j * S2.matrix[p:, :p], fdir / "spectrum2_complex.csv")
    res = estimate_at(S1, S2, n, n, j, lam, methods, k, gamma, opts, p)
    rows = []
    for m, mr in res.methods.items():
        row = {"freq_index": j, "frequency": repr(lam), "method": m, "status": "ok", "tau": "",
               "edge_count": "", "n_nonzero": "", "ebic": "", "converged": "", "iterations": "",
               "kkt_residual": "", "error": ""}
        if mr.error:
            row.update(status="error", error=mr.error)
            rows.append(row)
            continue
        est = mr.estimate
        write_real_csv(est.delta_expanded, fdir / f"{m}_delta_expanded.csv")
        write_complex_csv(est.delta_complex, fdir / f"{m}_delta_complex.csv")
        if mr.records:
            write_trace(mr.records, fdir / f"{m}_trace.csv")
        row.update(
            edge_count=count_edges(est),
            n_nonzero=int(np.count_nonzero(est.delta_expanded)),
            tau="" if mr.selected is None else repr(mr.selected.tau),
            ebic="" if mr.selected is None else repr(mr.selected.ebic),
            converged="" if est.converged is None else int(est.converged),
            iterations="" if est.iterations is None else est.iterations,
            kkt_residual="" if est.kkt_residual is None else repr(est.kkt_residual),
        )
        rows.append(row)
    return rows


def cmd_estimate(args: dict, out: Path) -> int:
    fs = args.get("fs")
    x1 = load_panel(args["condition1"], args["layout"], sampling_rate_hz=fs)
    x2 = load_panel(args["condition2"], args["layout"], sampling_rate_hz=fs)
    if x1.p != x2.p:
        raise StructureError(f"channel counts differ: {x1.p} vs {x2.p}")
    if x1.n != x2.n:
        raise InputError(f"conditions differ in length ({x1.n} vs {x2.n}); trim to a common n")
    n, p = x1.n, x1.p
    idx = _resolve_indices(args, n, fs)
    M = args["bandwidth"] or default_bandwidth(n)
    methods = list(METHODS) if args["method"] == "all" else [args["method"]]
    opts = SolverOptions(rho=args["rho"], max_iters=args["max_iters"],
                         primal_tol=args["tol"], dual_tol=args["tol"])
    S1s = expanded_spectra(x1, idx, M)
    S2s = expanded_spectra(x2, idx, M)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [
        (j, 2.0 * np.pi * j / n, a, b, n, p, methods, args["path_len"], args["gamma"], opts,
         str(out / str(j)), args["dump_spectra"])
        for j, a, b in zip(idx, S1s, S2s)
    ]
    workers = min(len(jobs), args["jobs"] or os.cpu_count() or 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_estimate_job, jobs))
    else:
        results = [_estimate_job(job) for job in jobs]
    rows = [r for rs in results for r in rs]
    with open(out / "summary.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    _write_manifest(out, "estimate", args, freq_indices=idx, bandwidth=M, n=n, p=p,
                    solver=asdict(opts))
    failed = [r for r in rows if r["status"] == "error"]
    for r in failed:
        log.error("frequency %s, method %s: %s", r["freq_index"], r["method"], r["error"])
    return EXIT_NUMERIC if failed else EXIT_OK


# --------------------------------------------------------------------- evaluate

def _truth_dir(path: Path) -> Path:
    return path / "truth" if (path / "truth").is_dir() else path


TABLE_COLUMNS = ("n_true_edges", "n_est_edges", "precision", "recall", "accuracy", "rrmse")


def cmd_evaluate(args: dict, out: Path) -> int:
    est_dir = Path(args["estimates"])
    truth_dir = _truth_dir(Path(args["truth"]))
    with open(est_dir / "summary.csv", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    out.mkdir(parents=True, exist_ok=True)
    methods = list(dict.fromkeys(r["method"] for r in rows))
    table = []
    for m in methods:
        reports, errors = [], 0
        for r in rows:
            if r["method"] != m:
                continue
            if r["status"] != "ok":
                errors += 1
                continue
            j = r["freq_index"]
            tpath = truth_dir / j / "delta_expanded.csv"
            if not tpath.exists():
                raise InputError(f"no ground truth for frequency index {j} in {truth_dir}")
            D = read_real_csv(est_dir / j / f"{m}_delta_expanded.csv")
            T = read_real_csv(tpath)
            if D.shape != T.shape:
                raise StructureError(f"frequency {j}: estimate {D.shape} vs truth {T.shape}")
            reports.append(score(D, T, args["edge_tol"], freq_index=int(j)))
        if not reports:
            table.append([m] + ["-"] * len(TABLE_COLUMNS))
            continue
        agg = aggregate(reports)
        write_json(agg, out / f"metrics_{m}.json")
        write_csv(agg, out / f"metrics_{m}.csv", label=m)
        table.append([m] + [agg.formatted(c, 1 if c.startswith("n_") else 2) for c in TABLE_COLUMNS])
        if errors:
            log.warning("method %s failed at %d frequencies", m, errors)
    with open(out / "table.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["method", *TABLE_COLUMNS])
        w.writerows(table)
    _write_manifest(out, "evaluate", args)
    return EXIT_OK


# ----------------------------------------------------------------------- replay

COMMANDS = {"simulate": cmd_simulate, "estimate": cmd_estimate, "evaluate": cmd_evaluate}


def cmd_replay(manifest_path, out: Path) -> int:
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    return COMMANDS[manifest["command"]](dict(manifest["args"]), out)


# ----------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sddnet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="simulate a two-condition VAR(1) benchmark with ground truth")
    s.add_argument("--setting", type=int, choices=(1, 2, 3), default=1)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0, help="seed for the simulated data")
    s.add_argument("--model-seed", type=int, default=None,
                   help="seed for random transition matrices (settings 2-3)")
    s.add_argument("--p", type=int, default=54)
    s.add_argument("--burn-in", type=int, default=1000)
    s.add_argument("--n-freqs", type=int, default=100)
    s.add_argument("--out", required=True)

    e = sub.add_parser("estimate", help="estimate differences of inverse spectral densities")
    e.add_argument("--condition1", required=True)
    e.add_argument("--condition2", required=True)
    e.add_argument("--layout", choices=("rows_are_time", "rows_are_channels"), default="rows_are_time")
    g = e.add_mutually_exclusive_group()
    g.add_argument("--freqs", type=float, nargs="+",
                   help="frequencies in Hz when --fs is given, otherwise radians in [0, pi]")
    g.add_argument("--band", choices=sorted(BANDS_HZ))
    g.add_argument("--freq-indices", type=int, nargs="+")
    e.add_argument("--n-freqs", type=int, default=100,
                   help="evenly spaced frequencies in [0, pi - 1/n] when none are given")
    e.add_argument("--fs", type=float, default=None, help="sampling rate in Hz")
    e.add_argument("--bandwidth", type=int, default=None, help="smoothing half-width M")
    e.add_argument("--path-len", type=int, default=20)
    e.add_argument("--gamma", type=float, default=0.5)
    e.add_argument("--method", choices=(*METHODS, "all"), default="sdd")
    e.add_argument("--rho", type=float, default=1.0)
    e.add_argument("--max-iters", type=int, default=2000)
    e.add_argument("--tol", type=float, default=1e-7)
    e.add_argument("--seed", type=int, default=0, help="recorded in the manifest; estimation is deterministic")
    e.add_argument("--jobs", type=int, default=None,
                   help="worker processes; one per frequency up to the CPU count by default")
    e.add_argument("--dump-spectra", action="store_true")
    e.add_argument("--out", required=True)

    v = sub.add_parser("evaluate", help="score estimates against simulated ground truth")
    v.add_argument("--estimates", required=True)
    v.add_argument("--truth", required=True)
    v.add_argument("--edge-tol", type=float, default=1e-6)
    v.add_argument("--out", required=True)

    r = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    r.add_argument("--manifest", required=True)
    r.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    args = {k: v for k, v in vars(ns).items() if k not in ("command", "verbose", "out")}
    out = Path(ns.out)
    try:
        if ns.command == "replay":
            return cmd_replay(args["manifest"], out)
        return COMMANDS[ns.command](args, out)
    except InputError as exc:
        print(f"sddnet: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, SDDError) as exc:
        print(f"sddnet: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FileNotFoundError as exc:
        print(f"sddnet: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
