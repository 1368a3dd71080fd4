"""CSV / JSON artifacts. Floats are written with 17 significant digits."""

from __future__ import annotations

import json
import math
from pathlib import Path

from hessframe.bench.runner import ExperimentResult, summarize

RMSE_HEADER = ("domain", "kind", "p", "repeat", "rmse", "log10_rmse", "failure")
LINE_HEADER = ("domain", "kind", "p", "repeat", "t", "truth", "prediction")


def fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _json_float(x):
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _json_float(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_json_float(v) for v in x]
    return x


def rmse_rows(result: ExperimentResult) -> list:
    rows = []
    for r in result.records:
        if r.ok:
            log = math.log10(r.rmse) if r.rmse > 0 else float("-inf")
            rows.append((r.domain, r.kind, r.p, r.repeat, fmt(r.rmse), fmt(log), ""))
        else:
            rows.append((r.domain, r.kind, r.p, r.repeat, "", "", r.failure))
    return rows


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def summary_document(result: ExperimentResult) -> dict:
    return {
        "spec": result.spec.to_dict(),
        "variance_convention": "population (divide by number of successful repeats)",
        "failures": result.failures,
        "cells": summarize(result),
    }


def emit(result: ExperimentResult, out_dir, transforms: bool = True, samples: bool = False) -> list:
    """Write ``rmse.csv``, ``summary.json`` and optional per-cell artifacts.

    Returns the list of written paths.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    path = out / "rmse.csv"
    write_csv(path, RMSE_HEADER, rmse_rows(result))
    written.append(path)

    path = out / "summary.json"
    path.write_text(json.dumps(_json_float(summary_document(result)), indent=2) + "\n")
    written.append(path)

    if transforms and result.transforms:
        tdir = out / "transforms"
        tdir.mkdir(exist_ok=True)
        for (domain, p, repeat), t in sorted(result.transforms.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
            path = tdir / f"{domain}__p{p}__r{repeat}.json"
            path.write_text(json.dumps(t.to_dict()) + "\n")
            written.append(path)
    if samples and result.samples:
        sdir = out / "samples"
        sdir.mkdir(exist_ok=True)
        for (p, repeat), s in sorted(result.samples.items()):
            path = sdir / f"p{p}__r{repeat}.json"
            path.write_text(json.dumps(s.to_dict()) + "\n")
            written.append(path)
    return written


def emit_lines(rows_per_line: list, out_dir) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for k, rows in enumerate(rows_per_line):
        path = out / f"lines_{k}.csv"
        write_csv(path, LINE_HEADER, rows)
        paths.append(path)
    return paths
