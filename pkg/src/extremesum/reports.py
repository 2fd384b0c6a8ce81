"""File emission: CSV/JSON reports, checksummed manifests, summaries.

Every file is written to a temporary sibling and atomically renamed into
place, so a crashed run never leaves a truncated report behind.  Each
command finishes by writing a manifest that echoes the config and lists a
SHA-256 checksum for every file it produced; reruns with the same config
and seed must reproduce those checksums bit for bit, which is what the
reproducibility tests pin.

Floating-point values in CSV files are printed with %.17g so that every
double survives a round trip through text unchanged.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import re
import tempfile
from datetime import datetime, timezone

from .errors import ConfigError
from .limits import CSV_HEADER as _LIMIT_HEADER

MANIFEST_NAME = "manifest.json"


def _tool_version() -> str:
    from . import __version__

    return __version__


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _jsonable(obj):
    """Recursively make an object JSON-clean; non-finite floats -> null."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def atomic_write_text(path, text: str) -> str:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def sanitize_name(descriptor: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", descriptor).strip("_")


# -- functional tables --------------------------------------------------


def write_functional_tables(tables, outdir) -> dict:
    """One CSV per model; returns {filename: path}."""
    outputs = {}
    for table in tables:
        name = f"functionals_{sanitize_name(table.model.describe())}.csv"
        buf = io.StringIO()
        table.to_csv(buf)
        outputs[name] = atomic_write_text(
            os.path.join(outdir, name), buf.getvalue()
        )
    return outputs


# -- limit-check suite --------------------------------------------------


def limit_reports_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_LIMIT_HEADER)
    for rep in reports:
        writer.writerow([_fmt(v) for v in rep.row()])
    return buf.getvalue()


def write_limit_reports(reports, outdir) -> dict:
    name = "limit_checks.csv"
    return {name: atomic_write_text(os.path.join(outdir, name), limit_reports_csv(reports))}


# -- simulation reports -------------------------------------------------

_REPORT_COLUMNS = (
    "model", "n", "k", "stat", "mean", "var", "skew", "kurt",
    "ks", "ad", "target_var", "verdict",
)


def _summary_dict(s) -> dict:
    return {
        "count": s.count,
        "numeric_failures": s.numeric_failures,
        "mean": s.mean,
        "variance": s.variance,
        "skewness": s.skewness,
        "excess_kurtosis": s.excess_kurtosis,
        "ks": s.ks,
        "ad": s.ad,
        "target_variance": s.target_variance,
        "verdict": s.verdict,
        "failed_bounds": list(s.failed_bounds),
    }


def normality_report_json(result, config) -> str:
    cells = []
    for rep in result.reports:
        cells.append(
            {
                "model": rep.model,
                "n": rep.n,
                "k": rep.k,
                "replicates": rep.replicates,
                "statistics": {
                    s.statistic_id: _summary_dict(s) for s in rep.summaries
                },
                "verdict": "pass" if rep.passed else "fail",
            }
        )
    doc = {
        "tool_version": _tool_version(),
        "config": config.to_dict(),
        "cells": cells,
        "verdict": "pass" if result.passed else "fail",
    }
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


def normality_report_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_REPORT_COLUMNS)
    for rep in result.reports:
        for s in rep.summaries:
            writer.writerow(
                [
                    rep.model,
                    rep.n,
                    rep.k,
                    s.statistic_id,
                    _fmt(s.mean),
                    _fmt(s.variance),
                    _fmt(s.skewness),
                    _fmt(s.excess_kurtosis),
                    _fmt(s.ks),
                    _fmt(s.ad),
                    _fmt(s.target_variance),
                    s.verdict,
                ]
            )
    return buf.getvalue()


def samples_csv(cell_samples) -> str:
    """Replicate values, one column per statistic, one row per replicate."""
    stats = list(cell_samples)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(stats)
    if stats:
        r = len(cell_samples[stats[0]].values)
        for i in range(r):
            writer.writerow(
                [_fmt(float(cell_samples[s].values[i])) for s in stats]
            )
    return buf.getvalue()


def write_simulation(result, config, outdir) -> dict:
    outputs = {
        "report.json": atomic_write_text(
            os.path.join(outdir, "report.json"),
            normality_report_json(result, config),
        ),
        "report.csv": atomic_write_text(
            os.path.join(outdir, "report.csv"), normality_report_csv(result)
        ),
    }
    if config.dump_samples:
        for (model, n), cell in result.samples.items():
            name = f"samples_{sanitize_name(model)}_{n}.csv"
            outputs[name] = atomic_write_text(
                os.path.join(outdir, name), samples_csv(cell)
            )
    return outputs


# -- manifests ----------------------------------------------------------


def write_manifest(outdir, config, outputs: dict) -> str:
    """Checksum every produced file and drop manifest.json next to them."""
    doc = {
        "tool_version": _tool_version(),
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "config": config.to_dict() if config is not None else None,
        "outputs": {
            name: sha256_file(path) for name, path in sorted(outputs.items())
        },
    }
    path = os.path.join(outdir, MANIFEST_NAME)
    return atomic_write_text(path, json.dumps(_jsonable(doc), indent=2) + "\n")


def load_manifest(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from exc
    if not isinstance(doc, dict) or "outputs" not in doc:
        raise ConfigError(f"manifest {path} has no outputs section")
    return doc


def verify_manifest(path) -> list:
    """Return a list of problems (missing files, checksum mismatches)."""
    doc = load_manifest(path)
    base = os.path.dirname(os.path.abspath(path))
    problems = []
    for name, digest in doc["outputs"].items():
        target = os.path.join(base, name)
        if not os.path.exists(target):
            problems.append(f"{target}: listed in manifest but missing")
            continue
        actual = sha256_file(target)
        if actual != digest:
            problems.append(
                f"{target}: checksum mismatch (manifest {digest[:12]}..., "
                f"file {actual[:12]}...)"
            )
    return problems


# -- summary ------------------------------------------------------------


def _summarize_report_json(base, name, lines, failures):
    with open(os.path.join(base, name), "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    lines.append("")
    lines.append("| model | n | k | stat | verdict | notes |")
    lines.append("|---|---|---|---|---|---|")
    for cell in doc.get("cells", []):
        for stat, s in cell.get("statistics", {}).items():
            notes = "; ".join(s.get("failed_bounds", []))
            lines.append(
                f"| {cell['model']} | {cell['n']} | {cell['k']} | {stat} "
                f"| {s['verdict']} | {notes} |"
            )
            if s["verdict"] != "pass":
                failures.append(
                    f"{cell['model']} n={cell['n']} {stat}: "
                    f"{notes or s['verdict']}"
                )


def _summarize_limit_csv(base, name, lines, failures):
    with open(os.path.join(base, name), "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    n_pass = sum(1 for r in rows if r["verdict"] == "pass")
    lines.append("")
    lines.append(f"Limit checks: {n_pass}/{len(rows)} pass.")
    bad = [r for r in rows if r["verdict"] != "pass"]
    if bad:
        lines.append("")
        lines.append("| check | model | params | value | target | verdict |")
        lines.append("|---|---|---|---|---|---|")
        for r in bad:
            lines.append(
                f"| {r['check_id']} | {r['model']} | {r['params']} "
                f"| {r['value']} | {r['target']} | {r['verdict']} |"
            )
            failures.append(f"{r['check_id']} {r['model']}: value {r['value']}")


def summarize_manifests(paths) -> tuple:
    """Merge manifests into markdown; returns (text, all_pass).

    Raises ConfigError when a manifest is unreadable or a referenced file
    is missing or fails its checksum.
    """
    if not paths:
        raise ConfigError("need at least one manifest to summarize")
    lines = ["# Run summary", ""]
    failures = []
    for path in paths:
        problems = verify_manifest(path)
        if problems:
            raise ConfigError(
                f"manifest {path} failed verification: " + "; ".join(problems)
            )
        doc = load_manifest(path)
        base = os.path.dirname(os.path.abspath(path))
        lines.append(f"## {path}")
        lines.append("")
        created = doc.get("created_utc", "unknown time")
        lines.append(
            f"Produced by version {doc.get('tool_version', '?')} at {created}; "
            f"{len(doc['outputs'])} file(s), checksums verified."
        )
        for name in doc["outputs"]:
            if name.endswith("report.json"):
                _summarize_report_json(base, name, lines, failures)
            elif name.endswith("limit_checks.csv"):
                _summarize_limit_csv(base, name, lines, failures)
        lines.append("")
    if failures:
        lines.append(f"## Verdict: FAILURES ({len(failures)})")
        lines.append("")
        for f in failures:
            lines.append(f"- {f}")
    else:
        lines.append("## Verdict: ALL PASS")
    lines.append("")
    return "\n".join(lines), not failures
