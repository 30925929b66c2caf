"""Log-log convergence figures from experiment CSVs.

Consumes only the documented CSV schema emitted by `korobovqmc converge`
(header ``family,M,d,N,abs_error,bound,norm,ratio``) and draws, per input
file: the measured errors against N, the bound curve, and a reference slope
guide anchored at the first data point (-1/4 for family S, -1/3 for T and U,
overridable).  A least-squares slope fitted to the positive-error points is
printed in the legend; the fit is skipped for fewer than two usable points.

Vector formats (svg/pdf) are preferred for diffability; output bytes are
deterministic for fixed inputs (figure metadata carries no timestamps).
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

EXPECTED_COLUMNS = ["family", "M", "d", "N", "abs_error", "bound", "norm", "ratio"]
REFERENCE_SLOPES = {"S": -0.25, "T": -1.0 / 3.0, "U": -1.0 / 3.0}

plt.rcParams["svg.hashsalt"] = "korobovqmc-plots"
plt.rcParams["svg.fonttype"] = "none"


class CsvFormatError(ValueError):
    """The input does not follow the documented experiment CSV schema."""


def load_rows(path: str) -> list[dict]:
    """Parse one experiment CSV; raises CsvFormatError on schema violations."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise CsvFormatError(f"{path}: empty file")
        missing = [c for c in EXPECTED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise CsvFormatError(f"{path}: missing columns {missing}")
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            try:
                rows.append(
                    {
                        "family": raw["family"],
                        "M": int(raw["M"]),
                        "d": int(raw["d"]),
                        "N": int(raw["N"]),
                        "abs_error": float(raw["abs_error"]),
                        "bound": float(raw["bound"]),
                        "norm": float(raw["norm"]),
                        "ratio": float(raw["ratio"]),
                    }
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise CsvFormatError(f"{path}:{lineno}: bad row ({exc})") from exc
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    return rows


def fit_slope(ns, errs):
    """Least-squares slope of log(err) vs log(N) over positive errors."""
    pts = [(n, e) for n, e in zip(ns, errs) if e > 0]
    if len(pts) < 2:
        return None
    x = np.log([n for n, _ in pts])
    y = np.log([e for _, e in pts])
    return float(np.polyfit(x, y, 1)[0])


def plot_convergence(
    csv_paths,
    out_path: str,
    slope: float | None = None,
    title: str | None = None,
) -> dict:
    """Render the figure; returns {label: fitted slope or None}."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    fitted = {}
    for path in csv_paths:
        rows = load_rows(path)
        ns = [r["N"] for r in rows]
        errs = [r["abs_error"] for r in rows]
        bounds = [r["bound"] for r in rows]
        family = rows[0]["family"]
        d = rows[0]["d"]
        label = f"{os.path.basename(path)} ({family}, d={d})"
        s = fit_slope(ns, errs)
        fitted[label] = s
        err_label = f"{label} error" + (f", fit slope {s:.3f}" if s is not None else "")
        ax.plot(ns, errs, "o-", label=err_label)
        ax.plot(ns, bounds, "--", alpha=0.7, label=f"{label} bound")
        guide = slope if slope is not None else REFERENCE_SLOPES.get(family)
        if guide is not None and errs[0] > 0:
            anchor_n, anchor_e = ns[0], errs[0]
            guide_y = [anchor_e * (n / anchor_n) ** guide for n in ns]
            ax.plot(
                ns,
                guide_y,
                ":",
                color="gray",
                label=f"reference slope {guide:.4g}",
            )
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("N (points)")
    ax.set_ylabel("absolute error")
    ax.set_title(title if title is not None else "QMC convergence")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out_path, metadata=_no_date_metadata(out_path))
    plt.close(fig)
    return fitted


def _no_date_metadata(out_path: str):
    ext = os.path.splitext(out_path)[1].lower()
    if ext == ".svg":
        return {"Date": None}
    if ext == ".pdf":
        return {"CreationDate": None}
    return None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-convergence",
        description="Log-log convergence figure from experiment CSVs.",
    )
    parser.add_argument("csv", nargs="+", help="experiment CSV file(s)")
    parser.add_argument("-o", "--output", required=True, help="image path (svg/pdf/png)")
    parser.add_argument(
        "--slope",
        type=float,
        default=None,
        help="override the reference slope guide (default: family-based)",
    )
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    try:
        fitted = plot_convergence(args.csv, args.output, args.slope, args.title)
    except (CsvFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for label, s in sorted(fitted.items()):
        print(f"{label}: fitted slope {s:.4f}" if s is not None else f"{label}: fit skipped")
    return 0


if __name__ == "__main__":
    sys.exit(main())
