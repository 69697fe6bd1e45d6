"""Python access to the prodlaw C++ core.

Numerical work happens in the compiled ``_prodlaw`` module; this package adds
readers for the CSV/JSON reports and a dict-returning ``run_plan``.
"""

import csv
import json

from ._prodlaw import *  # noqa: F401,F403
from ._prodlaw import run_plan as _run_plan

__version__ = "0.1.0"


def run_plan(tag, n_grid, **kwargs):
    """Run an experiment plan and return the JSON report as a dict."""
    return json.loads(_run_plan(tag, list(n_grid), **kwargs))


def read_report_csv(path):
    """Cells of a report CSV as a list of dicts with numeric fields parsed."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            for key in ("statistic", "argmax_re", "argmax_im", "argmax_radius"):
                row[key] = float(row[key])
            row["n"] = int(row["n"])
            row["trial"] = int(row["trial"])
            rows.append(row)
    return rows


def read_report_json(path):
    with open(path) as fh:
        return json.load(fh)
