"""Experiment report container with deterministic JSON/CSV output."""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np


def _plain(obj):
    """Convert numpy scalars/arrays and non-finite floats to JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


@dataclass
class ExperimentReport:
    experiment: str
    tag: str = ""
    config: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(bool(v) for v in self.checks.values())

    def add_table(self, name, columns, rows):
        self.tables[name] = {"columns": list(columns), "rows": [list(r) for r in rows]}

    def add_constant(self, name, value, provenance):
        self.constants[name] = {"value": value, "provenance": provenance}

    def to_dict(self, timestamp=True):
        meta = dict(self.metadata)
        if not timestamp:
            meta.pop("timestamp", None)
        return _plain({"experiment": self.experiment, "tag": self.tag, "config": self.config,
                       "tables": self.tables, "constants": self.constants,
                       "checks": self.checks, "passed": self.passed, "metadata": meta})

    def to_json(self, timestamp=True):
        return json.dumps(self.to_dict(timestamp), indent=2, sort_keys=True)

    def write_csvs(self, out_dir, prefix=None):
        paths = []
        prefix = prefix or self.experiment
        for name, table in self.tables.items():
            path = os.path.join(out_dir, f"{prefix}__{name}.csv")
            with open(path, "w", newline="") as fh:
                wr = csv.writer(fh)
                wr.writerow(table["columns"])
                for row in table["rows"]:
                    wr.writerow([_fmt(v) for v in row])
            paths.append(path)
        return paths


def _fmt(v):
    v = _plain(v)
    if isinstance(v, float):
        return repr(v)
    return v
