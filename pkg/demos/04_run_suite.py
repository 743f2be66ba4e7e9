"""Run the quick experiment config in-process and summarise each report."""
import json
import tempfile
from pathlib import Path

from orliczlab.experiments import run_config

cfg = json.loads((Path(__file__).resolve().parents[1] / "configs" / "quick.json").read_text())
with tempfile.TemporaryDirectory() as out:
    passed, doc = run_config(cfg, out)
    for entry in doc["experiments"]:
        checks = entry.get("checks", {})
        bad = [k for k, v in checks.items() if not v]
        print(f"{entry['experiment']:<20s} {'ok' if not bad else 'FAILED ' + ', '.join(bad)}")
    print("CSV tables:", sorted(p.name for p in Path(out).glob("*.csv")))
print("all passed:", passed)
