"""
Comparing growth bounds on the same grid
========================================

Run the bundled comparison experiment for y = e^z/(z-1): measured T(r, y)
against the certified log-bound, the classical two-term estimate, and the
sharper asymptotic display, all emitted by the CLI into one table.
"""

import tempfile
from pathlib import Path

from merogrowth import cli

out = Path(tempfile.mkdtemp(prefix="merogrowth_demo_"))
rc = cli.main([
    "compare",
    "--config", str(Path(__file__).resolve().parents[1] / "configs" / "compare.toml"),
    "--out", str(out),
])
assert rc == 0

table = (out / "compare_compare.csv").read_text()
print(table)
print(f"(files under {out})")
