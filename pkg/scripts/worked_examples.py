"""Print both bundled worked examples through the real pipeline (same as ``tri-contract examples``)."""

import sys

from tricontract.cli import run

if __name__ == "__main__":
    for name in ("2.1", "2.2"):
        run(["examples", name])
        print()
    sys.exit(0)
