#!/usr/bin/env python3
"""Render a signs.csv sign-evolution matrix as a colored raster.

Usage: plot_signs.py RUN_DIR [OUT.png]

Red = +1, green = 0, blue = -1, one row per coordinate. Plotting is a
convenience for eyeballing runs; nothing in the test suites depends on it.
"""

import csv
import sys
from pathlib import Path


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__)
        return 2
    run_dir = Path(sys.argv[1])
    signs_path = run_dir / "signs.csv" if run_dir.is_dir() else run_dir
    out_path = Path(sys.argv[2]) if len(sys.argv) > 2 else signs_path.with_suffix(".png")

    with open(signs_path, newline="") as f:
        matrix = [[int(cell) for cell in row] for row in csv.reader(f)]
    if not matrix:
        print("empty sign matrix", file=sys.stderr)
        return 2

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        from matplotlib.colors import ListedColormap
    except ImportError:
        print("matplotlib not available; printing ASCII preview instead", file=sys.stderr)
        glyph = {1: "+", 0: ".", -1: "-"}
        for row in matrix:
            print("".join(glyph[v] for v in row))
        return 0

    cmap = ListedColormap(["#2040c0", "#30a050", "#c03030"])  # -1, 0, +1
    fig, ax = plt.subplots(figsize=(10, 2 + 0.25 * len(matrix)))
    ax.imshow(matrix, aspect="auto", cmap=cmap, vmin=-1, vmax=1, interpolation="nearest")
    ax.set_xlabel("iteration")
    ax.set_ylabel("coordinate")
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    print(f"wrote {out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
