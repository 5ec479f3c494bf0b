#!/usr/bin/env python3
"""Write the cumulative gas-cost curves for both scenario pairs as CSV files.

One file per pair (<out>/<pair>.csv) with columns n, reference_total,
generated_total, covering the requested run range. With --plot, also render a
PNG per pair (requires matplotlib).

Usage: python scripts/cost_curves.py [--from 1] [--to 8] [--out curves/]
"""

import argparse
from pathlib import Path

from chainline.assets import scenarios_path
from chainline.gascost import compare_table, load_scenarios, scenario_pairs, write_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scenarios", default=None, help="Scenario file (defaults to bundled)")
    parser.add_argument("--from", dest="n_from", type=int, default=1)
    parser.add_argument("--to", dest="n_to", type=int, default=8)
    parser.add_argument("--out", default="curves")
    parser.add_argument("--plot", action="store_true")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scenarios = load_scenarios(args.scenarios or scenarios_path())

    for name, reference, generated in scenario_pairs(scenarios):
        rows = compare_table(reference, generated, args.n_from, args.n_to)
        csv_path = out / f"{name}.csv"
        with csv_path.open("w", newline="", encoding="utf-8") as fh:
            write_csv(rows, fh)
        cross = rows[0].crossover
        print(f"{csv_path}: {len(rows)} rows, crossover={cross}")
        if args.plot:
            import matplotlib

            matplotlib.use("Agg")
            import matplotlib.pyplot as plt

            ns = [r.runs for r in rows]
            plt.figure(figsize=(6, 4))
            plt.plot(ns, [r.reference_total for r in rows], marker="o", label="reference")
            plt.plot(ns, [r.generated_total for r in rows], marker="s", label="generated")
            plt.xlabel("executions")
            plt.ylabel("cumulative gas")
            plt.title(f"{name}: cumulative cost")
            plt.legend()
            plt.tight_layout()
            png_path = out / f"{name}.png"
            plt.savefig(png_path)
            plt.close()
            print(f"{png_path}: written")


if __name__ == "__main__":
    main()
