#!/usr/bin/env python3
"""Render the four standard panels from a sweep CSV.

Reads a table produced by ``ru-energy sweep`` (or run_default_sweep.py) and
writes a 2x2 figure: energy vs Tx power, efficiency vs Tx power, efficiency
vs energy, and the two gradients. Plotting lives here, outside the package,
so the library stays chart-free.
"""

import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_rows(path: str) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as handle:
        return [
            {k: (float(v) if v != "" else None) for k, v in row.items()}
            for row in csv.DictReader(handle)
        ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("csv_path", help="sweep CSV file")
    parser.add_argument("--out", default=None, help="output image (default <csv>.png)")
    args = parser.parse_args()

    rows = read_rows(args.csv_path)
    p = [r["p_tx_dbm"] for r in rows]
    energy = [r["consumed_j"] for r in rows]
    eta = [r["efficiency_kbit_per_j"] for r in rows]
    d_energy = [r["dE_dp"] for r in rows]
    d_eta = [r["deta_dp"] for r in rows]

    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    axes[0, 0].plot(p, energy, marker="o", ms=3)
    axes[0, 0].set_xlabel("Tx power [dBm]")
    axes[0, 0].set_ylabel("energy consumed [J]")

    axes[0, 1].plot(p, eta, marker="o", ms=3, color="tab:green")
    axes[0, 1].set_xlabel("Tx power [dBm]")
    axes[0, 1].set_ylabel("efficiency [kbit/J]")

    axes[1, 0].plot(energy, eta, marker="o", ms=3, color="tab:red")
    axes[1, 0].set_xlabel("energy consumed [J]")
    axes[1, 0].set_ylabel("efficiency [kbit/J]")

    ax = axes[1, 1]
    ax.plot(p, d_energy, marker="o", ms=3, label="dE/dp [J/dB]")
    ax.set_xlabel("Tx power [dBm]")
    ax.set_ylabel("dE/dp [J/dB]")
    twin = ax.twinx()
    twin.plot(p, d_eta, marker="s", ms=3, color="tab:orange", label="d$\\eta$/dp")
    twin.set_ylabel("d$\\eta$/dp [(kbit/J)/dB]")

    fig.tight_layout()
    out = args.out or str(Path(args.csv_path).with_suffix(".png"))
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
