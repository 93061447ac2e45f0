#!/usr/bin/env python3
"""Plot sweep/segment CSVs produced by the edgepipe CLI.

Usage:
    plot_sweep.py sweep_fc.csv [out.png]      # latency + GOPS vs model size
    plot_sweep.py segment_fc.csv [out.png]    # per-inference time per segment count
"""
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_sweep(rows, out):
    params = [int(r["param"]) for r in rows]
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    ax1.plot(params, [float(r["time_s"]) * 1e3 for r in rows], marker=".")
    ax1.set_ylabel("inference time [ms]")
    ax1r = ax1.twinx()
    ax1r.plot(params, [int(r["host_bytes"]) / 2**20 for r in rows], color="tab:red", alpha=0.5)
    ax1r.set_ylabel("host-resident weights [MiB]", color="tab:red")
    ax2.plot(params, [float(r["gops"]) for r in rows], marker=".")
    ax2.set_ylabel("GOPS")
    ax2.set_xlabel("swept parameter")
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def plot_segment(rows, out):
    fig, ax = plt.subplots(figsize=(7, 4))
    batches = sorted({int(r["batch"]) for r in rows})
    batch = batches[-1]  # largest batch: steady-state view
    for s in sorted({int(r["s"]) for r in rows}):
        pts = [(int(r["param"]), float(r["per_inference_s"]) * 1e3)
               for r in rows if int(r["s"]) == s and int(r["batch"]) == batch]
        pts.sort()
        ax.plot([p for p, _ in pts], [t for _, t in pts], marker=".", label=f"s={s}")
    ax.set_xlabel("swept parameter")
    ax.set_ylabel(f"per-inference time [ms], batch {batch}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)


def main():
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    path = sys.argv[1]
    out = sys.argv[2] if len(sys.argv) > 2 else path.rsplit(".", 1)[0] + ".png"
    rows = load(path)
    if "gops" in rows[0]:
        plot_sweep(rows, out)
    else:
        plot_segment(rows, out)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
