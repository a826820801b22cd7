"""Example plots for yardstick output files (matplotlib, pandas).

    yardstick sentiment --input prices.csv --out out
    yardstick compare   --input prices.csv --out out
    yardstick dist      --input out/alpha_pool.csv --out out
    python docs/plot_example.py out
"""

import glob
import json
import os
import sys

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def scatter(ax, path, title):
    pts = pd.read_csv(path)
    ax.scatter(pts.x, pts.y, s=2, alpha=0.4)
    lim = max(pts.x.abs().max(), pts.y.abs().max())
    ax.plot([-lim, lim], [-lim, lim], color="black", lw=0.8)
    ax.set_title(title)
    ax.set_xlabel("predicted return")
    ax.set_ylabel("realized return")


def main(out):
    fig, axes = plt.subplots(2, 2, figsize=(11, 9))

    scatter(axes[0, 0], os.path.join(out, "capm_points.csv"), "CAPM")
    scatter(axes[0, 1], os.path.join(out, "yardstick_points.csv"), "Yardstick")

    pdfs = pd.read_csv(os.path.join(out, "conditional_pdfs.csv"))
    inset = axes[0, 1].inset_axes([0.6, 0.08, 0.37, 0.3])
    for x_target, g in pdfs.groupby("x_target"):
        mids = (g.bin_left + g.bin_right) / 2
        inset.plot(mids, g.density, lw=0.8)
        inset.axvline(x_target, lw=0.4, ls=":", color="grey")
    inset.set_yticks([])

    for path in sorted(glob.glob(os.path.join(out, "sentiment_*.csv"))):
        s = pd.read_csv(path, parse_dates=["date"])
        ticker = os.path.basename(path)[len("sentiment_"):-len(".csv")]
        axes[1, 0].plot(s.date, s.cumulative, lw=0.8, label=ticker)
    axes[1, 0].set_title("Cumulative sentiment")
    axes[1, 0].tick_params(axis="x", labelrotation=30)
    axes[1, 0].legend(fontsize="small")

    hist = pd.read_csv(os.path.join(out, "alpha_hist.csv"))
    mids = (hist.bin_left + hist.bin_right) / 2
    axes[1, 1].bar(mids, hist.density, width=hist.bin_right - hist.bin_left, alpha=0.6)
    with open(os.path.join(out, "laplace_fit.json")) as f:
        fit = json.load(f)
    pos = mids[mids > 0]
    neg = mids[mids < 0]
    n = fit["n_positive"] + fit["n_negative"]
    # Two-sided exponential: each side carries its share of the sample.
    axes[1, 1].plot(pos, fit["n_positive"] / n / fit["scale_pos"] * np.exp(-pos / fit["scale_pos"]), "r-")
    axes[1, 1].plot(neg, fit["n_negative"] / n / fit["scale_neg"] * np.exp(neg / fit["scale_neg"]), "r-")
    axes[1, 1].set_yscale("log")
    axes[1, 1].set_title("Sentiment distribution")
    axes[1, 1].set_xlabel("alpha")

    fig.tight_layout()
    fig.savefig(os.path.join(out, "yardstick.png"), dpi=150)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
