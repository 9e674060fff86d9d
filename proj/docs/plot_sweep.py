"""Plot a CSV written by `mixmi sweep`.

    mixmi sweep --scenario 1 --out sweep.csv
    python3 docs/plot_sweep.py sweep.csv sweep.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

CURVES = [
    ("I_ub_KL", "upper bound (KL)", "-", "C0"),
    ("I_lb_Calpha", "lower bound (Chernoff)", "-", "C1"),
    ("I_ub_2H", "entropy upper bound", "--", "C0"),
    ("I_lb_2H", "entropy lower bound", "--", "C1"),
    ("I_hat_KL", "pairwise KL", ":", "C2"),
    ("I_hat_Calpha", "pairwise Chernoff", ":", "C3"),
    ("I_hat_D", "pairwise combined", ":", "C4"),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("csv")
    parser.add_argument("output", nargs="?", default="sweep.png")
    args = parser.parse_args()

    df = pd.read_csv(args.csv)
    fig, (ax_mi, ax_pe) = plt.subplots(1, 2, figsize=(11, 4.2))

    for col, label, style, color in CURVES:
        ax_mi.plot(df["sigma"], df[col], style, color=color, label=label)
    if df["I_mc"].notna().any():
        err = 3 * df["I_mc_se"].fillna(0)
        ax_mi.errorbar(df["sigma"], df["I_mc"], yerr=err, fmt="k.", ms=4, label="Monte Carlo (3 SE)")
    ax_mi.axhline(df["H_C"].iloc[0], color="grey", lw=0.8)
    ax_mi.set_xscale("log")
    ax_mi.set_xlabel("sigma")
    ax_mi.set_ylabel("I(x; C) [nats]")
    ax_mi.legend(fontsize=7)

    ax_pe.plot(df["sigma"], df["Pe_hu"], label="Hu upper bound")
    ax_pe.plot(df["sigma"], df["Pe_fano"], label="Fano lower bound")
    ax_pe.set_xscale("log")
    ax_pe.set_ylim(0, max(0.55, np.nanmax(df["Pe_hu"]) * 1.05))
    ax_pe.set_xlabel("sigma")
    ax_pe.set_ylabel("error probability")
    ax_pe.legend(fontsize=7)

    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
