"""Figures for benchmark tables."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

VERDICT_STYLE = {
    "nonblocking": dict(color="tab:green", marker="o"),
    "blocking": dict(color="tab:red", marker="x"),
    "limit": dict(color="tab:gray", marker="s"),
}


def plot_bench(rows, path, title=None):
    """Explored states and run time against instance size, one colour per verdict."""
    fig, (ax_states, ax_time) = plt.subplots(1, 2, figsize=(9, 3.5))
    for verdict, style in VERDICT_STYLE.items():
        sel = [r for r in rows if r["verdict"] == verdict]
        if not sel:
            continue
        sizes = [r["size"] for r in sel]
        ax_states.scatter(sizes, [max(r["explored"], 1) for r in sel], label=verdict, **style)
        ax_time.scatter(sizes, [r["millis"] for r in sel], label=verdict, **style)
    ax_states.set_yscale("log")
    ax_states.set_xlabel("size")
    ax_states.set_ylabel("states explored")
    ax_time.set_xlabel("size")
    ax_time.set_ylabel("time [ms]")
    if rows:
        ax_states.legend(loc="best", fontsize=8)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
