"""Static figures written next to the CSV output (Agg backend, no display)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

PARAM_LABELS = {
    "k": "number of candidate paths $K$",
    "m0": "IRS elements per dimension $M_0$",
    "rho": r"NLoS path-loss exponent $\rho$",
}

SERIES = [
    ("gamma_free_dbm", "multi-path routing", "-o"),
    ("gamma_dp_dbm", "multi-path, with leakage", "--x"),
    ("single_path_dbm", "single-path routing", "-s"),
    ("random_mean_dbm", "random-phase combining (mean)", ":^"),
    ("baseline_dbm", "single reflection, Rayleigh NLoS", "-d"),
]


def _num(s: str):
    return float(s) if s not in ("", None) else None


def plot_sweep(rows, param: str, path, title: str | None = None):
    """Received power versus the swept parameter, one line per populated column."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    x = [float(r["value"] if isinstance(r, dict) else r.value) for r in rows]
    for col, label, style in SERIES:
        ys = [_num(r[col] if isinstance(r, dict) else getattr(r, col)) for r in rows]
        if all(y is None for y in ys):
            continue
        ax.plot(x, [float("nan") if y is None else y for y in ys], style, label=label, ms=4)
    ax.set_xlabel(PARAM_LABELS.get(param, param))
    ax.set_ylabel("received signal power (dBm)")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_scene(scenario, graph, solution, path):
    """Top view: obstacles, LoS edges (grey) and the selected paths (coloured)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for box in scenario.obstacles or ():
        lo, hi = box.min_corner, box.max_corner
        ax.add_patch(Rectangle((lo[0], lo[1]), hi[0] - lo[0], hi[1] - lo[1],
                               color="0.8", zorder=0))
    pos = [scenario.node(i).position for i in range(graph.n_nodes)]
    for i, j in graph.edges:
        ax.annotate("", xy=pos[j][:2], xytext=pos[i][:2],
                    arrowprops=dict(arrowstyle="->", color="0.6", lw=0.6))
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for q, p in enumerate(solution.paths if solution.feasible else []):
        xy = [pos[n][:2] for n in p.nodes]
        ax.plot([a[0] for a in xy], [a[1] for a in xy], "-", lw=2, color=colors[q % len(colors)],
                label=p.label)
    for k, irs in enumerate(scenario.irs, start=1):
        x, y = irs.position[:2]
        ax.plot(x, y, "ks", ms=4)
        ax.arrow(x, y, 0.8 * irs.normal[0], 0.8 * irs.normal[1], width=0.02, color="k")
        ax.annotate(str(k), (x, y), textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.plot(*scenario.bs.position[:2], "b^", ms=8, label="BS")
    ax.plot(*scenario.user.position[:2], "ro", ms=6, label="user")
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.legend(fontsize=7, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
