"""Matplotlib report figures written next to the delimited outputs.

Figures save as SVG with a fixed hash salt and no date metadata so
repeated runs are byte-identical.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "oritube"


def save_line_figure(path, series: dict[str, tuple], x_label: str, y_label: str,
                     title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
    for name, (xs, ys) in series.items():
        ax.plot(xs, ys, label=name, linewidth=1.5)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(frameon=False, fontsize=9)
    ax.grid(True, alpha=0.3)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def save_pattern_figure(path, pattern) -> None:
    """Crease-pattern diagram: solid mountains, dashed valleys."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
    styles = {
        "mountain": {"color": "#c02020", "linestyle": "-", "linewidth": 1.2},
        "valley": {"color": "#2040c0", "linestyle": (0, (4, 2)), "linewidth": 1.2},
        "boundary": {"color": "#202020", "linestyle": "-", "linewidth": 1.6},
    }
    for line in pattern.lines:
        ax.plot(
            [line.p[0], line.q[0]], [line.p[1], line.q[1]], **styles[line.tag]
        )
    ax.set_aspect("equal")
    ax.set_xlabel("mm")
    ax.set_ylabel("mm")
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
