"""Render volume-ratio curves to image files (matplotlib, Agg backend)."""

from __future__ import annotations

from fractions import Fraction


def render_curve(
    curve, path, title: str = "", tau: Fraction | None = None
) -> None:
    """Plot exact (t, ratio) pairs and save the figure to ``path``.

    Degenerate grid points (ratio None) are skipped.  The fall-off value,
    when given, is marked with a vertical line.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [float(t) for t, r in curve if r is not None]
    ys = [float(r) for t, r in curve if r is not None]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(xs, ys, marker="o", markersize=2.5, linewidth=1.0)
    if tau is not None:
        ax.axvline(float(tau), color="tab:red", linestyle="--", linewidth=0.8,
                   label=f"fall-off t = {tau}")
        ax.axvline(1 - float(tau), color="tab:red", linestyle="--", linewidth=0.8)
        ax.legend(loc="lower center", fontsize=8)
    ax.set_xlabel("t")
    ax.set_ylabel("vol L / vol N")
    ax.set_xlim(0, 1)
    ax.set_ylim(bottom=0)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
