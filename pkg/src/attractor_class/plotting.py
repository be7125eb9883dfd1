"""Raster figures for the CLI (the SVG export is written by hand for byte stability)."""
from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon  # noqa: E402

from .dynamics import PortraitDoc  # noqa: E402

STYLE = {
    "separatrix": dict(color="#c0392b", lw=1.4, zorder=3),
    "representative": dict(color="#2471a3", lw=1.0, zorder=2),
    "generic": dict(color="#7f8c8d", lw=0.5, zorder=1),
}


def plot_portrait(doc: PortraitDoc, path: str, dpi: int = 150) -> None:
    fig, ax = plt.subplots(figsize=(6, 6))
    for region in doc.singular_regions:
        ax.add_patch(Polygon(region, closed=True, facecolor="#d5d8dc", edgecolor="none", zorder=0))
    for c in doc.curves:
        if len(c.vertices) > 1:
            ax.plot(c.vertices[:, 0], c.vertices[:, 1], **STYLE[c.role])
    x0, y0, x1, y1 = doc.bounds()
    ax.set_xlim(x0, x1)
    ax.set_ylim(y0, y1)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def plot_y_map(pairs: Sequence[tuple[float, float]], path: str, dpi: int = 150) -> None:
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogx(xs, ys, "o-", ms=3, color="#2471a3", label="Y(y0)")
    ax.axhline(0.25, color="#c0392b", ls="--", lw=1, label="1/4")
    ax.axhline(min(ys), color="#7f8c8d", ls=":", lw=1, label=f"min = {min(ys):.4f}")
    ax.set_xlabel("y0")
    ax.set_ylabel("Y(y0)")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
