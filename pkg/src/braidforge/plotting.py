"""Figure rendering for the report path.

Renders the normalized Alexander coefficient profile of a braid closure to a
file, annotated with the genus data when available.  Kept separate from the
CLI so library users can call it directly.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .braid import BraidWord
from .invariants import LaurentPoly, format_poly


def render_alexander_figure(
    braid: BraidWord,
    delta: LaurentPoly,
    path: str,
    genus: int | None = None,
    slope_threshold: int | None = None,
) -> None:
    coeffs = delta.coeffs()
    exps = sorted(coeffs)
    values = [coeffs[e] for e in exps]

    fig, ax = plt.subplots(figsize=(6, 3.2))
    markerline, stemlines, baseline = ax.stem(exps, values)
    plt.setp(markerline, markersize=5)
    plt.setp(baseline, color="0.6", linewidth=0.8)
    ax.set_xlabel("exponent of t")
    ax.set_ylabel("coefficient")
    ax.set_xticks(exps)
    title = f"{braid.strands}-strand braid, {len(braid.letters)} letters"
    if genus is not None:
        title += f"; genus {genus}, slope threshold {slope_threshold}"
    ax.set_title(title, fontsize=10)
    ax.text(
        0.02,
        0.95,
        format_poly(delta),
        transform=ax.transAxes,
        fontsize=8,
        verticalalignment="top",
        family="monospace",
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
