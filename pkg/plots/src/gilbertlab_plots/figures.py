"""The four figure kinds, rendered deterministically.

Figures carry no timestamps and use a fixed style, so rerendering the same
inputs with the same library versions reproduces the output byte for byte.
Error bars and bands always come from the SE / CI columns of the inputs,
never from re-estimation.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schemas import (
    SchemaError,
    read_critical,
    read_curves,
    read_gap_report,
    read_profile,
    read_sweep,
)

__all__ = ["FIGURE_KINDS", "FigureSpec", "render"]

FIGURE_KINDS = ("theta-curves", "lambda-crossing", "pivotal-ratio", "gap")

_MODEL_COLORS = {"site": "#1f77b4", "bond": "#d62728", "enhanced": "#2ca02c"}
_LINESTYLES = ("-", "--", ":", "-.")

_RC = {
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "figure.figsize": (6.4, 4.2),
    "font.family": "DejaVu Sans",
    "font.size": 9.5,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "legend.framealpha": 0.9,
    "svg.hashsalt": "gilbertlab-plots",
}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: a figure kind, its input files, the image to write."""

    kind: str
    inputs: tuple[str, ...]
    output: str

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"expected one of {', '.join(FIGURE_KINDS)}")
        if not self.inputs:
            raise ValueError("at least one input file is required")
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))


def _save(fig, output: str) -> None:
    metadata = {"Date": None} if str(output).endswith(".svg") else {"Software": None}
    fig.savefig(output, metadata=metadata, bbox_inches="tight")
    plt.close(fig)


def _theta_curves(spec: FigureSpec):
    table = read_sweep(spec.inputs[0])
    fig, ax = plt.subplots()
    models = sorted(set(table["model"]))
    n_values = sorted(set(table["n"]))
    for model in models:
        color = _MODEL_COLORS.get(model, "#7f7f7f")
        for k, n in enumerate(n_values):
            pick = (table["model"] == model) & (table["n"] == n)
            if not pick.any():
                continue
            order = np.argsort(table["p"][pick])
            p = table["p"][pick][order]
            theta = table["theta"][pick][order]
            se = table["se"][pick][order]
            style = _LINESTYLES[k % len(_LINESTYLES)]
            ax.errorbar(p, theta, yerr=se, color=color, linestyle=style,
                        linewidth=1.3, capsize=2.0, markersize=3, marker="o",
                        label=f"{model} n={n:g}")
    ax.set_xlabel("site level p")
    ax.set_ylabel("crossing probability")
    lam = table["lambda"][0]
    ax.set_title(f"window crossing vs level (intensity {lam:g})")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(ncols=max(1, len(models)), fontsize=8)
    return fig


def _lambda_crossing(spec: FigureSpec):
    table = read_curves(spec.inputs[0])
    overlay = read_critical(spec.inputs[1]) if len(spec.inputs) > 1 else None
    fig, ax = plt.subplots()
    for k, n in enumerate(sorted(set(table["n"]))):
        pick = table["n"] == n
        order = np.argsort(table["lambda"][pick])
        lam = table["lambda"][pick][order]
        theta = table["theta"][pick][order]
        se = table["se"][pick][order]
        (line,) = ax.plot(lam, theta, linewidth=1.4, label=f"n={n:g}")
        ax.fill_between(lam, theta - se, theta + se,
                        color=line.get_color(), alpha=0.2, linewidth=0)
    if overlay is not None:
        ax.axvspan(*overlay["interval"], color="#999999", alpha=0.18,
                   label="consensus interval")
        ax.axvline(overlay["value"], color="#444444", linewidth=1.0,
                   linestyle="--", label=f"estimate {overlay['value']:.3f}")
    ax.set_xlabel("intensity")
    ax.set_ylabel("crossing probability at p = 1")
    ax.set_title("crossing curves across window sizes")
    ax.legend(fontsize=8)
    return fig


def _pivotal_ratio(spec: FigureSpec):
    table = read_profile(spec.inputs[0])
    p_values = np.unique(table["p"])
    q_values = np.unique(table["q"])
    fig, ax = plt.subplots()
    if len(q_values) > 1 and len(table["p"]) == len(p_values) * len(q_values):
        grid = np.full((len(q_values), len(p_values)), np.nan)
        for p, q, ratio in zip(table["p"], table["q"], table["ratio"]):
            grid[np.searchsorted(q_values, q), np.searchsorted(p_values, p)] = ratio
        mesh = ax.pcolormesh(p_values, q_values, np.ma.masked_invalid(grid),
                             shading="nearest", cmap="viridis")
        fig.colorbar(mesh, ax=ax, label="kind-2 / kind-1 integral ratio")
        ax.set_xlabel("site level p")
        ax.set_ylabel("enhancement level q")
    else:
        order = np.argsort(table["p"])
        ax.plot(table["p"][order], table["ratio"][order],
                marker="o", markersize=3, linewidth=1.3)
        ax.set_xlabel("site level p")
        ax.set_ylabel("kind-2 / kind-1 integral ratio")
    n = table["n"][0]
    lam = table["intensity"][0]
    ax.set_title(f"pivotality ratio (intensity {lam:g}, window {n:g})")
    return fig


def _gap_chart(spec: FigureSpec):
    report = read_gap_report(spec.inputs[0])
    rows = report["rows"]
    n = np.array([row["n"] for row in rows])
    fig, ax = plt.subplots()
    for key, label, color in (("site", "site half-point", _MODEL_COLORS["site"]),
                              ("bond", "bond half-point", _MODEL_COLORS["bond"])):
        half = np.array([row[f"{key}_half"] for row in rows])
        lo = np.array([row[f"{key}_ci"][0] for row in rows])
        hi = np.array([row[f"{key}_ci"][1] for row in rows])
        ax.plot(n, half, marker="o", markersize=4, linewidth=1.4,
                color=color, label=label)
        ax.fill_between(n, lo, hi, color=color, alpha=0.25, linewidth=0,
                        label=f"{key} 95% CI")
    for row in rows:
        ax.annotate(f"gap {row['gap']:.3f}",
                    (row["n"], (row["site_half"] + row["bond_half"]) / 2.0),
                    ha="center", fontsize=8, color="#444444")
    ax.set_xscale("log", base=2)
    ax.set_xticks(n, [f"{v:g}" for v in n])
    ax.set_xlabel("window size n")
    ax.set_ylabel("half-crossing level")
    ax.set_title(f"site vs bond half-points (intensity {report['intensity']:g}, "
                 f"{report['replicates']} replicates)")
    ax.legend(fontsize=8)
    return fig


_RENDERERS = {
    "theta-curves": _theta_curves,
    "lambda-crossing": _lambda_crossing,
    "pivotal-ratio": _pivotal_ratio,
    "gap": _gap_chart,
}


def render(spec: FigureSpec) -> str:
    """Draw the figure described by spec and return the output path."""
    with plt.rc_context(_RC):
        fig = _RENDERERS[spec.kind](spec)
        _save(fig, spec.output)
    return spec.output
