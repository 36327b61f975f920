"""Diagnostic plots rendered as SVG files.

Six kinds: observed / fitted / obsfit rate-vs-age plots on a base-10 log
y-axis (obsfit optionally with the pointwise confidence band), residual
histograms for both residual definitions, and a bar plot of the exposures.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from gradkit.graduation import GraduationResult, MortalityTable

PLOT_KINDS = ("observed", "fitted", "obsfit", "histres", "histpropres", "exposed")


class PlotError(ValueError):
    pass


def plot_series(kind: str, result: GraduationResult | None, table: MortalityTable,
                ci: bool = False) -> dict:
    """Collect the arrays a given plot kind draws; raises if prerequisites are missing.

    Kept separate from rendering so tests can check plotted content without
    parsing SVG coordinates.  ``result`` may be None for the kinds that only
    draw the table itself (observed, exposed).
    """
    if kind not in PLOT_KINDS:
        raise PlotError(f"unknown plot kind {kind!r}; choose from {', '.join(PLOT_KINDS)}")
    if result is None and kind not in ("observed", "exposed"):
        raise PlotError(f"plot {kind} requires a graduation result")
    ages = np.arange(table.omega + 1)
    if kind == "observed":
        return {"ages": ages, "observed": np.asarray(table.crude_rates, dtype=float)}
    if kind == "fitted":
        return {"ages": ages, "fitted": result.fitted}
    if kind == "obsfit":
        out = {"ages": ages,
               "observed": np.asarray(table.crude_rates, dtype=float),
               "fitted": result.fitted}
        if ci:
            if result.lower is None or result.upper is None:
                raise PlotError("obsfit with a confidence band requires computed CI bounds")
            out["lower"] = result.lower
            out["upper"] = result.upper
        return out
    if kind in ("histres", "histpropres"):
        r = result.residuals if kind == "histres" else result.prop_residuals
        if r is None:
            raise PlotError(f"plot {kind} requires the corresponding residual vector")
        return {"residuals": np.asarray(r, dtype=float)}
    if table.exposures is None:
        raise PlotError("plot 'exposed' requires exposures")
    return {"ages": ages, "exposed": np.asarray(table.exposures, dtype=float)}


def _sturges_bins(n: int) -> int:
    return max(1, int(math.ceil(math.log2(n))) + 1) if n > 1 else 1


def render_plot(kind: str, result: GraduationResult | None, table: MortalityTable, path,
                ci: bool = False) -> None:
    """Render one diagnostic plot to an SVG file."""
    data = plot_series(kind, result, table, ci=ci)
    fig, ax = plt.subplots(figsize=(8, 5))
    try:
        if kind in ("observed", "fitted", "obsfit"):
            if "observed" in data:
                ax.plot(data["ages"], data["observed"], "o", ms=4, color="black", label="observed")
            if "fitted" in data:
                ax.plot(data["ages"], data["fitted"], "-", color="tab:red", label="fitted")
            if "lower" in data:
                ax.fill_between(data["ages"], data["lower"], data["upper"],
                                color="tab:red", alpha=0.2, label="pointwise CI")
            ax.set_yscale("log", base=10)
            ax.set_xlabel("age")
            ax.set_ylabel("mortality rate (log scale)")
            if kind == "obsfit":
                ax.legend()
        elif kind in ("histres", "histpropres"):
            r = data["residuals"]
            ax.hist(r, bins=_sturges_bins(len(r)), color="tab:gray", edgecolor="black")
            ax.set_xlabel("residual")
            ax.set_ylabel("count")
        else:
            ax.bar(data["ages"], data["exposed"], color="tab:gray", edgecolor="black", width=0.8)
            ax.set_xlabel("age")
            ax.set_ylabel("exposed")
        fig.savefig(path, format="svg")
    finally:
        plt.close(fig)
