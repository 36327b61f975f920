"""Command-line front end: read a mortality CSV, graduate, write tables and plots."""

import sys
from dataclasses import dataclass, field
from pathlib import Path

import click

from gradkit import crossval
from gradkit.graduation import confidence_intervals, graduate
from gradkit.plots import PLOT_KINDS, render_plot
from gradkit.tableio import read_table, write_result

_RESIDUAL_KINDS = {"res": "classical", "propres": "proportional"}


@dataclass
class RunConfig:
    input_path: str
    output_path: str = "result.csv"
    omega: int | None = None
    bandwidth_mode: str = "FX"
    h: float | None = None
    s: float | None = None
    cvh: bool = True
    cvs: bool = False
    cvres: str = "propres"
    logit: bool = False
    alpha: float = 0.05
    ci: bool = False
    plots: list = field(default_factory=list)
    plot_dir: str = "."

    def validate(self) -> None:
        if self.bandwidth_mode not in ("FX", "EX", "VC"):
            raise ValueError(f"bandwidth mode must be FX, EX or VC, got {self.bandwidth_mode!r}")
        if self.cvres not in _RESIDUAL_KINDS:
            raise ValueError(f"cvres must be 'res' or 'propres', got {self.cvres!r}")
        if not self.cvh and self.h is None:
            raise ValueError("--no-cvh requires an explicit --h value")
        adaptive = self.bandwidth_mode in ("EX", "VC")
        if adaptive and not self.cvs and self.s is None:
            raise ValueError(f"bandwidth mode {self.bandwidth_mode} with --no-cvs requires --s")
        if self.cvs and not adaptive:
            raise ValueError("--cvs requires an adaptive bandwidth mode (EX or VC)")
        for kind in self.plots:
            if kind not in PLOT_KINDS:
                raise ValueError(f"unknown plot kind {kind!r}; choose from {', '.join(PLOT_KINDS)}")


def format_trace_line(iteration: int, rss: float, params) -> str:
    pars = "".join(f"{p:11.6g}" for p in params)
    return f"It. {iteration:4d}, RSS = {rss:10.6g}, Par. = {pars}"


def run(config: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    """Execute the full graduation workflow; returns a process exit status."""
    stage = "config"
    try:
        config.validate()

        stage = "input"
        table = read_table(config.input_path, omega=config.omega)

        stage = "cross-validation"
        residual_kind = _RESIDUAL_KINDS[config.cvres]
        adaptive = config.bandwidth_mode in ("EX", "VC")
        trace = None
        if config.cvh or config.cvs:
            cv_config = crossval.CvConfig(
                optimize_h=config.cvh,
                optimize_s=config.cvs,
                residual_kind=residual_kind,
                start_h=config.h if config.h is not None else 0.002,
                start_s=config.s if config.s is not None else 0.2,
            )
            h, s, trace = crossval.select_bandwidth(
                table, config.bandwidth_mode, config.logit, cv_config,
                fixed_s=None if config.cvs or not adaptive else config.s,
            )
            for it, rss, params in trace.records:
                print(format_trace_line(it, rss, params), file=out)
            if not trace.converged:
                print("warning: iteration cap reached before convergence; using best iterate",
                      file=err)
        else:
            h = config.h
            s = config.s if adaptive else 0.0

        stage = "graduation"
        factors = crossval.factors_for_mode(table, config.bandwidth_mode)
        spec = crossval.make_spec(config.bandwidth_mode, h, s, table.omega, factors)
        result = graduate(table, spec, logit=config.logit)
        result.cv_trace = trace
        result.residuals = crossval.loo_residuals(table, spec, config.logit, "classical")
        if not (table.crude_rates == 0).any():
            result.prop_residuals = crossval.loo_residuals(table, spec, config.logit, "proportional")

        if config.ci:
            stage = "confidence intervals"
            confidence_intervals(result, table, config.alpha)

        stage = "output"
        write_result(result, table, config.output_path)

        stage = "plots"
        plot_dir = Path(config.plot_dir)
        plot_dir.mkdir(parents=True, exist_ok=True)
        for kind in config.plots:
            render_plot(kind, result, table, plot_dir / f"{kind}.svg", ci=config.ci)
    except (ValueError, OSError) as exc:
        print(f"error [{stage}]: {exc}", file=err)
        return 1
    return 0


@click.command(name="gradkit")
@click.option("--input", "input_path", required=True, type=click.Path(), help="Input CSV (age,qx[,ex]).")
@click.option("--output", "output_path", default="result.csv", show_default=True,
              type=click.Path(), help="Output CSV path.")
@click.option("--omega", type=int, default=None, help="Truncate the table to ages <= omega.")
@click.option("--bandwidth", "bandwidth_mode", type=click.Choice(["FX", "EX", "VC"]),
              default="FX", show_default=True, help="Fixed or adaptive bandwidth mode.")
@click.option("--h", "h", type=float, default=None,
              help="Global bandwidth (start value when --cvh, exact value when --no-cvh).")
@click.option("--s", "s", type=float, default=None,
              help="Sensitivity in [0,1] (start value when --cvs, exact value when --no-cvs).")
@click.option("--cvh/--no-cvh", default=True, show_default=True,
              help="Select h by cross-validation.")
@click.option("--cvs/--no-cvs", default=False, show_default=True,
              help="Select s by cross-validation (adaptive modes only).")
@click.option("--cvres", type=click.Choice(["res", "propres"]), default="propres",
              show_default=True, help="Residual kind for the CV statistic.")
@click.option("--logit", is_flag=True, help="Smooth on the logit scale.")
@click.option("--alpha", type=float, default=0.05, show_default=True,
              help="Level for pointwise confidence intervals.")
@click.option("--ci", is_flag=True, help="Compute pointwise confidence intervals (needs ex).")
@click.option("--plot", "plots", multiple=True,
              help="Plot kind(s) to render, comma-separable and repeatable.")
@click.option("--plot-dir", default=".", show_default=True, type=click.Path(),
              help="Directory for SVG plots.")
def main(plots, **kwargs):
    """Graduate crude mortality rates with discrete beta kernel smoothing."""
    kinds = [k for group in plots for k in group.split(",") if k]
    config = RunConfig(plots=kinds, **kwargs)
    sys.exit(run(config))


if __name__ == "__main__":
    main()
