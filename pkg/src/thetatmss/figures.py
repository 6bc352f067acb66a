"""Figure rendering for the report commands.

Figures are built directly as matplotlib Figure objects, with no pyplot and
no global state, so rendering is deterministic and backend-independent. The
CLI saves them next to the delimited data files when asked to.
"""

import numpy as np
from matplotlib.figure import Figure

__all__ = [
    "surface_figure",
    "curves_figure",
    "log_curves_figure",
    "width_figure",
    "save_figure",
]


def surface_figure(r_values, theta_values, impurity) -> Figure:
    """Color map of the impurity over the (r, theta) rectangle.

    `impurity` is indexed [i_r, i_theta], matching the row order of the
    surface data file.
    """
    impurity = np.asarray(impurity, dtype=float)
    fig = Figure(figsize=(7.2, 4.8))
    ax = fig.add_subplot()
    mesh = ax.pcolormesh(
        np.asarray(r_values, dtype=float),
        np.asarray(theta_values, dtype=float),
        impurity.T,
        shading="nearest",
        cmap="viridis",
        vmin=0.0,
        vmax=1.0,
    )
    fig.colorbar(mesh, ax=ax, label="impurity")
    ax.set_xlabel("r")
    ax.set_ylabel("theta (rad)")
    ax.set_title("reduced-mode impurity")
    fig.set_layout_engine("tight")
    return fig


def _line_figure(theta_values, r_values, rows, ylabel) -> Figure:
    fig = Figure(figsize=(7.2, 4.8))
    ax = fig.add_subplot()
    for r, row in zip(r_values, rows):
        ax.plot(theta_values, row, label=f"r = {r:g}", linewidth=1.4)
    ax.set_xlabel("theta (rad)")
    ax.set_ylabel(ylabel)
    ax.legend(title=None, fontsize="small")
    ax.grid(True, alpha=0.3)
    fig.set_layout_engine("tight")
    return fig


def curves_figure(theta_values, r_values, impurity_rows) -> Figure:
    """One impurity-versus-theta line per squeezing value."""
    return _line_figure(theta_values, r_values, impurity_rows, "impurity")


def log_curves_figure(theta_values, r_values, log10_rows) -> Figure:
    """One log10(1 - impurity) line per squeezing value."""
    return _line_figure(theta_values, r_values, log10_rows, "log10(1 - impurity)")


def width_figure(r_values, widths) -> Figure:
    """Transition width against squeezing, on a log scale."""
    fig = Figure(figsize=(6.0, 4.2))
    ax = fig.add_subplot()
    ax.semilogy(r_values, widths, marker="o", linewidth=1.4)
    ax.set_xlabel("r")
    ax.set_ylabel("transition width (rad)")
    ax.grid(True, which="both", alpha=0.3)
    fig.set_layout_engine("tight")
    return fig


def save_figure(fig: Figure, path, dpi: int = 150) -> None:
    """Write the figure to `path`; format follows the file extension."""
    fig.savefig(path, dpi=dpi)
