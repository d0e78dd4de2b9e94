"""Static trajectory figures rendered next to the delimited outputs.

Four files mirror the usual ways of reading a run: everything on one axis,
one panel per algorithm, and a three-panel per-parameter comparison
(surrogate iteration in blue, Newton in orange).
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_PARAM_LABELS = ("alpha", "beta", "gamma")
_COLORS = {"self": "C0", "newton": "C1"}
# Strip the version-bearing Software chunk so repeated runs are byte-equal.
_PNG_METADATA = {"Software": None}


def _plot_trace(ax, trace, prefix=""):
    arr = trace.param_array()
    color = _COLORS[trace.algorithm.value]
    styles = ("-", "--", ":")
    for j, name in enumerate(_PARAM_LABELS):
        ax.plot(
            arr[:, j],
            linestyle=styles[j],
            color=color,
            label=f"{prefix}{name}",
        )


def render_figures(self_trace, newton_trace, out_dir) -> dict:
    """Render available traces to PNG files in `out_dir`; returns the path
    of every figure written, keyed by figure name."""
    files = {}
    traces = [t for t in (self_trace, newton_trace) if t is not None]
    if not traces:
        return files

    if len(traces) == 2:
        fig, ax = plt.subplots(figsize=(8, 5))
        for trace in traces:
            _plot_trace(ax, trace, prefix=f"{trace.algorithm.value} ")
        ax.set_xlabel("iteration")
        ax.set_ylabel("estimate")
        ax.set_title("Parameter estimates, both algorithms")
        ax.legend(ncol=2, fontsize=9)
        fig.tight_layout()
        path = out_dir / "estimates_combined.png"
        fig.savefig(path, metadata=_PNG_METADATA)
        plt.close(fig)
        files["figure_combined"] = path

    for trace in traces:
        tag = trace.algorithm.value
        fig, ax = plt.subplots(figsize=(8, 5))
        _plot_trace(ax, trace)
        ax.set_xlabel("iteration")
        ax.set_ylabel("estimate")
        ax.set_title(f"Parameter estimates, {tag}")
        ax.legend()
        fig.tight_layout()
        path = out_dir / f"estimates_{tag}.png"
        fig.savefig(path, metadata=_PNG_METADATA)
        plt.close(fig)
        files[f"figure_{tag}"] = path

    if len(traces) == 2:
        fig, axes = plt.subplots(1, 3, figsize=(12, 4))
        for j, (ax, name) in enumerate(zip(axes, _PARAM_LABELS)):
            for trace in traces:
                ax.plot(
                    trace.param_array()[:, j],
                    color=_COLORS[trace.algorithm.value],
                    label=trace.algorithm.value,
                )
            ax.set_xlabel("iteration")
            ax.set_title(name)
        axes[0].set_ylabel("estimate")
        axes[0].legend()
        fig.tight_layout()
        path = out_dir / "estimates_by_parameter.png"
        fig.savefig(path, metadata=_PNG_METADATA)
        plt.close(fig)
        files["figure_by_parameter"] = path
    return files
