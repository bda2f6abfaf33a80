"""Figure rendering for the CLI report paths (survey and disparity tables)."""

from __future__ import annotations


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_survey_figure(rows, path):
    """Plot top-level expansion values and bounds against the field size."""
    plt = _pyplot()
    qs = [r.q for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    exact = [(r.q, float(r.value)) for r in rows if r.value is not None]
    if exact:
        ax.plot(*zip(*exact), "o-", color="tab:blue", label="exact")
    ax.plot(
        qs,
        [float(r.lower) for r in rows],
        "^--",
        color="tab:green",
        label="certified lower",
    )
    ax.plot(
        qs,
        [float(r.upper) for r in rows],
        "v--",
        color="tab:red",
        label="upper bound",
    )
    ax.axhline(1.0, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("field size q")
    ax.set_ylabel(f"h_{rows[0].n - 1}" if rows else "h")
    ax.set_xticks(qs)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_disparity_figure(report, path):
    """Bar chart of per-type chamber-degree ranges of a flag building."""
    plt = _pyplot()
    rows = report["types"]
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [r["type"] for r in rows]
    mins = [r["min_degree"] for r in rows]
    maxs = [r["max_degree"] for r in rows]
    ax.bar([x - 0.15 for x in xs], mins, width=0.3, label="min degree")
    ax.bar([x + 0.15 for x in xs], maxs, width=0.3, label="max degree")
    uniform = float(rows[0]["uniform_average"]) if rows else 0.0
    ax.axhline(uniform, color="gray", lw=0.8, ls=":", label="uniform average")
    ax.set_xlabel("vertex type (subspace dimension)")
    ax.set_ylabel("chamber degree")
    ax.set_xticks(xs)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
