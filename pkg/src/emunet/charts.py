"""Optional SVG chart for the yearly skewness series."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def skewness_chart(summaries, path, *, scale: float = 1e-9) -> None:
    """Line chart of total trade, absolute and relative skewness over years.

    Output is deterministic: no embedded date, fixed hash salt.
    """
    years = [s.year for s in summaries]
    totals = [s.total_trade * scale for s in summaries]
    absolute = [s.absolute_skewness * scale for s in summaries]
    relative = [s.relative_skewness * 100 for s in summaries]

    with plt.rc_context({"svg.hashsalt": "emunet"}):
        fig, ax = plt.subplots(figsize=(8, 4.5))
        ax.plot(years, totals, marker="o", label="total trade")
        ax.plot(years, absolute, marker="s", label="absolute skewness")
        ax.set_xlabel("year")
        ax.set_ylabel("billions")
        ax2 = ax.twinx()
        ax2.plot(years, relative, marker="^", color="tab:red",
                 label="relative skewness (%)")
        ax2.set_ylabel("relative skewness (%)")
        lines = ax.get_lines() + ax2.get_lines()
        ax.legend(lines, [l.get_label() for l in lines], loc="upper left")
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
