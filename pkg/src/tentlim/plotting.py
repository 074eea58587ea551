"""Plot-data tables and optional matplotlib rendering.

A table is (name, x label, y label, rows). The text form is what
``--format plotdata`` prints; :func:`render` draws the same tables to an image
file and is the only place matplotlib is imported.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence


@dataclass(frozen=True)
class Table:
    name: str
    xlabel: str
    ylabel: str
    rows: tuple  # (x, y) float pairs
    style: str = "line"  # line | points | steps


def _num(v: float) -> str:
    return format(float(v), ".17g")


def tables_to_text(tables: Sequence[Table]) -> str:
    blocks = []
    for t in tables:
        lines = [f"# {t.name}", f"# {t.xlabel} {t.ylabel}"]
        lines.extend(f"{_num(x)} {_num(y)}" for x, y in t.rows)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def render(tables: Sequence[Table], path: str | Path, title: str = "") -> Path:
    """Draw each table into its own panel and save to ``path`` (format from the suffix)."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:  # pragma: no cover - depends on the environment
        raise RuntimeError("figures need matplotlib; install the 'plot' extra") from exc

    path = Path(path)
    n = max(1, len(tables))
    fig, axes = plt.subplots(n, 1, figsize=(6.4, 2.6 * n), squeeze=False)
    for ax, t in zip(axes[:, 0], tables):
        xs = [x for x, _ in t.rows]
        ys = [y for _, y in t.rows]
        if t.style == "points":
            ax.plot(xs, ys, "o", ms=3)
        elif t.style == "steps":
            ax.step(xs, ys, where="mid")
        else:
            ax.plot(xs, ys, lw=0.8)
        ax.set_xlabel(t.xlabel)
        ax.set_ylabel(t.ylabel)
        ax.set_title(t.name, fontsize=9)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-identical where the backend allows it
    meta = {"Software": None} if path.suffix.lower() == ".png" else {}
    fig.savefig(path, metadata=meta)
    plt.close(fig)
    return path
