"""Figures written next to the CLI's tabular output (non-interactive backend)."""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# X(n)/n and Y(n)/n approach these limits; drawn as guides only
_GUIDES = {"X": 1.5436890126920764, "Y": 2.839286755214161}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def sequences_figure(n: np.ndarray, columns: Mapping[str, np.ndarray], path) -> Path:
    """Integer-valued columns against n; 0/1/2-valued ones as a step strip."""
    small = {k: v for k, v in columns.items() if v.size and v.max() <= 2}
    large = {k: v for k, v in columns.items() if k not in small}
    rows = int(bool(small)) + int(bool(large))
    fig, axes = plt.subplots(max(rows, 1), 1, figsize=(7, 2.6 + 2.4 * rows), squeeze=False)
    ax_iter = iter(axes[:, 0])
    if large:
        ax = next(ax_iter)
        for name, v in large.items():
            ax.plot(n, v, ".", ms=3, label=name)
            if name in _GUIDES and n.size:
                ax.plot(n, _GUIDES[name] * n, lw=0.6, color="0.5")
        ax.set_xlabel("n")
        ax.legend(loc="upper left", fontsize=8)
    if small:
        ax = next(ax_iter)
        for k, (name, v) in enumerate(small.items()):
            ax.step(n, v + 3 * k, where="mid", lw=0.8, label=name)
        ax.set_yticks([])
        ax.set_xlabel("n")
        ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def guess_figure(per_depth: Sequence[dict], path, title: str = "") -> Path:
    """Class and state counts for each depth of a guess run."""
    depth = [d["depth"] for d in per_depth]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(depth, [d["classes"] for d in per_depth], "o-", label="classes")
    ax.plot(depth, [d["states"] for d in per_depth], "s--", label="minimized states")
    ax.set_xlabel("depth")
    ax.set_ylabel("count")
    ax.set_xticks(depth)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def verification_figure(summary_dict: dict, path) -> Path:
    """Time per case and state count of every defined automaton."""
    cases = summary_dict["cases"]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 3.6))
    names = [c["case"] for c in cases]
    colors = ["tab:green" if c["passed"] else "tab:red" for c in cases]
    ax1.barh(names, [c["seconds"] for c in cases], color=colors)
    ax1.invert_yaxis()
    ax1.set_xlabel("seconds")
    defs = [(s["name"], s["states"]) for c in cases for s in c["statements"] if s["states"]]
    if defs:
        ax2.barh([d[0] for d in defs], [d[1] for d in defs], color="tab:blue")
        ax2.set_xscale("log")
        ax2.invert_yaxis()
    ax2.set_xlabel("states")
    fig.tight_layout()
    return _save(fig, path)
