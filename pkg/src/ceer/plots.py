"""PNG figures for ``ceer verify --figures``."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .coding import FuelExhausted, build_coding
from .generators import IC, builtin_ic_relations


def plot_class_growth(report, path: Path) -> Path | None:
    """Class-size counters per sampled node against the doubling window."""
    series = [c for c in report.checks if c.name.endswith("class_growth") and c.detail.get("sizes")]
    if not series:
        return None
    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for check in series:
        rel = check.name.split(":")[0] if ":" in check.name else ""
        windows = check.detail["windows"]
        for node, sizes in sorted(check.detail["sizes"].items(), key=lambda kv: int(kv[0])):
            for ax, side in zip(axes, ("F", "G")):
                ax.plot(windows, sizes[side], marker="o", label=f"{rel} node {node}".strip())
    for ax, side in zip(axes, ("F", "G")):
        ax.set_xscale("log", base=2)
        ax.set_xlabel("window N")
        ax.set_title(f"{side}-class size in [0, N]")
    axes[0].set_ylabel("members")
    axes[1].legend(fontsize=6, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_coding_growth(specs, n: int, fuel: int, path: Path) -> Path | None:
    """chi(k) and the second component of pi(k) for each relation, log scale."""
    fig, ax = plt.subplots(figsize=(6, 4))
    drawn = False
    for spec in specs:
        try:
            t = build_coding(spec.nu, n, fuel)
        except FuelExhausted:
            continue
        ks = range(1, t.filled + 1)
        ax.plot(ks, t.chi, label=f"chi, {spec.truth.label}")
        ax.plot(ks, [p[1] for p in t.pi], linestyle="--", label=f"pi second, {spec.truth.label}")
        drawn = True
    if not drawn:
        plt.close(fig)
        return None
    ax.set_yscale("log")
    ax.set_xlabel("k")
    ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_figures(report, spec, directory: str | Path, w) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    if spec is None:
        specs = builtin_ic_relations()
    elif spec.truth.class_kind == IC and spec.kind not in ("prop23", "prop24"):
        specs = [spec]
    else:
        specs = []
    written = [plot_class_growth(report, out / "class_growth.png")]
    if specs:
        written.append(plot_coding_growth(specs, 200, w.fuel, out / "coding_growth.png"))
    return [p for p in written if p is not None]
