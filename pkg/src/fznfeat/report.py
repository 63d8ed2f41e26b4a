"""Simulation report rendering: delimited output, a readable table, figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .portfolio import SimulationReport

APPROACH_ORDER = ("vbs", "sbs", "knn", "knn_raw")
_APPROACH_LABELS = {
    "vbs": "virtual best",
    "sbs": "single best",
    "knn": "k-NN (scaled)",
    "knn_raw": "k-NN (raw)",
}


def _sorted_entries(report: SimulationReport):
    rank = {a: i for i, a in enumerate(APPROACH_ORDER)}
    return sorted(report.entries, key=lambda e: (e.n, rank.get(e.approach, len(rank))))


def write_report_csv(path: str | Path, report: SimulationReport) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["approach", "n", "portfolio", "psi", "ast", "gap_closure"])
        for e in _sorted_entries(report):
            writer.writerow(
                [
                    e.approach,
                    e.n,
                    "|".join(e.portfolio),
                    repr(round(e.psi, 10)),
                    repr(round(e.ast, 10)),
                    "" if e.gap is None else repr(round(e.gap, 10)),
                ]
            )


def format_report_text(report: SimulationReport) -> str:
    lines = [
        f"timeout {report.timeout:g} s | k={report.k} | backup={report.backup} | "
        f"feat-time charged: {'yes' if report.charge_feat_time else 'no'} | "
        f"seeds {','.join(str(s) for s in report.seeds)}",
        "",
        f"{'approach':<14}{'n':>3}  {'PSI %':>8}  {'AST s':>10}  {'gap':>7}  portfolio",
    ]
    for e in _sorted_entries(report):
        gap = f"{e.gap:7.4f}" if e.gap is not None else "      -"
        lines.append(
            f"{_APPROACH_LABELS.get(e.approach, e.approach):<14}{e.n:>3}  "
            f"{e.psi:8.3f}  {e.ast:10.3f}  {gap}  {','.join(e.portfolio)}"
        )
    lines.append("")
    for n in sorted(report.scaling_delta):
        lines.append(
            f"normalization effect at n={n}: "
            f"scaled PSI - raw PSI = {report.scaling_delta[n]:+.3f} points"
        )
    return "\n".join(lines) + "\n"


def render_figures(out_dir: str | Path, report: SimulationReport) -> list[Path]:
    """PSI, AST, and normalization-effect charts next to the delimited output."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sizes = sorted({e.n for e in report.entries})
    written: list[Path] = []

    for metric, fname, ylabel in (
        ("psi", "psi.png", "solved instances (%)"),
        ("ast", "ast.png", "average solving time (s)"),
    ):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        for approach in APPROACH_ORDER:
            ys = [getattr(report.entry(approach, n), metric) for n in sizes]
            ax.plot(sizes, ys, marker="o", label=_APPROACH_LABELS[approach])
        ax.set_xlabel("portfolio size")
        ax.set_ylabel(ylabel)
        ax.set_xticks(sizes)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path = out_dir / fname
        fig.savefig(path, dpi=110)
        plt.close(fig)
        written.append(path)

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    width = 0.38
    xs = range(len(sizes))
    scaled = [report.entry("knn", n).psi for n in sizes]
    raw = [report.entry("knn_raw", n).psi for n in sizes]
    ax.bar([x - width / 2 for x in xs], scaled, width, label="k-NN (scaled)")
    ax.bar([x + width / 2 for x in xs], raw, width, label="k-NN (raw)")
    for x, n in zip(xs, sizes):
        top = max(scaled[x], raw[x])
        ax.annotate(
            f"{report.scaling_delta[n]:+.2f}",
            (x, top),
            textcoords="offset points",
            xytext=(0, 4),
            ha="center",
            fontsize=9,
        )
    ax.set_xticks(list(xs), [str(n) for n in sizes])
    ax.set_xlabel("portfolio size")
    ax.set_ylabel("solved instances (%)")
    ax.legend()
    fig.tight_layout()
    path = out_dir / "normalization.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    written.append(path)
    return written
