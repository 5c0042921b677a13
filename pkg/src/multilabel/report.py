"""Figure and CSV rendering for solver outcomes.

Every CLI solver accepts a report directory; the outcome lands there as a
delimited summary next to a matplotlib figure.  Figures are decorative
but faithful: all numbers come from the exact outcome, converted to float
only at draw time.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

PIECE_COLORS = ["#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4", "#8c613c"]


def _ensure(outdir: str) -> str:
    os.makedirs(outdir, exist_ok=True)
    return outdir


def _segment_bar(ax, lengths, labels=None):
    left = 0.0
    for idx, ln in enumerate(lengths):
        width = float(ln)
        ax.barh(
            0, width, left=left, height=0.6,
            color=PIECE_COLORS[idx % len(PIECE_COLORS)], edgecolor="black",
        )
        if width > 0.02:
            text = labels[idx] if labels else str(idx + 1)
            ax.text(left + width / 2, 0, text, ha="center", va="center")
        left += width
    ax.set_xlim(0, 1)
    ax.set_yticks([])
    ax.set_xlabel("position")


def render_division(outcome, outdir: str) -> list[str]:
    """Segmented bar of the division plus a per-scenario CSV."""
    _ensure(outdir)
    fig, ax = plt.subplots(figsize=(8, 1.8))
    _segment_bar(ax, outcome.division)
    title = f"{outcome.kind} ({outcome.mode}), flag={outcome.flag}"
    ax.set_title(title)
    fig_path = os.path.join(outdir, f"{outcome.kind}_division.png")
    fig.tight_layout()
    fig.savefig(fig_path, dpi=120)
    plt.close(fig)

    csv_path = os.path.join(outdir, f"{outcome.kind}_scenarios.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["removed", "matching", "gap"])
        for sc in outcome.scenarios:
            writer.writerow(
                [
                    " ".join(map(str, sc.removed)),
                    " ".join(f"{a}->{b}" for a, b in sorted(sc.matching.items())),
                    float(sc.gap) if sc.gap is not None else "",
                ]
            )
    return [fig_path, csv_path]


def render_wages(outcome, quotas, outdir: str) -> list[str]:
    _ensure(outdir)
    fig, ax = plt.subplots(figsize=(6, 3))
    xs = range(1, len(outcome.wages) + 1)
    ax.bar(xs, [float(w) for w in outcome.wages], color=PIECE_COLORS[0])
    ax.set_xticks(list(xs))
    ax.set_xlabel("factory")
    ax.set_ylabel("wage")
    ax.set_title(f"wages, flag={outcome.flag}")
    fig_path = os.path.join(outdir, "wages.png")
    fig.tight_layout()
    fig.savefig(fig_path, dpi=120)
    plt.close(fig)

    csv_path = os.path.join(outdir, "wages.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["factory", "quota", "wage", "workers"])
        assignment = outcome.assignment or {}
        for j, quota in enumerate(quotas, start=1):
            workers = sorted(w for w, f in assignment.items() if f == j)
            writer.writerow(
                [j, quota, float(outcome.wages[j - 1]), " ".join(map(str, workers))]
            )
    return [fig_path, csv_path]


def render_split(outcome, outdir: str) -> list[str]:
    """Interval strip colored by sign class plus a verdict CSV."""
    _ensure(outdir)
    fig, ax = plt.subplots(figsize=(8, 1.8))
    for t, (lo, hi) in enumerate(outcome.intervals):
        width = float(hi - lo)
        if width == 0:
            continue
        color = PIECE_COLORS[0] if t % 2 == 0 else PIECE_COLORS[1]
        ax.barh(0, width, left=float(lo), height=0.6, color=color, edgecolor="black")
    ax.set_xlim(0, 1)
    ax.set_yticks([])
    ax.set_title(f"split, flag={outcome.flag}")
    fig_path = os.path.join(outdir, "halving.png")
    fig.tight_layout()
    fig.savefig(fig_path, dpi=120)
    plt.close(fig)

    csv_path = os.path.join(outdir, "halving_verdicts.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["collection", "kind", "gamma", "attained", "signs"])
        for i, v in enumerate(outcome.verdicts):
            writer.writerow(
                [
                    i,
                    v.kind,
                    float(v.gamma),
                    " ".join(map(str, v.attained)),
                    " ".join("+" if s > 0 else "-" for s in v.signs),
                ]
            )
    return [fig_path, csv_path]


def render_labeled_triangle(t, labs, cert, outdir: str) -> list[str]:
    """2D scatter of a labeled triangle triangulation with the certificate.

    Only renders three-corner simplex domains; other domains get just the
    CSV of the certificate.
    """
    _ensure(outdir)
    out = []
    csv_path = os.path.join(outdir, "certificate.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["labeling", "label", "weight"])
        for (i, j), w in sorted(cert.weights.items()):
            writer.writerow([i, j, float(w)])
    out.append(csv_path)
    if len(t.coords(0)) != 3:
        return out

    def xy(coords):
        # barycentric to plane
        return (
            float(coords[1]) + 0.5 * float(coords[2]),
            0.866 * float(coords[2]),
        )

    fig, ax = plt.subplots(figsize=(6, 5.5))
    for s in t.maximal_simplices:
        pts = [xy(t.coords(v)) for v in s] + [xy(t.coords(s[0]))]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], color="#bbbbbb", lw=0.7)
    for v in t.vertex_ids:
        x, y = xy(t.coords(v))
        text = "/".join(str(lab.values[v]) for lab in labs)
        in_cert = v in cert.sigma
        ax.text(
            x, y, text, ha="center", va="center", fontsize=7,
            color="crimson" if in_cert else "black",
            fontweight="bold" if in_cert else "normal",
        )
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title("labels (certificate in red)")
    fig_path = os.path.join(outdir, "labeled_triangulation.png")
    fig.tight_layout()
    fig.savefig(fig_path, dpi=130)
    plt.close(fig)
    out.append(fig_path)
    return out
