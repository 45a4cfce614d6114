"""Static figures for experiment reports (Agg backend, written to files)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .domains import Domain  # noqa: E402


def zero_cloud(path, roots, domain: Domain, title: str = "", rho: float | None = None) -> None:
    """Scatter of the zeros against the boundary curve and, optionally, ``L_rho``."""
    fig, ax = plt.subplots(figsize=(5, 5))
    boundary = domain.level_curve(1.0, 512).points
    ax.plot(boundary.real, boundary.imag, "k-", lw=1, label="boundary")
    if rho is not None and rho > domain.r_inner:
        inner = domain.level_curve(rho, 512).points
        ax.plot(inner.real, inner.imag, "k--", lw=0.8, label=f"level {rho:g}")
    z = np.asarray(roots)
    ax.scatter(z.real, z.imag, s=4, c="tab:blue", alpha=0.7, label=f"{len(z)} zeros")
    ax.set_aspect("equal")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def degree_summary(path, per_degree: dict) -> None:
    """Median (with quartile band) of discrepancy and band mass against degree."""
    degrees = sorted(int(d) for d in per_degree)
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for ax, name in zip(axes, ("angular_discrepancy", "band_mass")):
        rows = [per_degree[str(d)][name] for d in degrees]
        ok = [i for i, r in enumerate(rows) if r is not None]
        x = np.array([degrees[i] for i in ok])
        med = np.array([rows[i]["median"] for i in ok])
        lo = np.array([rows[i]["q1"] for i in ok])
        hi = np.array([rows[i]["q3"] for i in ok])
        ax.fill_between(x, lo, hi, alpha=0.3)
        ax.plot(x, med, "o-")
        ax.set_xscale("log")
        ax.set_xlabel("degree")
        ax.set_ylabel(name.replace("_", " "))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def record_scan(path, records) -> None:
    """Largest pulled-back root modulus at every scanned record index."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    # records whose zeros are all interior have modulus 0 and are left out of the log axis
    shown = [r for r in records if r.stats and r.stats["max_root_modulus"] > 0]
    xs = [r.degree for r in shown]
    ys = [r.stats["max_root_modulus"] for r in shown]
    col = ["tab:red" if r.collapse else "tab:blue" for r in shown]
    ax.scatter(xs, ys, s=8, c=col)
    ax.axhline(1.0, color="k", lw=0.8)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("record index")
    ax.set_ylabel("max |phi(zero)|")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def lemma_summary(path, records) -> None:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    vals = [r.extras["rootwise_max_at_n"] for r in records]
    wins = [r.extras["window_max_min_100_2000"] for r in records]
    idx = np.arange(len(records))
    ax.plot(idx, vals, "o", label="rootwise max at n")
    ax.plot(idx, wins, "s", label="min window max, 100..2000")
    ax.axhline(1.0, color="k", lw=0.8)
    ax.set_xlabel("seed index")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report(out: Path, report, records, zeros: dict, domain: Domain) -> list[Path]:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if report.per_degree:
        p = out / "degree_summary.png"
        degree_summary(p, report.per_degree)
        written.append(p)
    for (degree, trial), roots in sorted(zeros.items()):
        if trial != 0 or degree == 0:
            continue
        p = out / f"zeros_{degree}.png"
        zero_cloud(p, roots, domain, f"degree {degree}, trial 0")
        written.append(p)
    scans = [r for r in records if r.kind in ("record", "prop23-record") and r.stats]
    if scans:
        p = out / "record_scan.png"
        record_scan(p, scans)
        written.append(p)
    lem = [r for r in records if r.kind == "lemma"]
    if lem:
        p = out / "lemma_summary.png"
        lemma_summary(p, lem)
        written.append(p)
    return written
