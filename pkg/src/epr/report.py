"""Figure rendering for certificates, benches, and verification reports.

All functions write a single PNG to the given path and return that path.
Rendering is opt-in from the CLI; nothing here touches the math modules.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .constants import ALPHA


def render_certificate(cert_json: dict, path: str | Path) -> Path:
    """Two panels: per-edge achieved vs budget, and per-edge ratio vs α."""
    path = Path(path)
    edges = cert_json.get("edges", [])
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    if edges:
        order = sorted(range(len(edges)), key=lambda t: edges[t]["lp_energy"])
        budget = [ALPHA * edges[t]["lp_energy"] for t in order]
        achieved = [edges[t]["achieved"] for t in order]
        ratios = [edges[t]["ratio"] for t in order]
        xs = range(len(edges))
        ax1.plot(xs, budget, "s--", color="tab:gray", label="α · Ẽ (budget)", markersize=3)
        ax1.plot(xs, achieved, "o", color="tab:blue", label="achieved", markersize=3)
        ax1.set_ylabel("edge energy")
        ax1.legend(loc="lower right", fontsize=8)
        ax2.plot(xs, ratios, "o", color="tab:green", markersize=3, label="achieved / Ẽ")
        ax2.axhline(ALPHA, color="tab:red", linestyle=":", label=f"α = {ALPHA:.6f}")
        ax2.set_xlabel("edges (sorted by budget)")
        ax2.set_ylabel("ratio")
        ax2.legend(loc="lower right", fontsize=8)
    fig.suptitle(
        f"certificate: min ratio {cert_json.get('min_ratio')}, pass={cert_json.get('pass')}"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_bench(rows: list[dict], path: str | Path) -> Path:
    """Ratio scatter over instance size, with the α floor marked."""
    path = Path(path)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ns = [r["n"] for r in rows]
    ub_ratios = [r["ratio_vs_upper_bound"] for r in rows]
    ax1.scatter(ns, ub_ratios, s=12, alpha=0.6, label="achieved / upper bound")
    exact = [(r["n"], r["ratio_vs_lambda_max"]) for r in rows if r.get("ratio_vs_lambda_max")]
    if exact:
        ax1.scatter(
            [n for n, _ in exact],
            [v for _, v in exact],
            s=12,
            alpha=0.6,
            color="tab:orange",
            label="achieved / λ_max",
        )
    ax1.axhline(ALPHA, color="tab:red", linestyle=":", label=f"α = {ALPHA:.6f}")
    ax1.set_xlabel("n")
    ax1.set_ylabel("ratio")
    ax1.legend(fontsize=8)
    vals = [v for _, v in exact] if exact else ub_ratios
    ax2.hist(vals, bins=30, color="tab:blue", alpha=0.8)
    ax2.axvline(ALPHA, color="tab:red", linestyle=":")
    ax2.set_xlabel("ratio vs exact optimum" if exact else "ratio vs upper bound")
    ax2.set_ylabel("instances")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def render_verify(reports: list[dict], path: str | Path) -> Path:
    """Margins of every verification item, log scale, green/red by outcome."""
    path = Path(path)
    names, margins, colors = [], [], []
    for rep in reports:
        for item in rep.get("items", []):
            if item.get("margin") is None:
                continue
            label = f"k={rep['k']}: {item['name']}" if "k" in rep else item["name"]
            names.append(label)
            margins.append(max(item["margin"], 1e-18))
            colors.append("tab:green" if item["passed"] else "tab:red")
    fig, ax = plt.subplots(figsize=(8, max(3, 0.3 * len(names))))
    ax.barh(range(len(names)), margins, color=colors)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=7)
    ax.set_xscale("log")
    ax.set_xlabel("margin (log scale)")
    ax.axvline(1e-6, color="tab:gray", linestyle=":", linewidth=1)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
