"""Statistics and figures for universal-circuit constructions.

Produces per-level gate-count tables (CSV) and renders matplotlib figures
to files: a level profile bar chart for one construction and a growth
curve across a parameter sweep.
"""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .circuit import Circuit
from .universal import UniversalLayout, t_degree_of_level


def universal_stats(phi: Circuit, layout: UniversalLayout) -> list:
    """One row per (degree pair, level): sum/product gate counts and demand."""
    rows = []
    for pair in layout.copy_order:
        copy = layout.copies[pair]
        for level in copy.levels:
            nprod = sum(
                len(ids) for (lv, _), ids in copy.prod_ids.items() if lv == level
            )
            rows.append(
                {
                    "degree_pair": f"{pair[0]},{pair[1]}",
                    "level": f"{level[0]},{level[1]}",
                    "sum_gates": int(copy.provisioned[level]),
                    "demanded_sums": int(copy.demanded[level]),
                    "product_gates": int(nprod),
                    "t_degree": t_degree_of_level(level),
                }
            )
    return rows


def universal_totals(phi: Circuit, layout: UniversalLayout) -> dict:
    degrees = layout.output_degrees
    return {
        "gates": phi.ngates,
        "edges": phi.nedges,
        "n_controls": phi.nedges,  # N: one control variable per edge
        "n_outputs": len(phi.outputs),  # M
        "degree_pairs": len(layout.copy_order),
        "output_degree_profile": sorted(set(degrees)),
        "output_t_degrees": sorted({t_degree_of_level(d) for d in set(degrees)}),
    }


def write_stats_csv(rows: list, path: str):
    fields = ["degree_pair", "level", "sum_gates", "demanded_sums", "product_gates", "t_degree"]
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)


def plot_level_profile(rows: list, path: str):
    """Bar chart of sum/product gates per (degree pair, level)."""
    labels = [f"{r['degree_pair']}|{r['level']}" for r in rows]
    sums = [r["sum_gates"] for r in rows]
    prods = [r["product_gates"] for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, len(rows) * 0.35), 4))
    xs = range(len(rows))
    ax.bar(xs, sums, label="sum gates")
    ax.bar(xs, prods, bottom=sums, label="product gates")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    ax.set_ylabel("gates")
    ax.set_title("universal circuit gates per degree pair and level")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_growth(samples: list, path: str, xlabel: str = "s"):
    """Line plot of gate/edge counts across a parameter sweep.

    ``samples`` is a list of dicts with keys x, gates, edges.
    """
    xs = [r["x"] for r in samples]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, [r["gates"] for r in samples], marker="o", label="gates")
    ax.plot(xs, [r["edges"] for r in samples], marker="s", label="edges")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    ax.set_title("universal circuit growth")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
