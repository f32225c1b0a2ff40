"""Normal bi-homogeneous form: six-condition checker and rewriter.

Conditions: (i) leaves are variables, (ii) leaf edges target sum gates,
(iii) outputs are sum gates, (iv) sum/product edges alternate, (v) product
fan-in is 2, (vi) sum fan-out is at most 1 (outputs sit at fan-out 0).

The rewriter guarantees a constant-factor size blowup, asserted as
``size' <= BLOWUP_CONSTANT * size + BLOWUP_CONSTANT`` over the fuzz corpus.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .circuit import INPUT, PROD, SUM, Circuit, CircuitBuilder, prune_dead, validate
from .errors import DegreeZeroOutput, NotHomogeneous

# Declared worst-case blowup of normalize over the supported corpus.  The
# dominating cost is sum-gate duplication per consumer after products are
# binarized; the constant is asserted by tests, not proven.
BLOWUP_CONSTANT = 12

CONDITIONS = ("i", "ii", "iii", "iv", "v", "vi")


@dataclass
class NormalFormReport:
    passed: dict
    offenders: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def failing(self) -> list:
        return [c for c in CONDITIONS if not self.passed[c]]


def check_normal_form(c: Circuit) -> NormalFormReport:
    """Report each of the six conditions independently (never raises)."""
    passed = {k: True for k in CONDITIONS}
    offenders = {k: [] for k in CONDITIONS}
    starts = c.starts()
    indeg = np.diff(starts)
    outdeg = np.zeros(c.ngates, dtype=np.int64)
    if c.nedges:
        np.add.at(outdeg, c.edge_src, 1)
    for g in range(c.ngates):
        kind = c.kinds[g]
        if kind == INPUT:
            continue
        if indeg[g] == 0:
            # leaves must be input gates
            passed["i"] = False
            offenders["i"].append(g)
        if kind == PROD and indeg[g] != 2:
            passed["v"] = False
            offenders["v"].append(g)
        if kind == SUM and outdeg[g] > 1:
            passed["vi"] = False
            offenders["vi"].append(g)
    for e in range(c.nedges):
        u, v = int(c.edge_src[e]), int(c.edge_dst[e])
        ku, kv = c.kinds[u], c.kinds[v]
        if ku == INPUT and kv != SUM:
            passed["ii"] = False
            offenders["ii"].append(e)
        if kv == PROD and ku != SUM:
            passed["iv"] = False
            offenders["iv"].append(e)
        if kv == SUM and ku == SUM:
            passed["iv"] = False
            offenders["iv"].append(e)
    for g in c.outputs:
        if c.kinds[g] != SUM:
            passed["iii"] = False
            offenders["iii"].append(g)
    return NormalFormReport(passed, offenders)


def normalize(c: Circuit) -> Circuit:
    """Rewrite a validated homogeneous circuit into normal form.

    Strategy: express every gate as a weighted combination of *atoms*
    (product gates and leaves).  Sum gates consumed only by other sums
    dissolve into their consumers' atom tables (with like-atom collection,
    so diamonds do not blow up); products are binarized left-leaning with a
    fresh pass-through sum gate per operand, which settles leaf->sum edges,
    alternation, and sum fan-out in one stroke.  Outputs get dedicated sum
    gates; dead gates are pruned at the end.
    """
    report = validate(c)
    if not report.homogeneous:
        raise NotHomogeneous(f"offending sum gates: {[g for g, _ in report.offenders]}")
    for g in c.outputs:
        if sum(report.degree(g)) == 0:
            raise DegreeZeroOutput(f"output gate {g} has total degree 0")

    b = CircuitBuilder(c.blocks, c.field)
    one = c.field.one()
    starts = c.starts()
    # atoms[g]: dict new-gate-id -> weight, over product gates / leaves of the
    # new circuit, such that g = sum(weight * atom)
    atoms = [None] * c.ngates
    for g in range(c.nvars):
        atoms[g] = {g: one}

    def scaled(d, w):
        return {k: w * v for k, v in d.items()}

    def merge_into(acc, d, w):
        for k, v in d.items():
            wv = w * v
            acc[k] = acc[k] + wv if k in acc else wv

    def materialize(d):
        return b.add_sum([(w, g) for g, w in d.items()])

    for g in range(c.nvars, c.ngates):
        lo, hi = starts[g], starts[g + 1]
        children = [int(c.edge_src[i]) for i in range(lo, hi)]
        ws = [c.field.elem(c.weights[i]) for i in range(lo, hi)]
        if c.kinds[g] == SUM:
            acc = {}
            for child, w in zip(children, ws):
                merge_into(acc, atoms[child], w)
            atoms[g] = acc
        elif len(children) == 1:
            # unary products are just scalings
            atoms[g] = scaled(atoms[children[0]], ws[0])
        else:
            left = materialize(scaled(atoms[children[0]], ws[0]))
            for child, w in zip(children[1:], ws[1:]):
                right = materialize(scaled(atoms[child], w))
                prod = b.add_prod([(one, left), (one, right)])
                left = b.add_sum([(one, prod)])
            # drop the final pass-through sum: consumers wrap atoms themselves
            atoms[g] = {prod: one}

    b.set_outputs([materialize(atoms[g]) for g in c.outputs])
    return prune_dead(b.build())
