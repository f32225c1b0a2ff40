"""Universal circuits for bi-homogeneous computation.

``build_universal`` lays out the fixed-wiring circuit that can be
programmed, through its edge multipliers, to compute any normal-form
circuit within given size and bi-degree bounds.  ``build_universal_alldeg``
unions one copy per degree pair.  ``controlize`` replaces every edge
multiplier by a fresh control variable ``t_e`` routed through a product
gate, yielding the tri-homogeneous circuit whose zero-set projection is
the universal circuit resultant.

Sum gates are provisioned per level as ``max(r1*r2*s, demand)`` where
``demand`` is the exact number of product in-edges sourced at the level;
the naive ``r1*r2*s`` figure is not always enough for the allocation to
go through (the builder asserts the counting argument).  With
``lean=True`` only demanded sum gates plus the designated outputs are
created, which coincides with ``prune_dead`` of the full build.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .circuit import INPUT, PROD, SUM, BlockSpec, Circuit
from .errors import BadParameters, ResourceLimit
from .field import FieldDescriptor, GF

# Declared gate-count constant: gates(build_universal) <= C_PHI*(r1^2 r2^2 + r1^2 + r2^2)*s,
# asserted over the acceptance grid.
C_PHI = 3


def _levels(r1: int, r2: int) -> list:
    out = [
        (l1, l2)
        for l1 in range(r1 + 1)
        for l2 in range(r2 + 1)
        if (l1, l2) != (0, 0)
    ]
    return sorted(out, key=lambda l: (l[0] + l[1], l))


def _types(level) -> list:
    """Unordered splits of a level into two nonzero bi-degrees."""
    l1, l2 = level
    out = []
    for a1 in range(l1 + 1):
        for a2 in range(l2 + 1):
            a = (a1, a2)
            b = (l1 - a1, l2 - a2)
            if a == (0, 0) or b == (0, 0):
                continue
            if a <= b:
                out.append((a, b))
    return sorted(out)


def _demand(level, r1: int, r2: int, s: int) -> int:
    """Number of product in-edges sourced from sum gates of this level."""
    l1, l2 = level
    partners = (r1 - l1 + 1) * (r2 - l2 + 1) - 1
    if 2 * l1 <= r1 and 2 * l2 <= r2:
        partners += 1  # the self-paired type consumes two sums per product
    return s * partners


def _provisioned(level, r1, r2, s, n, lean) -> int:
    dem = _demand(level, r1, r2, s)
    top = n if level == (r1, r2) else 0
    if lean:
        return dem + top
    return max(max(r1, 1) * max(r2, 1) * s, dem, top)


@dataclass
class CopyLayout:
    """Level/type bookkeeping for one degree pair of the universal circuit."""

    degree: tuple
    levels: list
    sum_ids: dict  # level -> np.ndarray of gate ids
    prod_ids: dict  # (level, type) -> np.ndarray of gate ids
    alloc: dict  # (level, type) -> (sums for slot a, sums for slot b)
    provisioned: dict  # level -> sum gates created
    demanded: dict  # level -> sum gates consumed by products
    outputs: list  # designated output sum gates (length n)


@dataclass
class UniversalLayout:
    n: int
    m: int
    s: int
    lean: bool
    alldeg: bool
    r: int | None
    copies: dict  # degree pair -> CopyLayout
    copy_order: list = dc_field(default_factory=list)

    @property
    def output_degrees(self) -> list:
        return [d for d in self.copy_order for _ in range(self.n)]

    def designated_outputs(self) -> list:
        return [g for d in self.copy_order for g in self.copies[d].outputs]


def _check_params(n, m, s, pairs):
    if n < 1 or m < 0:
        raise BadParameters(f"need n >= 1 and m >= 0, got n={n} m={m}")
    for r1, r2 in pairs:
        if r1 < 0 or r2 < 0 or (r1, r2) == (0, 0):
            raise BadParameters(f"bad degree pair {(r1, r2)}")
        if m == 0 and r2 > 0:
            raise BadParameters(f"degree pair {(r1, r2)} needs y-variables but m=0")


def _assemble(n, m, s, pairs, field, lean):
    nv = n + m
    kinds_chunks = [np.zeros(nv, dtype=np.int8)]
    src_chunks, dst_chunks = [], []
    gid = nv
    x_ids = np.arange(n, dtype=np.int64)
    y_ids = np.arange(n, nv, dtype=np.int64)
    copies = {}
    for r1, r2 in pairs:
        levels = _levels(r1, r2)
        sum_ids, prod_ids, alloc = {}, {}, {}
        provisioned, demanded = {}, {}
        cursor = {}
        for level in levels:
            level_prods = []
            for t in _types(level):
                a, b = t
                pids = np.arange(gid, gid + s, dtype=np.int64)
                gid += s
                kinds_chunks.append(np.full(s, PROD, dtype=np.int8))
                if a == b:
                    ca = cursor[a]
                    assert ca + 2 * s <= len(sum_ids[a]), "sum-level exhausted"
                    sa = sum_ids[a][ca : ca + s]
                    sb = sum_ids[a][ca + s : ca + 2 * s]
                    cursor[a] = ca + 2 * s
                else:
                    ca, cb = cursor[a], cursor[b]
                    assert ca + s <= len(sum_ids[a]), "sum-level exhausted"
                    assert cb + s <= len(sum_ids[b]), "sum-level exhausted"
                    sa = sum_ids[a][ca : ca + s]
                    sb = sum_ids[b][cb : cb + s]
                    cursor[a], cursor[b] = ca + s, cb + s
                src_chunks.append(np.stack([sa, sb], axis=1).ravel())
                dst_chunks.append(np.repeat(pids, 2))
                prod_ids[(level, t)] = pids
                alloc[(level, t)] = (sa, sb)
                level_prods.append(pids)
            P = _provisioned(level, r1, r2, s, n, lean)
            demanded[level] = _demand(level, r1, r2, s)
            provisioned[level] = P
            sids = np.arange(gid, gid + P, dtype=np.int64)
            gid += P
            kinds_chunks.append(np.full(P, SUM, dtype=np.int8))
            if level == (1, 0):
                feed = x_ids
            elif level == (0, 1):
                feed = y_ids
            else:
                feed = np.concatenate(level_prods) if level_prods else np.empty(0, np.int64)
            if P and len(feed):
                src_chunks.append(np.tile(feed, P))
                dst_chunks.append(np.repeat(sids, len(feed)))
            sum_ids[level] = sids
            cursor[level] = 0
        top = (r1, r2)
        copies[top] = CopyLayout(
            degree=top,
            levels=levels,
            sum_ids=sum_ids,
            prod_ids=prod_ids,
            alloc=alloc,
            provisioned=provisioned,
            demanded=demanded,
            outputs=[int(g) for g in sum_ids[top][:n]],
        )
    kinds = np.concatenate(kinds_chunks)
    src = np.concatenate(src_chunks) if src_chunks else np.empty(0, np.int64)
    dst = np.concatenate(dst_chunks) if dst_chunks else np.empty(0, np.int64)
    if field.is_prime_field:
        weights = np.zeros(len(src), dtype=np.int64)
    else:
        weights = np.empty(len(src), dtype=object)
        weights[:] = Fraction(0)
    blocks = BlockSpec.of(("x", n), ("y", m))
    outputs = [g for pair in pairs for g in copies[pair].outputs]
    phi = Circuit(blocks, field, kinds, src, dst, weights, outputs, check=False)
    return phi, copies


def plan_universal(n, m, s, pairs, lean) -> tuple:
    """(gates, edges) of the would-be construction, without building it."""
    gates = n + m
    edges = 0
    for r1, r2 in pairs:
        for level in _levels(r1, r2):
            ts = _types(level)
            gates += s * len(ts)
            edges += 2 * s * len(ts)
            P = _provisioned(level, r1, r2, s, n, lean)
            gates += P
            if level == (1, 0):
                edges += P * n
            elif level == (0, 1):
                edges += P * m
            else:
                edges += P * s * len(ts)
    return gates, edges


def build_universal(
    n: int,
    m: int,
    r1: int,
    r2: int,
    s: int,
    field: FieldDescriptor | None = None,
    lean: bool = False,
) -> tuple:
    """The universal circuit for size-s circuits with n outputs of bi-degree
    (r1, r2) on blocks (x:n, y:m).  All edge weights start unassigned (0)."""
    if s < n + m:
        raise BadParameters(f"need s >= n+m, got s={s}, n+m={n + m}")
    _check_params(n, m, s, [(r1, r2)])
    field = field or GF(2**31 - 1)
    phi, copies = _assemble(n, m, s, [(r1, r2)], field, lean)
    layout = UniversalLayout(
        n=n, m=m, s=s, lean=lean, alldeg=False, r=None,
        copies=copies, copy_order=[(r1, r2)],
    )
    return phi, layout


def build_universal_alldeg(
    n: int,
    m: int,
    r: int,
    s: int,
    field: FieldDescriptor | None = None,
    lean: bool = False,
) -> tuple:
    """Disjoint union (sharing leaves) of one universal copy per degree pair
    (r1, r2) <= (r, r), excluding (0,0); n designated outputs per copy."""
    if r < 1:
        raise BadParameters("need r >= 1")
    # each copy needs s >= n+m; the stricter bound r(n+m) would rule out the
    # standard resultant parameters s = n^2+n+m, so it is not enforced
    if s < n + m:
        raise BadParameters(f"need s >= n+m, got s={s} < {n + m}")
    pairs = [
        (r1, r2)
        for r1 in range(r + 1)
        for r2 in range(r + 1)
        if (r1, r2) != (0, 0) and not (m == 0 and r2 > 0)
    ]
    pairs.sort(key=lambda p: (p[0] + p[1], p))
    _check_params(n, m, s, pairs)
    field = field or GF(2**31 - 1)
    phi, copies = _assemble(n, m, s, pairs, field, lean)
    layout = UniversalLayout(
        n=n, m=m, s=s, lean=lean, alldeg=True, r=r,
        copies=copies, copy_order=pairs,
    )
    return phi, layout


class ControlTable:
    """Bijection between the edges of a universal circuit and the control
    variables of its controlled version.

    The t-index of edge ``e`` is ``e`` itself.  The controlled circuit is
    materialized lazily: for reduction-scale instances membership queries go
    through the semantics identity (controlled circuit at ``t := w`` equals
    the base circuit with weights ``w``), which needs only the base circuit.
    """

    def __init__(self, phi: Circuit, layout: UniversalLayout | None = None):
        self.phi = phi
        self.layout = layout
        self._controlled = None

    @property
    def n_controls(self) -> int:
        return self.phi.nedges

    def t_index(self, edge_id: int) -> int:
        return int(edge_id)

    def controlled(self) -> Circuit:
        if self._controlled is None:
            self._controlled = _materialize_controlled(self.phi)
        return self._controlled


def _materialize_controlled(phi: Circuit) -> Circuit:
    nv = phi.nvars
    E = phi.nedges
    G = phi.ngates
    base = nv + E  # original leaves then one t-leaf per edge
    starts = phi.starts()
    old = np.arange(nv, G, dtype=np.int64)
    pos_old = base + (old - nv) + starts[nv + 1 : G + 1]

    def new_of(g_arr):
        g_arr = np.asarray(g_arr, dtype=np.int64)
        out = g_arr.copy()
        mask = g_arr >= nv
        out[mask] = base + (g_arr[mask] - nv) + starts[g_arr[mask] + 1]
        return out

    e_idx = np.arange(E, dtype=np.int64)
    p_ids = base + (phi.edge_dst - nv) + e_idx
    total = base + (G - nv) + E
    kinds = np.empty(total, dtype=np.int8)
    kinds[: base] = INPUT
    kinds[p_ids] = PROD
    kinds[pos_old] = phi.kinds[nv:G]

    src = np.concatenate([new_of(phi.edge_src), nv + e_idx, p_ids])
    dst = np.concatenate([p_ids, p_ids, base + (phi.edge_dst - nv) + starts[phi.edge_dst + 1]])
    order = np.argsort(dst, kind="stable")
    src, dst = src[order], dst[order]
    if phi.field.is_prime_field:
        weights = np.ones(3 * E, dtype=np.int64)
    else:
        weights = np.empty(3 * E, dtype=object)
        weights[:] = Fraction(1)
    blocks = BlockSpec.of(*(list(phi.blocks.blocks) + [("t", E)]))
    outputs = [int(v) for v in new_of(np.array(phi.outputs, dtype=np.int64))]
    return Circuit(blocks, phi.field, kinds, src, dst, weights, outputs, check=False)


def controlize(phi: Circuit, layout: UniversalLayout | None = None, materialize: bool = True):
    """Break every edge through a control-variable product gate.

    Returns (controlled circuit or None, ControlTable).  The controlled
    circuit has one t-leaf and one weight-1 product gate per original edge;
    evaluating it at ``t := w`` equals evaluating the base circuit with edge
    weights ``w``.
    """
    table = ControlTable(phi, layout)
    if materialize:
        return table.controlled(), table
    return None, table


def t_degree_of_level(level) -> int:
    """Closed form 4(l1+l2) - 3 from the per-edge control construction."""
    return 4 * (level[0] + level[1]) - 3


@dataclass
class UcrParams:
    """Concrete parameters of the universal circuit resultant member R_{n,m}."""

    n: int
    m: int
    r: int
    s: int
    n_controls: int  # N: control variables = edges of the base circuit
    n_outputs: int  # M: designated outputs
    ambient: tuple  # (n-1, N-1): bi-projective ambient dimensions
    gates: int
    edges: int
    output_count_estimate: int  # the n**4 closed-form estimate; n_outputs is exact


def ucr_params(n: int, m: int, field=None, lean: bool = False, max_gates: int = 50_000_000):
    """Instantiate R_{n,m}: r=n, s=n^2+n+m; returns the parameter record,
    the base circuit, its layout and the control table."""
    if n < 1 or m < 0:
        raise BadParameters("need n >= 1, m >= 0")
    r, s = n, n * n + n + m
    pairs = [
        (r1, r2)
        for r1 in range(r + 1)
        for r2 in range(r + 1)
        if (r1, r2) != (0, 0) and not (m == 0 and r2 > 0)
    ]
    pairs.sort(key=lambda p: (p[0] + p[1], p))
    gates, edges = plan_universal(n, m, s, pairs, lean)
    if gates + 2 * edges > max_gates:
        raise ResourceLimit(
            f"controlled circuit would have {gates + 2 * edges} gates (> {max_gates})"
        )
    phi, layout = build_universal_alldeg(n, m, r, s, field=field, lean=lean)
    table = ControlTable(phi, layout)
    params = UcrParams(
        n=n,
        m=m,
        r=r,
        s=s,
        n_controls=phi.nedges,
        n_outputs=len(phi.outputs),
        ambient=(n - 1, phi.nedges - 1),
        gates=phi.ngates,
        edges=phi.nedges,
        output_count_estimate=n**4,
    )
    return params, phi, layout, table


def audit_layout(phi: Circuit, layout: UniversalLayout) -> list:
    """Structural invariants of the construction; returns a list of
    problem strings (empty = all good)."""
    problems = []
    starts = phi.starts()
    indeg = np.diff(starts)
    outdeg = np.zeros(phi.ngates, dtype=np.int64)
    np.add.at(outdeg, phi.edge_src, 1)
    n, m = layout.n, layout.m
    x_ids = set(range(n))
    y_ids = set(range(n, n + m))
    for pair in layout.copy_order:
        copy = layout.copies[pair]
        for (level, t), pids in copy.prod_ids.items():
            if not (indeg[pids] == 2).all():
                problems.append(f"{pair}/{level}/{t}: product fan-in != 2")
            sa, sb = copy.alloc[(level, t)]
            a, b = t
            for slot, (expected_level, sums) in enumerate([(a, sa), (b, sb)]):
                if not np.isin(sums, copy.sum_ids[expected_level]).all():
                    problems.append(f"{pair}/{level}/{t}: slot {slot} not in level {expected_level}")
        for level in copy.levels:
            sids = copy.sum_ids[level]
            if len(sids) == 0:
                continue
            if (outdeg[sids] > 1).any():
                problems.append(f"{pair}/{level}: sum fan-out above 1")
            expected = None
            if level == (1, 0):
                expected = x_ids
            elif level == (0, 1):
                expected = y_ids
            else:
                expected = set()
                for t in _types(level):
                    expected.update(int(g) for g in copy.prod_ids[(level, t)])
            for g in sids:
                lo, hi = starts[g], starts[g + 1]
                if set(int(v) for v in phi.edge_src[lo:hi]) != expected:
                    problems.append(f"{pair}/{level}: sum {g} not wired to full level")
                    break
        # allocation non-exhaustion, recomputed from the alloc tables
        consumed = {level: 0 for level in copy.levels}
        for (level, t), (sa, sb) in copy.alloc.items():
            a, b = t
            consumed[a] += len(sa)
            consumed[b] += len(sb)
        for level in copy.levels:
            if consumed[level] > copy.provisioned[level]:
                problems.append(
                    f"{pair}/{level}: allocation exhausted "
                    f"({consumed[level]} > {copy.provisioned[level]})"
                )
            if consumed[level] != copy.demanded[level]:
                problems.append(
                    f"{pair}/{level}: demand mismatch "
                    f"({consumed[level]} != {copy.demanded[level]})"
                )
        # allocation injectivity: every consumed sum gate is used once
        all_alloc = np.concatenate(
            [np.concatenate([sa, sb]) for (sa, sb) in copy.alloc.values()]
        ) if copy.alloc else np.empty(0, np.int64)
        if len(all_alloc) != len(np.unique(all_alloc)):
            problems.append(f"{pair}: a sum gate feeds two product gates")
    return problems


def serialize_layout(layout: UniversalLayout, phi: Circuit) -> str:
    """Sidecar text: gate id -> (role, level, type); edge -> t-index note."""
    lines = [
        f"# universal layout n={layout.n} m={layout.m} s={layout.s} "
        f"alldeg={int(layout.alldeg)} lean={int(layout.lean)}",
        "# t-index of edge e is e (edges in serialization order)",
    ]
    for g in range(phi.nvars):
        b, i = phi.blocks.var_of_gate(g)
        lines.append(f"gate {g} input {phi.blocks.names[b]}{i}")
    for pair in layout.copy_order:
        copy = layout.copies[pair]
        for level in copy.levels:
            for t in _types(level):
                key = (level, t)
                if key in copy.prod_ids:
                    for g in copy.prod_ids[key]:
                        lines.append(
                            f"gate {int(g)} prod copy={pair[0]},{pair[1]} "
                            f"level={level[0]},{level[1]} type={t[0][0]},{t[0][1]}|{t[1][0]},{t[1][1]}"
                        )
            for g in copy.sum_ids[level]:
                lines.append(
                    f"gate {int(g)} sum copy={pair[0]},{pair[1]} level={level[0]},{level[1]}"
                )
    return "\n".join(lines) + "\n"
