"""Embedding normal-form circuits into the universal circuit.

``assign_levels`` annotates a normal-form circuit with the (l1, l2) level
of every gate and the bidegree split type of every product.  ``embed``
walks the circuit top-down from its outputs, claiming universal-circuit
gates injectively per (level, type), and returns the edge-weight vector
tau that makes the universal circuit compute the same outputs.
``build_reduction`` packages the whole pipeline: given a bi-homogeneous
witness circuit it produces the padding size q, the control assignment
tau, and the projective-linear map x -> ([x, 0...0], [tau]).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .circuit import (
    INPUT,
    PROD,
    SUM,
    BlockSpec,
    Circuit,
    evaluate,
    validate_strict,
)
from .errors import (
    BadParameters,
    CapacityExceeded,
    DegreeNotRepresentable,
    NotNormalForm,
    ShapeMismatch,
)
from .field import GF, QQ, FieldDescriptor
from .normal_form import check_normal_form, normalize
from .plinear import PLinearMap, constant_component, linear_component
from .universal import ControlTable, UniversalLayout, build_universal_alldeg


@dataclass
class LevelAnnotation:
    """Role, level and (for products) split type of every gate."""

    roles: list  # "input" | "sum" | "product"
    levels: list  # multidegree tuple per gate
    types: dict  # product gate id -> ((a1,a2), (b1,b2)) sorted pair


def assign_levels(c: Circuit) -> LevelAnnotation:
    report = validate_strict(c)
    nf = check_normal_form(c)
    if not nf.ok:
        raise NotNormalForm(f"conditions failing: {nf.failing()}")
    role_name = {INPUT: "input", SUM: "sum", PROD: "product"}
    roles = [role_name[int(k)] for k in c.kinds]
    levels = [report.degree(g) for g in range(c.ngates)]
    types = {}
    starts = c.starts()
    for g in range(c.nvars, c.ngates):
        if c.kinds[g] == PROD:
            lo, hi = starts[g], starts[g + 1]
            assert hi - lo == 2  # guaranteed by check_normal_form
            parts = sorted(levels[int(c.edge_src[e])] for e in range(lo, hi))
            types[g] = tuple(parts)
    return LevelAnnotation(roles=roles, levels=levels, types=types)


@dataclass
class ControlAssignment:
    """Edge-weight vector for a universal circuit; index = edge id = t-index."""

    values: np.ndarray  # int64 for prime fields, object (Fraction) otherwise
    field: FieldDescriptor
    layout_params: dict = dc_field(default_factory=dict)
    assigned_outputs: list = dc_field(default_factory=list)  # phi output index per c output

    @property
    def n_controls(self) -> int:
        return len(self.values)


def _pad_degree(d, nblocks: int) -> tuple:
    if len(d) > nblocks:
        if any(d[nblocks:]):
            raise ShapeMismatch(f"degree {d} uses more blocks than the target")
        return tuple(d[:nblocks])
    return tuple(d) + (0,) * (nblocks - len(d))


def _layout_params(layout: UniversalLayout) -> dict:
    params = {
        "n": layout.n,
        "m": layout.m,
        "s": layout.s,
        "alldeg": int(layout.alldeg),
        "lean": int(layout.lean),
    }
    if layout.alldeg:
        params["r"] = layout.r
    else:
        ((r1, r2),) = layout.copy_order
        params["r1"], params["r2"] = r1, r2
    return params


def embed(c: Circuit, phi: Circuit, layout: UniversalLayout, verify: bool = True) -> ControlAssignment:
    """Program the universal circuit to compute ``c``.

    Outputs are matched to designated outputs by degree then by order of
    appearance; gate images are claimed injectively per (copy, level,
    type); every unused edge keeps weight 0.
    """
    ann = assign_levels(c)
    n, m = layout.n, layout.m
    if c.blocks.nblocks > phi.blocks.nblocks:
        raise ShapeMismatch("circuit has more blocks than the universal circuit")
    counts = c.blocks.counts + (0,) * (phi.blocks.nblocks - c.blocks.nblocks)
    if counts[0] > n or (len(counts) > 1 and counts[1] > m):
        raise ShapeMismatch(
            f"circuit blocks {c.blocks.counts} exceed universal dims ({n}, {m})"
        )
    field = phi.field
    if c.field != field:
        raise ShapeMismatch("circuit and universal circuit must share a field")
    nb = phi.blocks.nblocks
    starts_c = c.starts()
    starts_phi = phi.starts()
    s_cap = layout.s

    # tau accumulates exactly; parallel edges in c add up
    tau_acc: dict = {}

    def bump(edge_id: int, w):
        cur = tau_acc.get(edge_id)
        tau_acc[edge_id] = w if cur is None else cur + w

    level_prods_cache: dict = {}

    def level_prods(pair, level):
        key = (pair, level)
        arr = level_prods_cache.get(key)
        if arr is None:
            copy = layout.copies[pair]
            parts = [
                copy.prod_ids[(level, t)]
                for (lv, t) in sorted(copy.prod_ids)
                if lv == level
            ]
            arr = np.concatenate(parts) if parts else np.empty(0, np.int64)
            level_prods_cache[key] = arr
        return arr

    # output matching: degree, then order of appearance
    out_ctr: dict = {}
    assigned = []
    stack = []
    for g in c.outputs:
        d = _pad_degree(ann.levels[g], nb)
        if d not in layout.copies:
            raise DegreeNotRepresentable(
                f"output degree {d} not among designated degrees {sorted(layout.copies)}"
            )
        k = out_ctr.get(d, 0)
        if k >= n:
            raise CapacityExceeded(f"more than {n} outputs of degree {d}")
        out_ctr[d] = k + 1
        assigned.append(layout.copy_order.index(d) * n + k)
        stack.append((g, layout.copies[d].outputs[k], d))

    prod_img: dict = {}  # (c product gate, copy pair) -> phi product gate
    prod_ctr: dict = {}  # (copy pair, level, type) -> next free slot

    while stack:
        u, g, pair = stack.pop()
        copy = layout.copies[pair]
        level = _pad_degree(ann.levels[u], nb)
        for e in range(starts_c[u], starts_c[u + 1]):
            child = int(c.edge_src[e])
            w = c.field.elem(c.weights[e])
            if c.kinds[child] == INPUT:
                _, i = c.blocks.var_of_gate(child)
                # unit-level sums are wired to their block's inputs in order,
                # so the in-edge position of variable i is i itself
                bump(int(starts_phi[g]) + i, w)
            else:
                key = (child, pair)
                P = prod_img.get(key)
                if P is None:
                    t = tuple(_pad_degree(part, nb) for part in ann.types[child])
                    plevel = _pad_degree(ann.levels[child], nb)
                    ckey = (pair, plevel, t)
                    slot = prod_ctr.get(ckey, 0)
                    if (plevel, t) not in copy.prod_ids:
                        raise DegreeNotRepresentable(
                            f"no product gates of level {plevel} type {t} in copy {pair}"
                        )
                    if slot >= s_cap:
                        raise CapacityExceeded(
                            f"more than {s_cap} products of level {plevel} type {t}"
                        )
                    prod_ctr[ckey] = slot + 1
                    P = int(copy.prod_ids[(plevel, t)][slot])
                    prod_img[key] = P
                    sa = int(copy.alloc[(plevel, t)][0][slot])
                    sb = int(copy.alloc[(plevel, t)][1][slot])
                    (ea, eb) = (int(starts_phi[P]), int(starts_phi[P]) + 1)
                    lo_c, hi_c = starts_c[child], starts_c[child + 1]
                    ops = [
                        (int(c.edge_src[i]), c.field.elem(c.weights[i]))
                        for i in range(lo_c, hi_c)
                    ]
                    d0 = _pad_degree(ann.levels[ops[0][0]], nb)
                    if d0 != t[0]:
                        ops = [ops[1], ops[0]]
                    bump(ea, ops[0][1])
                    bump(eb, ops[1][1])
                    stack.append((ops[0][0], sa, pair))
                    stack.append((ops[1][0], sb, pair))
                pos = int(np.searchsorted(level_prods(pair, level), P))
                bump(int(starts_phi[g]) + pos, w)

    if field.is_prime_field:
        tau = np.zeros(phi.nedges, dtype=np.int64)
        for e, w in tau_acc.items():
            tau[e] = w.value
    else:
        tau = np.empty(phi.nedges, dtype=object)
        tau[:] = Fraction(0)
        for e, w in tau_acc.items():
            tau[e] = w.value
    assignment = ControlAssignment(
        values=tau,
        field=field,
        layout_params=_layout_params(layout),
        assigned_outputs=assigned,
    )
    if verify:
        _verify_round(c, phi, assignment)
    return assignment


def _verify_round(c: Circuit, phi: Circuit, assignment: ControlAssignment):
    """One random evaluation-agreement round (cheap internal sanity check)."""
    rng = np.random.default_rng(0)
    if phi.field.is_prime_field:
        p = phi.field.modulus
        shared = [rng.integers(0, p, size=cnt) for cnt in c.blocks.counts]
    else:
        shared = [rng.integers(-9, 10, size=cnt) for cnt in c.blocks.counts]
    padded = []
    for b, cnt in enumerate(phi.blocks.counts):
        have = list(shared[b]) if b < len(shared) else []
        padded.append([int(v) for v in have] + [0] * (cnt - len(have)))
    want = evaluate(c, [[int(v) for v in blk] for blk in shared])
    got = evaluate(phi.with_weights(assignment.values), padded)
    for i, idx in enumerate(assignment.assigned_outputs):
        if want[i].value != got[idx].value:
            raise AssertionError(
                f"embedding self-check failed at output {i} (phi output {idx})"
            )
    rest = set(range(len(phi.outputs))) - set(assignment.assigned_outputs)
    for idx in rest:
        if not got[idx].is_zero():
            raise AssertionError(f"unassigned designated output {idx} is nonzero")


def serialize_tau(assignment: ControlAssignment) -> str:
    params = " ".join(f"{k}={v}" for k, v in sorted(assignment.layout_params.items()))
    fieldtxt = str(assignment.field).replace(" ", ":")
    lines = [f"tau {params} N={assignment.n_controls} field={fieldtxt}"]
    for v in assignment.values:
        lines.append(str(assignment.field.elem(v)))
    return "\n".join(lines) + "\n"


def parse_tau(text: str) -> ControlAssignment:
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    if not lines or not lines[0].startswith("tau "):
        raise ShapeMismatch("tau file must start with a 'tau' header line")
    params = {}
    field = None
    for tok in lines[0].split()[1:]:
        k, _, v = tok.partition("=")
        if k == "field":
            if v == "q":
                field = QQ()
            elif v.startswith("gf:"):
                field = GF(int(v[3:]))
            else:
                raise ShapeMismatch(f"bad field spec {v!r} in tau header")
        else:
            params[k] = int(v)
    if field is None:
        raise ShapeMismatch("tau header missing field=")
    n = params.pop("N")
    vals = lines[1:]
    if len(vals) != n:
        raise ShapeMismatch(f"tau file declares N={n} but has {len(vals)} values")
    if field.is_prime_field:
        values = np.array([field.elem(v).value for v in vals], dtype=np.int64)
    else:
        values = np.empty(n, dtype=object)
        for i, v in enumerate(vals):
            values[i] = field.elem(v).value
    return ControlAssignment(values=values, field=field, layout_params=params)


@dataclass
class ReductionResult:
    """Output of the membership-preserving reduction pipeline."""

    q: int
    tau: ControlAssignment
    rho: PLinearMap
    phi: Circuit
    layout: UniversalLayout
    table: ControlTable
    normalized: Circuit

    @property
    def n_controls(self) -> int:
        return self.phi.nedges


def build_reduction(C: Circuit, n1: int, n2: int, lean: bool = True) -> ReductionResult:
    """Reduce membership in the y-projection of Z(C) to membership in the
    universal circuit resultant.

    Computes d = max degree component over outputs, s = size(C),
    q = max(n1+n2+1, d, s), builds the all-degree universal circuit with
    parameters (q, n2, q, q^2+q+n2), embeds normalize(C), and returns tau
    together with rho: x -> ([x, 0..0], [tau]).
    """
    if C.blocks.counts[:2] != (n1, n2) or C.blocks.nblocks != 2:
        raise BadParameters(
            f"expected blocks (x:{n1}, y:{n2}), got {C.blocks.blocks}"
        )
    report = validate_strict(C)
    d = max((max(deg) for deg in report.output_degrees), default=0)
    s = C.size
    q = max(n1 + n2 + 1, d, s)
    phi, layout = build_universal_alldeg(
        q, n2, q, q * q + q + n2, field=C.field, lean=lean
    )
    Cn = normalize(C)
    tau = embed(Cn, phi, layout)
    table = ControlTable(phi, layout)
    N = phi.nedges
    pad_matrix = [[1 if j == i else 0 for j in range(n1)] for i in range(q)]
    if C.field.is_prime_field:
        tau_point = tau.values  # raw residue array, kept out of element objects
        if not tau_point.any():
            raise BadParameters("tau is identically zero; the constant component would be ill-defined")
    else:
        tau_point = list(tau.values)
        if all(C.field.elem(v).is_zero() for v in tau_point):
            raise BadParameters("tau is identically zero; the constant component would be ill-defined")
    rho = PLinearMap(
        source=BlockSpec.of(("x", n1)),
        target=BlockSpec.of(("x", q), ("t", N)),
        field=C.field,
        components=(
            linear_component(C.field, 0, pad_matrix),
            constant_component(C.field, tau_point),
        ),
    )
    return ReductionResult(
        q=q, tau=tau, rho=rho, phi=phi, layout=layout, table=table, normalized=Cn
    )
