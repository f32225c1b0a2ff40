"""Concrete circuit families and their membership oracles.

Generators for the point family, the universal degree-d polynomial, the
resultant incidence family, Segre minor equations and the z-substitution
transform of control-variable circuits, plus membership in the universal
circuit resultant and the diagonal pair re-indexing.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .circuit import (
    INPUT,
    PROD,
    SUM,
    BlockSpec,
    Circuit,
    CircuitBuilder,
    evaluate_many,
    validate_strict,
)
from .errors import BadParameters, NotTGuarded, ShapeMismatch
from .field import GF, QQ, FieldDescriptor
from .projspace import ProjPoint, exists_witness
from .universal import ControlTable


@dataclass
class FamilyInstance:
    family: str
    params: dict
    circuit: Circuit
    ambient: tuple  # projective dimension per block
    notes: str = ""

    def metadata(self) -> str:
        """One JSONL record describing the instance."""
        return json.dumps(
            {
                "family": self.family,
                "params": self.params,
                "ambient": list(self.ambient),
                "blocks": [[n, c] for n, c in self.circuit.blocks.blocks],
            },
            sort_keys=True,
        )


def gen_point_family(n: int, field: FieldDescriptor | None = None) -> FamilyInstance:
    """Equations x_1, ..., x_n cutting out the single point [1:0:...:0] of P^n;
    size exactly n."""
    if n < 1:
        raise BadParameters("need n >= 1")
    field = field or QQ()
    b = CircuitBuilder(BlockSpec.of(("x", n + 1)), field)
    outs = [b.add_sum([(1, b.var("x", i))]) for i in range(1, n + 1)]
    b.set_outputs(outs)
    c = b.build()
    assert c.size == n
    return FamilyInstance("point", {"n": n}, c, (n,))


def _monomials(nvars: int, d: int) -> list:
    """Exponent vectors of total degree d, graded-lex (lex descending)."""
    out = []
    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(tuple(prefix) + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)
    rec([], d, nvars)
    return out


def gen_universal_poly(n: int, d: int, field: FieldDescriptor | None = None) -> FamilyInstance:
    """The universal degree-d polynomial sum_M a_M * M over blocks
    (x: n+1, a: C(n+d, d)), bidegree (d, 1)."""
    if n < 1 or d < 1:
        raise BadParameters("need n >= 1 and d >= 1")
    field = field or QQ()
    monomials = _monomials(n + 1, d)
    b = CircuitBuilder(BlockSpec.of(("x", n + 1), ("a", len(monomials))), field)
    terms = []
    for k, exps in enumerate(monomials):
        ops = [(1, b.var("a", k))]
        for i, e in enumerate(exps):
            ops.extend([(1, b.var("x", i))] * e)
        terms.append((1, b.add_prod(ops)))
    b.set_outputs([b.add_sum(terms)])
    c = b.build()
    return FamilyInstance(
        "unipoly", {"n": n, "d": d}, c, (n, len(monomials) - 1),
        notes="monomials in graded-lex order; coefficient a_k pairs with the k-th monomial",
    )


def gen_resultant_incidence(d: int, n: int, field: FieldDescriptor | None = None) -> FamilyInstance:
    """Incidence variety of n+1 universal degree-d forms in n+1 variables:
    blocks (coeff: C(n+d,d)*(n+1), x: n+1), one output per form.  Its
    projection to the coeff block is the resultant locus."""
    if n < 1 or d < 1:
        raise BadParameters("need n >= 1 and d >= 1")
    field = field or QQ()
    monomials = _monomials(n + 1, d)
    C = len(monomials)
    b = CircuitBuilder(BlockSpec.of(("coeff", C * (n + 1)), ("x", n + 1)), field)
    outs = []
    for i in range(n + 1):
        terms = []
        for k, exps in enumerate(monomials):
            ops = [(1, b.var("coeff", i * C + k))]
            for j, e in enumerate(exps):
                ops.extend([(1, b.var("x", j))] * e)
            terms.append((1, b.add_prod(ops)))
        outs.append(b.add_sum(terms))
    b.set_outputs(outs)
    c = b.build()
    return FamilyInstance(
        "resultant", {"d": d, "n": n}, c, (C * (n + 1) - 1, n),
        notes="coeff slice i (row-major) holds the i-th form's coefficients in graded-lex order",
    )


def ucr_membership(x_point, tau, phi_prime, q: int, budget: int = 2**24) -> bool:
    """Membership of (x, tau) in the universal circuit resultant: true iff
    some y makes all outputs vanish at the fixed x and t := tau.

    ``phi_prime`` is either the materialized controlled circuit or a
    ControlTable; with a table the search runs on the base circuit with
    weights tau (same outputs by the control semantics identity), which
    avoids materializing reduction-scale controlled circuits.
    """
    coords = list(x_point.components[0]) if isinstance(x_point, ProjPoint) else list(x_point)
    tau_vals = tau.values if hasattr(tau, "values") else np.asarray(tau)
    if isinstance(phi_prime, ControlTable):
        base = phi_prime.phi
        if len(coords) != base.blocks.counts[0]:
            raise ShapeMismatch(
                f"x has {len(coords)} coordinates, expected {base.blocks.counts[0]}"
            )
        cq = base if (base.field.is_prime_field and base.field.modulus == q) else base.with_field(GF(q))
        programmed = cq.with_weights(np.asarray(tau_vals, dtype=np.int64) % q
                                     if cq.field.is_prime_field else tau_vals)
        m = base.blocks.counts[1]
        if m == 0:
            out = evaluate_many(programmed, np.array(coords, dtype=np.int64).reshape(-1, 1))
            return bool((out == 0).all())
        return exists_witness(programmed, {0: coords}, 1, q, budget)
    c = phi_prime
    if c.blocks.nblocks != 3:
        raise ShapeMismatch("expected a controlled circuit with blocks (x, y, t)")
    if len(tau_vals) != c.blocks.counts[2]:
        raise ShapeMismatch("tau length does not match the t block")
    m = c.blocks.counts[1]
    tau_list = [int(v) for v in tau_vals]
    if m == 0:
        cq = c if (c.field.is_prime_field and c.field.modulus == q) else c.with_field(GF(q))
        pt = np.array(coords + [0] * 0 + tau_list, dtype=np.int64).reshape(-1, 1)
        out = evaluate_many(cq, pt)
        return bool((out == 0).all())
    return exists_witness(c, {0: coords, 2: tau_list}, 1, q, budget)


def segre_minors(a: int, b: int, field: FieldDescriptor | None = None) -> Circuit:
    """All 2x2 minors z_ij*z_kl - z_il*z_kj (i<k, j<l) over block
    z:((a+1)(b+1)); their zero-set is the Segre image of P^a x P^b."""
    if a < 1 or b < 1:
        raise BadParameters("need a, b >= 1")
    field = field or QQ()
    cols = b + 1
    bld = CircuitBuilder(BlockSpec.of(("z", (a + 1) * (b + 1))), field)
    z = lambda i, j: bld.var("z", i * cols + j)
    outs = []
    for i, k in itertools.combinations(range(a + 1), 2):
        for j, l in itertools.combinations(range(b + 1), 2):
            p1 = bld.add_prod([(1, z(i, j)), (1, z(k, l))])
            p2 = bld.add_prod([(1, z(i, l)), (1, z(k, j))])
            outs.append(bld.add_sum([(1, p1), (-1, p2)]))
    bld.set_outputs(outs)
    return bld.build()


def _check_t_guarded(c: Circuit):
    """Every x-leaf out-edge must target a fan-in-2 product whose other
    in-edge comes from a t-leaf."""
    if c.blocks.nblocks != 3:
        raise NotTGuarded("t-guarded circuits have blocks (x, y, t)")
    n, m, N = c.blocks.counts
    starts = c.starts()
    t_lo = n + m
    for e in range(c.nedges):
        u = int(c.edge_src[e])
        if u >= n:
            continue
        g = int(c.edge_dst[e])
        if c.kinds[g] != PROD or starts[g + 1] - starts[g] != 2:
            raise NotTGuarded(f"x-leaf {u} feeds gate {g}, not a fan-in-2 product")
        srcs = [int(c.edge_src[i]) for i in range(starts[g], starts[g + 1])]
        other = srcs[0] if srcs[1] == u else srcs[1]
        if not (t_lo <= other < t_lo + N):
            raise NotTGuarded(f"product {g} pairs x-leaf {u} with non-t gate {other}")


def segre_transform(phi_prime: Circuit, table: ControlTable | None = None) -> Circuit:
    """Eliminate the x-variables of a t-guarded circuit via z_ie = x_i*t_e.

    Returns a circuit over blocks (z: n*N, y: m) whose outputs are all 2x2
    Segre minors in z followed by, for each original output f and each copy
    index j, the copy of f with guarded pairs x_i*t_e replaced by z_ie and
    residual t_e occurrences replaced by z_je.
    """
    c = phi_prime
    _check_t_guarded(c)
    n, m, N = c.blocks.counts
    if n < 1 or N < 1:
        raise NotTGuarded("need at least one x-variable and one t-variable")
    field = c.field
    one = field.one()
    bld = CircuitBuilder(BlockSpec.of(("z", n * N), ("y", m)), field)
    zvar = lambda i, e: bld.var("z", i * N + e)

    # Segre minors of P^{n-1} x P^{N-1} in the z block
    minor_outs = []
    for i, k in itertools.combinations(range(n), 2):
        for e, f in itertools.combinations(range(N), 2):
            p1 = bld.add_prod([(one, zvar(i, e)), (one, zvar(k, f))])
            p2 = bld.add_prod([(one, zvar(i, f)), (one, zvar(k, e))])
            minor_outs.append(bld.add_sum([(one, p1), (-one, p2)]))

    starts = c.starts()
    t_lo = n + m
    copy_outs: dict = {}
    for j in range(n):
        # image[g] = (new gate id, scale) with the scale folded into consumers
        image: list = [None] * c.ngates
        for g in range(n, n + m):
            image[g] = (bld.var("y", g - n), one)
        for g in range(t_lo, t_lo + N):
            image[g] = (zvar(j, g - t_lo), one)
        for g in range(c.nvars, c.ngates):
            lo, hi = starts[g], starts[g + 1]
            srcs = [int(c.edge_src[i]) for i in range(lo, hi)]
            ws = [field.elem(c.weights[i]) for i in range(lo, hi)]
            if c.kinds[g] == PROD and hi - lo == 2 and any(t_lo <= u < t_lo + N for u in srcs):
                ti = 0 if t_lo <= srcs[0] < t_lo + N else 1
                t_e = srcs[ti] - t_lo
                u, wu, wt = srcs[1 - ti], ws[1 - ti], ws[ti]
                if u < n:
                    # guarded pair: x_u * t_e collapses to the leaf z_ue
                    image[g] = (zvar(u, t_e), wu * wt)
                else:
                    iu, su = image[u]
                    image[g] = (bld.add_prod([(wu * su, iu), (wt, zvar(j, t_e))]), one)
                continue
            terms = []
            for u, w in zip(srcs, ws):
                iu, su = image[u]
                terms.append((w * su, iu))
            add = bld.add_sum if c.kinds[g] == SUM else bld.add_prod
            image[g] = (add(terms), one)
        outs = []
        for g in c.outputs:
            ig, sg = image[g]
            outs.append(ig if sg.value == one.value else bld.add_sum([(sg, ig)]))
        copy_outs[j] = outs

    ordered = minor_outs + [copy_outs[j][i] for i in range(len(c.outputs)) for j in range(n)]
    bld.set_outputs(ordered)
    return bld.build()


def pair_index(n: int, m: int) -> int:
    """Diagonal enumeration of pairs (n >= 1, m >= 0) into a single index."""
    if n < 1 or m < 0:
        raise BadParameters("need n >= 1, m >= 0")
    u = n - 1 + m
    return u * (u + 1) // 2 + m


def unpair(k: int) -> tuple:
    if k < 0:
        raise BadParameters("need k >= 0")
    u = int((math.isqrt(8 * k + 1) - 1) // 2)
    m = k - u * (u + 1) // 2
    return (u - m + 1, m)
