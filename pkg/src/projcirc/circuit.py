"""Circuit intermediate representation.

A circuit is a labeled weighted directed acyclic multigraph of input, sum
and product gates over named variable blocks.  Constants never appear as
leaves; they live only on edge weights.  The representation is
struct-of-arrays so that the universal-circuit constructions, which reach
tens of millions of edges, stay affordable:

- gates ``0 .. nvars-1`` are the input gates, in block-major order;
- gate order is topological (every edge satisfies ``src < dst``);
- edges are sorted by target gate, so a gate's in-edges are a contiguous
  slice of the edge arrays, and the edge id is the slice position.

The size of a circuit is its number of edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    CycleDetected,
    DanglingOutput,
    FieldMismatch,
    FieldTooSmall,
    InhomogeneousSum,
    LengthMismatch,
    MixedFields,
    ShapeMismatch,
)
from .field import FieldDescriptor, FieldElem

INPUT, SUM, PROD = 0, 1, 2

MultiDegree = tuple[int, ...]


@dataclass(frozen=True)
class BlockSpec:
    """Ordered variable blocks, e.g. (x:3, y:2)."""

    blocks: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [b[0] for b in self.blocks]
        if len(set(names)) != len(names):
            raise ShapeMismatch(f"duplicate block names in {names}")
        if not self.blocks:
            raise ShapeMismatch("at least one block required")
        if any(n < 0 for _, n in self.blocks):
            raise ShapeMismatch("negative block size")

    @staticmethod
    def of(*pairs) -> "BlockSpec":
        return BlockSpec(tuple((str(n), int(c)) for n, c in pairs))

    @property
    def nblocks(self) -> int:
        return len(self.blocks)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(b[0] for b in self.blocks)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(b[1] for b in self.blocks)

    @property
    def total_vars(self) -> int:
        return sum(self.counts)

    def index(self, block) -> int:
        if isinstance(block, int):
            if not 0 <= block < self.nblocks:
                raise ShapeMismatch(f"no block {block}")
            return block
        try:
            return self.names.index(block)
        except ValueError:
            raise ShapeMismatch(f"no block named {block!r}") from None

    def offset(self, block) -> int:
        b = self.index(block)
        return sum(self.counts[:b])

    def var_gate(self, block, i: int) -> int:
        """Gate id of variable ``i`` of ``block``."""
        b = self.index(block)
        if not 0 <= i < self.counts[b]:
            raise ShapeMismatch(f"variable {i} out of range for block {self.blocks[b]}")
        return self.offset(b) + i

    def var_of_gate(self, g: int) -> tuple[int, int]:
        """Inverse of var_gate: (block index, variable index)."""
        off = 0
        for b, (_, cnt) in enumerate(self.blocks):
            if g < off + cnt:
                return b, g - off
            off += cnt
        raise ShapeMismatch(f"gate {g} is not an input gate")

    def same_counts(self, other: "BlockSpec") -> bool:
        return self.counts == other.counts


def _as_weight_array(field: FieldDescriptor, weights) -> np.ndarray:
    if field.is_prime_field:
        arr = np.asarray(weights, dtype=np.int64)
        return arr % field.modulus
    arr = np.empty(len(weights), dtype=object)
    for i, w in enumerate(weights):
        arr[i] = Fraction(w)
    return arr


class Circuit:
    """Immutable circuit.  Use CircuitBuilder or the SLP parser to make one."""

    __slots__ = (
        "blocks",
        "field",
        "kinds",
        "edge_src",
        "edge_dst",
        "weights",
        "outputs",
        "_starts",
    )

    def __init__(self, blocks, field, kinds, edge_src, edge_dst, weights, outputs, *, check=True):
        self.blocks = blocks
        self.field = field
        self.kinds = np.asarray(kinds, dtype=np.int8)
        self.edge_src = np.asarray(edge_src, dtype=np.int64)
        self.edge_dst = np.asarray(edge_dst, dtype=np.int64)
        if isinstance(weights, np.ndarray) and weights.dtype in (np.int64, object):
            self.weights = weights
        else:
            self.weights = _as_weight_array(field, weights)
        self.outputs = tuple(int(g) for g in outputs)
        self._starts = None
        if check:
            self._check()

    def _check(self):
        nv = self.blocks.total_vars
        n = self.ngates
        if n < nv or not (self.kinds[:nv] == INPUT).all():
            raise ShapeMismatch("input gates must come first, one per variable")
        if n > nv and (self.kinds[nv:] == INPUT).any():
            raise ShapeMismatch("stray input gate after the leaf section")
        if self.nedges:
            if (np.diff(self.edge_dst) < 0).any():
                raise ShapeMismatch("edges must be sorted by target")
            if (self.edge_src >= self.edge_dst).any():
                raise CycleDetected("edge source must precede its target")
            if (self.edge_src < 0).any() or (self.edge_dst >= n).any():
                raise ShapeMismatch("edge endpoint out of range")
            if (self.kinds[self.edge_dst] == INPUT).any():
                raise ShapeMismatch("input gates cannot have in-edges")
        if len(self.weights) != self.nedges:
            raise ShapeMismatch("one weight per edge required")
        # every sum/product gate needs at least one in-edge
        indeg = np.zeros(n, dtype=np.int64)
        if self.nedges:
            np.add.at(indeg, self.edge_dst, 1)
        if n > nv and (indeg[nv:] == 0).any():
            bad = int(np.nonzero(indeg[nv:] == 0)[0][0]) + nv
            raise ShapeMismatch(f"gate {bad} has no in-edges")
        for g in self.outputs:
            if not 0 <= g < n:
                raise DanglingOutput(f"output gate {g} does not exist")

    @property
    def ngates(self) -> int:
        return len(self.kinds)

    @property
    def nedges(self) -> int:
        return len(self.edge_src)

    @property
    def size(self) -> int:
        """Circuit size: the number of edges."""
        return self.nedges

    @property
    def nvars(self) -> int:
        return self.blocks.total_vars

    def starts(self) -> np.ndarray:
        """starts[g]..starts[g+1] is the in-edge slice of gate g."""
        if self._starts is None:
            self._starts = np.searchsorted(self.edge_dst, np.arange(self.ngates + 1))
        return self._starts

    def in_edges(self, g: int) -> tuple[np.ndarray, np.ndarray]:
        s = self.starts()
        return self.edge_src[s[g] : s[g + 1]], self.weights[s[g] : s[g + 1]]

    def weight_elem(self, edge_id: int) -> FieldElem:
        return self.field.elem(self.weights[edge_id])

    def with_weights(self, weights) -> "Circuit":
        """Same wiring, new edge weights."""
        return Circuit(
            self.blocks,
            self.field,
            self.kinds,
            self.edge_src,
            self.edge_dst,
            _as_weight_array(self.field, weights)
            if not (isinstance(weights, np.ndarray) and weights.dtype == np.int64 and self.field.is_prime_field)
            else weights % self.field.modulus,
            self.outputs,
            check=False,
        )

    def with_field(self, field: FieldDescriptor) -> "Circuit":
        """Reinterpret the wiring over another field (weights canonicalized)."""
        return Circuit(
            self.blocks,
            field,
            self.kinds,
            self.edge_src,
            self.edge_dst,
            _cast_weights(self.weights, self.field, field),
            self.outputs,
            check=False,
        )


def _cast_weights(weights, old: FieldDescriptor, new: FieldDescriptor):
    if new.is_prime_field:
        p = new.modulus
        if old.is_prime_field:
            return np.asarray(weights, dtype=np.int64) % p
        out = np.empty(len(weights), dtype=np.int64)
        for i, w in enumerate(weights):
            f = Fraction(w)
            if f.denominator % p == 0:
                raise FieldTooSmall(f"denominator of {f} vanishes mod {p}")
            out[i] = f.numerator * pow(f.denominator % p, p - 2, p) % p
        return out
    if old.is_prime_field:
        out = np.empty(len(weights), dtype=object)
        for i, w in enumerate(weights):
            out[i] = Fraction(int(w))
        return out
    return weights


def isomorphic(c1: Circuit, c2: Circuit) -> bool:
    """Gate-by-gate equality (same canonical numbering, blocks, weights)."""
    return (
        c1.blocks == c2.blocks
        and c1.field == c2.field
        and c1.outputs == c2.outputs
        and c1.ngates == c2.ngates
        and c1.nedges == c2.nedges
        and bool((c1.kinds == c2.kinds).all())
        and bool((c1.edge_src == c2.edge_src).all())
        and bool((c1.edge_dst == c2.edge_dst).all())
        and bool((np.asarray(c1.weights) == np.asarray(c2.weights)).all())
    )


class CircuitBuilder:
    """Single-owner builder; gates are appended in topological order."""

    def __init__(self, blocks: BlockSpec, field: FieldDescriptor):
        self.blocks = blocks
        self.field = field
        self.kinds = [INPUT] * blocks.total_vars
        self.edge_src = []
        self.edge_dst = []
        self.weights = []
        self.outputs = None

    def var(self, block, i: int) -> int:
        return self.blocks.var_gate(block, i)

    def _gate(self, kind, terms) -> int:
        g = len(self.kinds)
        if not terms:
            raise ShapeMismatch("sum/product gates need at least one input")
        self.kinds.append(kind)
        for w, src in terms:
            src = int(src)
            if not 0 <= src < g:
                raise CycleDetected(f"gate {src} not defined before gate {g}")
            self.edge_src.append(src)
            self.edge_dst.append(g)
            self.weights.append(self.field.elem(w).value)
        return g

    def add_sum(self, terms) -> int:
        """terms: iterable of (weight, gate id); parallel edges allowed."""
        return self._gate(SUM, list(terms))

    def add_prod(self, terms) -> int:
        return self._gate(PROD, list(terms))

    def set_outputs(self, gates):
        self.outputs = [int(g) for g in gates]

    def build(self) -> Circuit:
        if self.outputs is None:
            raise DanglingOutput("no outputs declared")
        return Circuit(
            self.blocks,
            self.field,
            np.array(self.kinds, dtype=np.int8),
            np.array(self.edge_src, dtype=np.int64),
            np.array(self.edge_dst, dtype=np.int64),
            _as_weight_array(self.field, self.weights),
            self.outputs,
        )


@dataclass
class ValidationReport:
    """Bottom-up multi-degree table, size metric and homogeneity verdict."""

    size: int
    degrees: np.ndarray  # (ngates, nblocks)
    output_degrees: list
    homogeneous: bool
    offenders: list  # (gate id, list of conflicting degrees) for bad sums

    def degree(self, g: int) -> MultiDegree:
        return tuple(int(d) for d in self.degrees[g])


def validate(c: Circuit) -> ValidationReport:
    """Compute per-gate multi-degrees bottom-up and check sum homogeneity.

    Input gates get the unit vector of their block, products add child
    degrees, sums take the common child degree.  A sum gate whose children
    disagree is recorded as an offender; its degree defaults to the first
    child's (the circuit is then marked inhomogeneous).
    """
    nb = c.blocks.nblocks
    deg = np.zeros((c.ngates, nb), dtype=np.int64)
    off = 0
    for b, (_, cnt) in enumerate(c.blocks.blocks):
        deg[off : off + cnt, b] = 1
        off += cnt
    starts = c.starts()
    offenders = []
    kinds = c.kinds
    src = c.edge_src
    for g in range(c.nvars, c.ngates):
        rows = deg[src[starts[g] : starts[g + 1]]]
        if kinds[g] == PROD:
            deg[g] = rows.sum(axis=0)
        else:
            first = rows[0]
            if len(rows) > 1 and (rows != first).any():
                uniq = sorted({tuple(int(x) for x in r) for r in rows})
                offenders.append((g, uniq))
            deg[g] = first
    return ValidationReport(
        size=c.nedges,
        degrees=deg,
        output_degrees=[tuple(int(d) for d in deg[g]) for g in c.outputs],
        homogeneous=not offenders,
        offenders=offenders,
    )


def validate_strict(c: Circuit) -> ValidationReport:
    """validate, but raise InhomogeneousSum on the first bad sum gate."""
    report = validate(c)
    if not report.homogeneous:
        g, degs = report.offenders[0]
        raise InhomogeneousSum(g, degs)
    return report


def _coerce_assignment(c: Circuit, assignment) -> list:
    if len(assignment) != c.blocks.nblocks:
        raise LengthMismatch(f"expected {c.blocks.nblocks} blocks, got {len(assignment)}")
    rows = []
    for b, vec in enumerate(assignment):
        vec = list(vec)
        if len(vec) != c.blocks.counts[b]:
            raise LengthMismatch(
                f"block {c.blocks.names[b]} expects {c.blocks.counts[b]} values, got {len(vec)}"
            )
        for v in vec:
            if isinstance(v, FieldElem) and v.field != c.field:
                raise FieldMismatch(f"{v} not in circuit field {c.field}")
        rows.extend(c.field.elem(v).value for v in vec)
    return rows


def evaluate(c: Circuit, assignment) -> list:
    """Evaluate at one point; assignment is one value vector per block."""
    flat = _coerce_assignment(c, assignment)
    if c.field.is_prime_field:
        cols = np.array(flat, dtype=np.int64).reshape(-1, 1)
        out = evaluate_many(c, cols)
        return [c.field.elem(int(v)) for v in out[:, 0]]
    vals = [None] * c.ngates
    vals[: c.nvars] = [Fraction(v) for v in flat]
    starts = c.starts()
    for g in range(c.nvars, c.ngates):
        lo, hi = starts[g], starts[g + 1]
        terms = [c.weights[i] * vals[c.edge_src[i]] for i in range(lo, hi)]
        if c.kinds[g] == SUM:
            acc = sum(terms)
        else:
            acc = Fraction(1)
            for t in terms:
                acc *= t
        vals[g] = acc
    return [c.field.elem(vals[g]) for g in c.outputs]


def evaluate_many(c: Circuit, points: np.ndarray, all_gates: bool = False) -> np.ndarray:
    """Batched evaluation over a prime field.

    ``points`` has shape (total_vars, npoints) with int entries; returns the
    (noutputs, npoints) matrix of output values (all gate values when
    ``all_gates``).  One topological pass, vectorized over points.
    """
    if not c.field.is_prime_field:
        raise FieldMismatch("batched evaluation requires a prime field")
    p = c.field.modulus
    points = np.asarray(points, dtype=np.int64) % p
    if points.shape[0] != c.nvars:
        raise LengthMismatch(f"expected {c.nvars} coordinate rows, got {points.shape[0]}")
    npts = points.shape[1]
    vals = np.empty((c.ngates, npts), dtype=np.int64)
    vals[: c.nvars] = points
    starts = c.starts()
    kinds = c.kinds
    src = c.edge_src
    w = c.weights
    for g in range(c.nvars, c.ngates):
        lo, hi = starts[g], starts[g + 1]
        rows = vals[src[lo:hi]]
        terms = rows * w[lo:hi, None] % p
        if kinds[g] == SUM:
            vals[g] = terms.sum(axis=0) % p
        else:
            acc = terms[0]
            for i in range(1, len(terms)):
                acc = acc * terms[i] % p
            vals[g] = acc
    if all_gates:
        return vals
    return vals[list(c.outputs)] if c.outputs else np.empty((0, npts), dtype=np.int64)


def prune_dead(c: Circuit) -> Circuit:
    """Drop gates with no path to an output.  Input gates are kept, so the
    block spec (and hence the ambient space) is unchanged."""
    alive = np.zeros(c.ngates, dtype=bool)
    alive[list(c.outputs)] = True
    alive[: c.nvars] = True
    starts = c.starts()
    src = c.edge_src
    for g in range(c.ngates - 1, c.nvars - 1, -1):
        if alive[g]:
            alive[src[starts[g] : starts[g + 1]]] = True
    if alive.all():
        return c
    remap = np.cumsum(alive) - 1
    keep_edge = alive[c.edge_dst]
    return Circuit(
        c.blocks,
        c.field,
        c.kinds[alive],
        remap[c.edge_src[keep_edge]],
        remap[c.edge_dst[keep_edge]],
        c.weights[keep_edge],
        [int(remap[g]) for g in c.outputs],
        check=False,
    )


def compose_plinear(c: Circuit, m) -> Circuit:
    """Substitute the linear forms (or constants) of a projective-linear map
    into the inputs of ``c``.

    ``m`` maps the source block spec to the target block spec, which must
    match ``c``'s block dimensions.  The result computes, over the source
    blocks, the pullback equations: output ``f`` becomes ``f ∘ m``.  One sum
    gate is added per substituted variable; constants fold into weights.
    """
    from .plinear import PLinearMap  # deferred to avoid import cycle at module load

    if not isinstance(m, PLinearMap):
        raise ShapeMismatch("expected a PLinearMap")
    if m.target.counts != c.blocks.counts:
        raise ShapeMismatch(
            f"map target {m.target.counts} does not match circuit blocks {c.blocks.counts}"
        )
    if m.field != c.field:
        raise FieldMismatch("map and circuit must share a field")

    b = CircuitBuilder(m.source, c.field)
    zero = c.field.zero()
    # image of every original gate: ("g", new id) or ("c", constant FieldElem)
    image = [None] * c.ngates
    for tb, comp in enumerate(m.components):
        off = c.blocks.offset(tb)
        if comp.is_constant:
            for i, v in enumerate(comp.point):
                image[off + i] = ("c", v)
        else:
            sb = comp.source_block
            for i in range(c.blocks.counts[tb]):
                row = [(comp.matrix[i][k], b.var(sb, k)) for k in range(m.source.counts[sb])]
                row = [(w, g) for w, g in row if not w.is_zero()]
                if row:
                    image[off + i] = ("g", b.add_sum(row))
                else:
                    image[off + i] = ("c", zero)
    starts = c.starts()
    for g in range(c.nvars, c.ngates):
        lo, hi = starts[g], starts[g + 1]
        terms = []
        const_part = None
        if c.kinds[g] == SUM:
            acc_const = zero
            for i in range(lo, hi):
                w = c.field.elem(c.weights[i])
                kind, val = image[c.edge_src[i]]
                if kind == "c":
                    acc_const = acc_const + w * val
                else:
                    terms.append((w, val))
            if terms:
                if not acc_const.is_zero():
                    # cannot happen for homogeneous inputs: a constant sibling
                    # forces constant siblings everywhere
                    raise ShapeMismatch(f"sum gate {g} mixes constants with variables")
                image[g] = ("g", b.add_sum(terms))
            else:
                image[g] = ("c", acc_const)
        else:
            scalar = c.field.one()
            for i in range(lo, hi):
                w = c.field.elem(c.weights[i])
                kind, val = image[c.edge_src[i]]
                if kind == "c":
                    scalar = scalar * (w * val)
                else:
                    terms.append((w, val))
            if scalar.is_zero() or not terms:
                image[g] = ("c", scalar if not terms else zero)
            else:
                terms[0] = (terms[0][0] * scalar, terms[0][1])
                image[g] = ("g", b.add_prod(terms))
    outs = []
    for g in c.outputs:
        kind, val = image[g]
        if kind == "g":
            outs.append(val)
        elif val.is_zero():
            # keep the zero output, realized as a weight-0 unary sum
            outs.append(b.add_sum([(zero, 0)]))
        else:
            from .errors import ConstantOutput

            raise ConstantOutput(f"output {g} becomes the nonzero constant {val}")
    b.set_outputs(outs)
    return b.build()
