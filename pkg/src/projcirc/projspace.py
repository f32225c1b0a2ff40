"""Brute-force finite projective geometry over GF(q).

Canonical point enumeration for products of projective spaces, zero-sets
of circuit outputs, projections, the Segre map, projective-linear map
application and pullbacks.  Everything here is an oracle: small, exact,
exhaustive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, evaluate_many
from .errors import BudgetExceeded, ShapeMismatch
from .field import GF, FieldDescriptor
from .plinear import PLinearMap, apply_component

DEFAULT_POINT_BUDGET = 2**24


@dataclass(frozen=True)
class ProjPoint:
    """Point of a product of projective spaces, componentwise canonical:
    the first nonzero coordinate of every component is 1."""

    q: int
    components: tuple  # tuple of coordinate tuples (ints in [0, q))

    def __post_init__(self):
        for comp in self.components:
            if not any(comp):
                raise ShapeMismatch("projective point with a zero component")

    @property
    def dims(self) -> tuple:
        return tuple(len(c) - 1 for c in self.components)

    def flat(self) -> list:
        return [v for comp in self.components for v in comp]

    def __str__(self):
        return "x".join("[" + ":".join(str(v) for v in comp) + "]" for comp in self.components)

    def __lt__(self, other):
        return self.components < other.components


def canonicalize(q: int, components) -> ProjPoint:
    """Scale each component so its first nonzero coordinate is 1."""
    canon = []
    for comp in components:
        comp = [int(v) % q for v in comp]
        lead = next((v for v in comp if v), None)
        if lead is None:
            raise ShapeMismatch("projective point with a zero component")
        inv = pow(lead, q - 2, q)
        canon.append(tuple(v * inv % q for v in comp))
    return ProjPoint(q, tuple(canon))


def parse_point(text: str, q: int) -> ProjPoint:
    parts = text.strip().split("x")
    comps = []
    for part in parts:
        part = part.strip()
        if not (part.startswith("[") and part.endswith("]")):
            raise ShapeMismatch(f"malformed point component {part!r}")
        comps.append([int(v) for v in part[1:-1].split(":")])
    return canonicalize(q, comps)


@dataclass(frozen=True)
class PointSet:
    """Sorted, deduplicated set of canonical points of one ambient space."""

    dims: tuple  # projective dimension per component
    q: int
    points: tuple  # sorted tuple of ProjPoint

    def __post_init__(self):
        for p in self.points:
            if p.dims != self.dims or p.q != self.q:
                raise ShapeMismatch(f"point {p} not in ambient {self.dims} over GF({self.q})")

    def __len__(self):
        return len(self.points)

    def __contains__(self, p: ProjPoint):
        return p in set(self.points)

    def members(self) -> set:
        return set(self.points)


def make_point_set(dims, q, points) -> PointSet:
    return PointSet(tuple(dims), q, tuple(sorted(set(points))))


def n_points(dim: int, q: int) -> int:
    return (q ** (dim + 1) - 1) // (q - 1)


def _component_points(dim: int, q: int) -> list:
    """All canonical coordinate tuples of P^dim(F_q), sorted."""
    out = []
    n = dim + 1
    for lead in range(n):
        for rest in itertools.product(range(q), repeat=n - lead - 1):
            out.append((0,) * lead + (1,) + rest)
    return sorted(out)


def enumerate_points(dims, q: int, budget: int = DEFAULT_POINT_BUDGET) -> PointSet:
    """All canonical points of P^{a_1} x ... x P^{a_k} over GF(q)."""
    GF(q)  # validates primality
    dims = tuple(int(a) for a in dims)
    if any(a < 0 for a in dims):
        raise ShapeMismatch(f"negative projective dimension in {dims}")
    total = 1
    for a in dims:
        total *= n_points(a, q)
    if total > budget:
        raise BudgetExceeded(f"{total} points exceed budget {budget}")
    per = [_component_points(a, q) for a in dims]
    pts = [ProjPoint(q, combo) for combo in itertools.product(*per)]
    return PointSet(dims, q, tuple(sorted(pts)))


def ambient_of_circuit(c: Circuit) -> tuple:
    counts = c.blocks.counts
    if any(cnt < 1 for cnt in counts):
        raise ShapeMismatch("every block needs at least one variable for a projective ambient")
    return tuple(cnt - 1 for cnt in counts)


def zero_set(c: Circuit, q: int, budget: int = DEFAULT_POINT_BUDGET) -> PointSet:
    """All canonical ambient points where every output of c vanishes."""
    dims = ambient_of_circuit(c)
    ambient = enumerate_points(dims, q, budget)
    cq = c if (c.field.is_prime_field and c.field.modulus == q) else c.with_field(GF(q))
    if not cq.outputs:
        return ambient
    pts = np.array([p.flat() for p in ambient.points], dtype=np.int64).T
    out = evaluate_many(cq, pts)
    mask = (out == 0).all(axis=0)
    return PointSet(dims, q, tuple(p for p, keep in zip(ambient.points, mask) if keep))


def project(S: PointSet, keep) -> PointSet:
    """Set-theoretic image under forgetting all components not in ``keep``."""
    keep = [int(k) for k in keep]
    for k in keep:
        if not 0 <= k < len(S.dims):
            raise ShapeMismatch(f"component {k} out of range for ambient {S.dims}")
    dims = tuple(S.dims[k] for k in keep)
    pts = {ProjPoint(S.q, tuple(p.components[k] for k in keep)) for p in S.points}
    return PointSet(dims, S.q, tuple(sorted(pts)))


def segre(p: ProjPoint) -> ProjPoint:
    """(x, t) -> [x_i * t_j] in row-major (i, j) order, re-canonicalized."""
    if len(p.components) != 2:
        raise ShapeMismatch("segre needs a point with exactly two components")
    x, t = p.components
    coords = [xi * tj for xi in x for tj in t]
    return canonicalize(p.q, [coords])


def apply_plinear(m: PLinearMap, p: ProjPoint):
    """Image point, or None when some component lands on the zero vector."""
    if tuple(a + 1 for a in p.dims) != m.source.counts:
        raise ShapeMismatch(f"point ambient {p.dims} does not match map source {m.source.counts}")
    field = m.field
    comps = []
    for comp in m.components:
        if comp.is_constant:
            vals = apply_component(comp, None, field)
        else:
            coords = [field.elem(v) for v in p.components[comp.source_block]]
            vals = apply_component(comp, coords, field)
        if all(v.is_zero() for v in vals):
            return None
        comps.append([v.value for v in vals])
    return canonicalize(p.q, comps)


def pullback(m: PLinearMap, target_member, source_dims, q: int,
             budget: int = DEFAULT_POINT_BUDGET) -> PointSet:
    """All source points whose image is defined and satisfies the predicate."""
    S = enumerate_points(source_dims, q, budget)
    hits = []
    for p in S.points:
        image = apply_plinear(m, p)
        if image is not None and target_member(image):
            hits.append(p)
    return PointSet(tuple(source_dims), q, tuple(hits))


def exists_witness(c: Circuit, fixed: dict, search_block, q: int,
                   budget: int = DEFAULT_POINT_BUDGET) -> bool:
    """True iff some canonical point of the search block's projective space
    zeroes every output, with all other blocks fixed as given.

    ``fixed`` maps block name or index to a coordinate vector; it must cover
    every block except ``search_block``.
    """
    sb = c.blocks.index(search_block)
    cnt = c.blocks.counts[sb]
    if cnt < 1:
        raise ShapeMismatch("search block has no variables")
    npts = n_points(cnt - 1, q)
    if npts > budget:
        raise BudgetExceeded(f"{npts} candidate witnesses exceed budget {budget}")
    fixed_idx = {c.blocks.index(k): list(v) for k, v in fixed.items()}
    for b in range(c.blocks.nblocks):
        if b == sb:
            continue
        if b not in fixed_idx:
            raise ShapeMismatch(f"block {c.blocks.names[b]} neither fixed nor searched")
        if len(fixed_idx[b]) != c.blocks.counts[b]:
            raise ShapeMismatch(f"fixed vector for block {c.blocks.names[b]} has wrong length")
    cq = c if (c.field.is_prime_field and c.field.modulus == q) else c.with_field(GF(q))
    candidates = _component_points(cnt - 1, q)
    cols = []
    for y in candidates:
        col = []
        for b in range(c.blocks.nblocks):
            col.extend(y if b == sb else fixed_idx[b])
        cols.append(col)
    pts = np.array(cols, dtype=np.int64).T
    out = evaluate_many(cq, pts)
    if out.shape[0] == 0:
        return True
    return bool((out == 0).all(axis=0).any())


def serialize_point_set(S: PointSet) -> str:
    header = f"ambient {','.join(str(a) for a in S.dims)} field {S.q}"
    return "\n".join([header] + [str(p) for p in S.points]) + "\n"


def parse_point_set(text: str) -> PointSet:
    lines = [l.strip() for l in text.splitlines() if l.strip()]
    if not lines or not lines[0].startswith("ambient "):
        raise ShapeMismatch("point set file must start with an 'ambient' header")
    toks = lines[0].split()
    if len(toks) != 4 or toks[2] != "field":
        raise ShapeMismatch(f"malformed header {lines[0]!r}")
    dims = tuple(int(a) for a in toks[1].split(","))
    q = int(toks[3])
    pts = [parse_point(l, q) for l in lines[1:]]
    for p in pts:
        if p.dims != dims:
            raise ShapeMismatch(f"point {p} does not match ambient {dims}")
    return make_point_set(dims, q, pts)
