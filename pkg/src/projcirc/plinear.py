"""Projective-linear maps between products of projective spaces.

Each target component is either a linear map of exactly one source
component or a constant point.  A map with a nontrivial kernel is partial:
points sent to the zero vector of some component are outside its domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import BlockSpec
from .errors import ShapeMismatch
from .field import FieldDescriptor, FieldElem


@dataclass(frozen=True)
class MapComponent:
    """One target component: matrix rows over a single source block, or a point.

    Constant points are tuples of FieldElem, except that reduction-scale
    points over a prime field may be a raw int64 numpy array of residues
    (tens of millions of coordinates; element objects would not fit).
    """

    source_block: int | None
    matrix: tuple | None  # tuple of rows, each a tuple of FieldElem
    point: object | None  # tuple of FieldElem, or np.ndarray of residues

    @property
    def is_constant(self) -> bool:
        return self.point is not None


@dataclass(frozen=True)
class PLinearMap:
    source: BlockSpec
    target: BlockSpec
    field: FieldDescriptor
    components: tuple  # one MapComponent per target block

    def __post_init__(self):
        if len(self.components) != self.target.nblocks:
            raise ShapeMismatch("one component per target block required")
        for tb, comp in enumerate(self.components):
            rows = self.target.counts[tb]
            if comp.is_constant:
                if len(comp.point) != rows:
                    raise ShapeMismatch(f"constant point of component {tb} has wrong length")
                if isinstance(comp.point, np.ndarray):
                    if not (comp.point % self.field.modulus).any():
                        raise ShapeMismatch(f"component {tb} is the zero point")
                elif all(v.is_zero() for v in comp.point):
                    raise ShapeMismatch(f"component {tb} is the zero point")
            else:
                sb = comp.source_block
                if not 0 <= sb < self.source.nblocks:
                    raise ShapeMismatch(f"component {tb} reads missing source block {sb}")
                cols = self.source.counts[sb]
                if len(comp.matrix) != rows or any(len(r) != cols for r in comp.matrix):
                    raise ShapeMismatch(f"matrix of component {tb} is not {rows}x{cols}")
                if all(v.is_zero() for r in comp.matrix for v in r):
                    raise ShapeMismatch(f"matrix of component {tb} is identically zero")


def linear_component(field: FieldDescriptor, source_block: int, matrix) -> MapComponent:
    rows = tuple(tuple(field.elem(v) for v in row) for row in matrix)
    return MapComponent(source_block=source_block, matrix=rows, point=None)


def constant_component(field: FieldDescriptor, point) -> MapComponent:
    if isinstance(point, np.ndarray) and field.is_prime_field:
        return MapComponent(source_block=None, matrix=None, point=point % field.modulus)
    return MapComponent(source_block=None, matrix=None, point=tuple(field.elem(v) for v in point))


def identity_map(blocks: BlockSpec, field: FieldDescriptor) -> PLinearMap:
    comps = []
    for b, (_, cnt) in enumerate(blocks.blocks):
        eye = [[1 if i == j else 0 for j in range(cnt)] for i in range(cnt)]
        comps.append(linear_component(field, b, eye))
    return PLinearMap(blocks, blocks, field, tuple(comps))


def padding_map(field: FieldDescriptor, n_small: int, n_big: int, block_name="x") -> PLinearMap:
    """[x_1:..:x_n] -> [x_1:..:x_n:0:..:0] into a larger projective space."""
    if n_big < n_small:
        raise ShapeMismatch("padding target must be at least as large")
    mat = [[1 if j == i else 0 for j in range(n_small)] for i in range(n_big)]
    return PLinearMap(
        BlockSpec.of((block_name, n_small)),
        BlockSpec.of((block_name, n_big)),
        field,
        (linear_component(field, 0, mat),),
    )


def apply_component(comp: MapComponent, coords, field: FieldDescriptor | None = None) -> list:
    """Matrix-vector product (or the constant) as a list of FieldElem."""
    if comp.is_constant:
        if isinstance(comp.point, np.ndarray):
            if field is None:
                raise ShapeMismatch("array-backed constant component needs the field")
            return [field.elem(int(v)) for v in comp.point]
        return list(comp.point)
    out = []
    for row in comp.matrix:
        acc = None
        for a, x in zip(row, coords):
            term = a * x
            acc = term if acc is None else acc + term
        out.append(acc)
    return out
