"""Multi-homogeneous arithmetic circuits over projective spaces.

Circuit IR with block-structured inputs, a bi-homogeneous normal form,
universal circuits with control variables, normal-form embeddings and
zero-set reductions, projective-linear maps, brute-force projective
geometry oracles over GF(q), Segre machinery and randomized equivalence
checking, plus a command-line front end.
"""

from .circuit import (
    BlockSpec,
    Circuit,
    CircuitBuilder,
    evaluate,
    evaluate_many,
    isomorphic,
    prune_dead,
    validate,
    validate_strict,
)
from .embed import (
    ControlAssignment,
    ReductionResult,
    assign_levels,
    build_reduction,
    embed,
    parse_tau,
    serialize_tau,
)
from .equivalence import dense_expand, pit_equal
from .errors import ToolkitError
from .families import (
    FamilyInstance,
    gen_point_family,
    gen_resultant_incidence,
    gen_universal_poly,
    pair_index,
    segre_minors,
    segre_transform,
    ucr_membership,
    unpair,
)
from .field import GF, QQ, FieldDescriptor, FieldElem
from .fuzz import fuzz_circuit, fuzz_embeddable
from .normal_form import check_normal_form, normalize
from .plinear import PLinearMap, constant_component, identity_map, linear_component, padding_map
from .projspace import (
    PointSet,
    ProjPoint,
    apply_plinear,
    enumerate_points,
    exists_witness,
    project,
    pullback,
    segre,
    zero_set,
)
from .slp import export_dot, parse_slp, serialize_slp
from .universal import (
    ControlTable,
    audit_layout,
    build_universal,
    build_universal_alldeg,
    controlize,
    plan_universal,
    t_degree_of_level,
    ucr_params,
)

__version__ = "0.1.0"
