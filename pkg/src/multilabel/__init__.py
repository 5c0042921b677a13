"""Exact solvers for multilabeled simplex and sphere labelings.

Simplicial domains with rational coordinates, supported and signed vertex
labelings, covering certificates on simplex products, and the fair
division, interval splitting and graph coloring applications built on
them.  Everything numeric is a Fraction; nothing depends on floating
point tolerances.
"""

from .complexes import (
    StructuralError,
    Triangulation,
    Vertex,
    barycentric_subdivision,
    cross_polytope_sphere,
    edgewise_sphere,
    kuhn_triangulation,
    orientation_sign,
    staircase_product,
)
from .fairdiv import (
    CakeSource,
    Division,
    FairOutcome,
    LinearWageUtility,
    NeedAnswer,
    OracleSource,
    RentSource,
    WageProblem,
    cake_divide,
    preferred_piece,
    rent_divide,
    worker_wages,
)
from .fan import (
    Z2Complex,
    balanced_fan_pairs,
    fan_search,
    gale_fan,
    multifan_dual,
    multilabeled_fan,
    sphere_complex,
)
from .halving import SplitOutcome, consensus_halving
from .homgraph import Graph, colorful_bipartite, hom_complex
from .labelings import (
    AlternationReport,
    FanLabeling,
    SpernerLabeling,
    max_alternating_face,
    random_fan,
    random_sperner,
    validate_compatible,
    validate_fan,
    validate_sperner,
)
from .measures import Valuation, block_valuation, random_valuation, uniform_valuation
from .multisperner import (
    CoveringCertificate,
    SignedCount,
    TargetPoint,
    bapat_signed_count,
    find_covering_simplex,
    hall_matching,
    oriented_sperner_count,
    solve_distinct_labels,
    solve_popular_labels,
)

__version__ = "0.1.0"
