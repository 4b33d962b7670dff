"""Combinatorics of higher Segal conditions: the simplex and cyclic categories,
claws and their Čech cubes, covers, cyclic polytopes and finite simplicial sets.
"""

from pathlib import Path

from .claws import (
    Claw,
    CompatibilityReport,
    ConsistencyError,
    Cube,
    NoCubeError,
    OracleResult,
    Pasting,
    cech_cube,
    classify_claw,
    colimit_oracle,
    decompose_cube,
    decompose_tree,
    is_strongly_bicartesian,
    paste,
    primitive_factorize,
    render_claw,
    rotate_claw,
)
from .covers import (
    Precover,
    SubsetComplex,
    enumerate_covers,
    intersection_cube,
    is_refinement,
    reduce,
    refinement_graph,
    restrict,
    subset_complex,
)
from .cyclic import (
    CyclicMap,
    Rotation,
    automorphisms,
    compose_cyclic,
    enumerate_cyclic_maps,
    factorize,
    project_from_delta,
)
from .descent import (
    DescentReport,
    SetCube,
    check_descent,
    check_excision,
    check_segal,
    is_cartesian_set_cube,
    membrane,
)
from .polytopes import (
    CyclicPolytope,
    Triangulation,
    hull_facets,
    interpolation_chain,
    segal_cover,
    triviality_claw,
)
from .simplex import (
    CompositionError,
    Ordinal,
    PreconditionError,
    SimplexMap,
    classify_map,
    compose,
    enumerate_maps,
    joyal_minus,
    joyal_plus,
)
from .simplicial import (
    FiniteSimplicialSet,
    TruncationError,
    fixture_corpus,
    nerve_monoid,
    nerve_poset,
    path_object,
)

FIXTURES = Path(__file__).parent / "fixtures"

__version__ = "0.1.0"
