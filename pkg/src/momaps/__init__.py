"""Combinatorics of multi-orientable tensor graphs.

Multi-orientable (MO) graphs are 4-regular maps whose half-edges carry
an alternating in/out orientation around each vertex.  This package
builds and validates them, traces their three strand families (left,
right and straight faces), computes the degree and jacket genera,
reduces graphs to melon-free cores and chain-vertex schemes,
enumerates rooted graphs exhaustively, and evaluates the exact
counting series together with their asymptotic regime.
"""

from .errors import (
    InconsistentSubstitution,
    InvalidColoring,
    MomapsError,
    NonHalfIntegerDegree,
    NotALoop,
    NotAMelon,
    NotPlanar,
    ParseError,
    UnstabilizedCatalog,
    ValidationError,
)
from .graph import (
    MOGraph,
    cycle_graph,
    degree,
    dump,
    dumps,
    find_loops,
    infinity_ccw,
    infinity_cw,
    is_connected,
    knot_profile,
    load,
    loads,
    quadruple_edge_graph,
    remove_loop,
    require_valid,
    trace_faces,
    validate,
    vertex_components,
)
from .reduction import (
    CANONICAL_SUBSTITUTION,
    Chain,
    ChainVertexType,
    Dipole,
    Melon,
    SchemeGraph,
    degree_with_chain_vertices,
    extract_scheme,
    find_dipoles,
    find_maximal_chains,
    find_melons,
    insert_melon,
    is_melon_free,
    is_melonic,
    melon_free_core,
    remove_element,
    remove_melon,
    removal_analysis,
    scheme_degree,
    scheme_from_json_dict,
    scheme_is_planar,
    scheme_to_json_dict,
    substitute_all,
    substitute_chain_vertex,
)
from .canonical import canonical_rooted, canonical_unrooted
from .colored import (
    ColoredGraph,
    colored_degree,
    colored_faces,
    colored_melon,
    embed_colored,
    require_valid_colored,
    validate_colored,
)
from .enumerate import (
    CountTable,
    SchemeCatalog,
    build_scheme_catalog,
    count_by_degree,
    gen_dominant_schemes,
    gen_rooted,
)
from .series import (
    SchemeParams,
    VSeries,
    asymptotic_check,
    chain_gf,
    degree_gf,
    melonic_T,
    rooted_gf,
    rooted_gf_by_substitution,
    scheme_gf,
)

__version__ = "1.0.0"
