"""Workbench for periodic billiard paths in triangles near isosceles triangles."""

from .words import (
    Word,
    LatticePath,
    as_word,
    is_stable_parity,
    is_stable_hexpath,
    hexpath,
    squarepath,
    word_from_squarepath,
    hexpath_from_squarepath,
)
from .families import (
    gen_A,
    gen_B,
    gen_C,
    gen_W,
    gen_Y,
    gen_unstable,
    family_word,
    w_length,
)
from .unfolding import (
    ParameterPoint,
    Unfolding,
    as_point,
    unfold,
    edge_angle,
    spine,
    Dart,
    DartDecomposition,
    dart_decomposition,
    delta,
    dart_lemma_applies,
    dart_wedge,
    is_controlled,
    membership_geometric,
    separation,
)
from .fourier import (
    TrigConstants,
    FourierTableau,
    DefiningFunction,
    UnsupportedStartError,
    build_PQ,
    translation_tableau,
    evaluate,
    F_value,
    F_normalized,
    leaders_B,
    elimination_rows_B,
    elimination_value,
    H11_on_line,
    final_derivatives,
    pseudo_parallel_check,
)
from .tiles import (
    TileRaster,
    scan,
    separation_grid,
    coverage_Y,
    boundary_polyline,
    quadrant_table,
    quadrant_epsilon,
    w_tile_census,
)
from .rescaling import (
    GrowthContext,
    GrowthFamily,
    QrtResult,
    PivotStrip,
    LimitQuadrilateral,
    detect_growth,
    modular_transform,
    spine_growth,
    pair_growth,
    hinge_growth,
    qrt,
    rescaled_value,
    convergence_report,
    finite_difference_slopes,
    limit_function,
    pivot_strip,
    omega,
    qh_points,
    partner_functions,
    tile_limit_comparison,
    W_PAIRS,
)

__version__ = "0.1.0"

__all__ = [
    "Word", "LatticePath", "as_word",
    "is_stable_parity", "is_stable_hexpath",
    "hexpath", "squarepath", "word_from_squarepath", "hexpath_from_squarepath",
    "gen_A", "gen_B", "gen_C", "gen_W", "gen_Y", "gen_unstable",
    "family_word", "w_length",
    "ParameterPoint", "Unfolding", "as_point", "unfold",
    "edge_angle", "spine",
    "Dart", "DartDecomposition", "dart_decomposition", "delta",
    "dart_lemma_applies", "dart_wedge", "is_controlled",
    "membership_geometric", "separation",
    "TrigConstants", "FourierTableau", "DefiningFunction",
    "UnsupportedStartError", "build_PQ", "translation_tableau", "evaluate",
    "F_value", "F_normalized", "leaders_B", "elimination_rows_B",
    "elimination_value", "H11_on_line", "final_derivatives",
    "pseudo_parallel_check",
    "TileRaster", "scan", "separation_grid", "coverage_Y",
    "boundary_polyline", "quadrant_table", "quadrant_epsilon",
    "w_tile_census",
    "GrowthContext", "GrowthFamily", "QrtResult", "PivotStrip",
    "LimitQuadrilateral", "detect_growth", "modular_transform",
    "spine_growth", "pair_growth", "hinge_growth", "qrt",
    "rescaled_value", "convergence_report", "finite_difference_slopes",
    "limit_function", "pivot_strip", "omega", "qh_points",
    "partner_functions", "tile_limit_comparison", "W_PAIRS",
]
