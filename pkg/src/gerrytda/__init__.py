"""Topological comparison of precinct and district voting maps.

The package turns vote tallies on polygonal maps into level-set filtrations
of rasterized margin fields, computes persistence barcodes over GF(2), and
compares plans through bottleneck/Wasserstein distances and classical
compactness scores.
"""

from .errors import (
    ComplexError,
    DegenerateSampleError,
    GeometryError,
    GerryTdaError,
    IngestError,
    MarginError,
    ParameterError,
    PipelineError,
    RasterError,
    StructureError,
)
from .geometry import (
    Bounds,
    Point2,
    PolygonSet,
    Ring,
    UnitCollection,
    UnitKind,
    VotingUnit,
    point_in_polygon,
    polygon_area,
    polygon_perimeter,
)
from .ingest import (
    JoinReport,
    join_units,
    parse_geojson,
    parse_votes_csv,
    to_geojson,
)
from .raster import (
    Grid,
    LabelRaster,
    MarginField,
    MarginMode,
    margin_field,
    rasterize,
    read_margin_pgm,
    write_margin_pgm,
)
from .complexes import (
    FilteredComplex,
    LevelSchedule,
    build_adjacency_filtration,
    build_levelset_filtration,
    detect_adjacency,
    flag_filtration,
    uniform_schedule,
    win_margin,
)
from .persistence import (
    INF,
    Barcode,
    BettiProfile,
    BoundaryMatrix,
    PersistencePair,
    barcode,
    betti_oracle,
    betti_profile,
    read_barcode_json,
    reduce,
)
from .compare import (
    bottleneck,
    distance_matrix,
    matrix_to_csv,
    total_persistence,
    wasserstein,
)
from .compactness import (
    CompactnessRow,
    TTestResult,
    min_enclosing_circle,
    paired_t_test,
    polsby_popper,
    reock,
    score_units,
    scores_to_csv,
    t_p_value,
)
from .report import (
    AnalysisConfig,
    YearResult,
    cross_year_matrix,
    render_barcode_svg,
    run_year,
    run_years,
    write_levelset_snapshot,
    write_outputs,
)

__version__ = "0.1.0"
