"""Structural analysis of scenario hypergraphs.

Evoked alternatives are hyperedges over perceived consequences; this package
computes their shared-face matrix, q-connectivity classes, structure vector,
complexity score, and generalized line graphs, and compares scenario
variants.  Front ends: `scenq` CLI and an HTTP service (`scenq serve`).
"""

from .analysis import (
    VariantDiff,
    build_report,
    classify,
    compare_reports,
    complexity,
    complexity_from_counts,
    diff_to_dict,
    intersection_matrix,
    q_classes_equality,
    q_classes_threshold,
    report_to_dict,
    structure_vector,
)
from .errors import (
    DanglingConsequence,
    DuplicateId,
    EmptyAlternative,
    InputError,
    InvalidBand,
    LevelOutOfRange,
    MalformedDocument,
    NoSharedFaces,
    ScenqError,
    SchemaViolation,
    UnreachableAlternative,
    ValidationFailure,
    ZeroClassCount,
)
from .ingestion import (
    FORMAT_COGMAP_JSON,
    FORMAT_INCIDENCE_CSV,
    FORMAT_INTERSECTION_CSV,
    FORMAT_SCENARIO_JSON,
    IgnoredEdgeSignWarning,
    ScenarioDocument,
    detect_format,
    load_document,
    parse_scenario,
    reduce_cognitive_map,
    scenario_to_dict,
    serialize_scenario,
)
from .linegraph import (
    RenderOptions,
    export_dot,
    generalized_line_graph,
    threshold_line_graph,
)
from .model import (
    VARIANT_EQUALITY,
    VARIANT_THRESHOLD,
    Alternative,
    AnalysisReport,
    CognitiveMap,
    ComplexityScore,
    Concept,
    IntersectionMatrix,
    LineGraph,
    QClassification,
    ScenarioMap,
    StructureVector,
    digest_matrix,
    digest_scenario,
    format_fraction,
    is_one_to_one,
    validate_cognitive_map,
    validate_matrix,
    validate_scenario,
)

__version__ = "0.1.0"
