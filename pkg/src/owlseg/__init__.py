"""Extract sub-ontologies from OWL RDF/XML files.

Horizontal segmentation keeps the schema and filters individuals with a
small condition language; vertical segmentation projects the schema onto
chosen classes or properties; both can be combined, and segments merge
back by IRI identity.  Every result is purified into a self-contained,
valid ontology.
"""

from .assembly import (
    MergeConflict,
    MergeError,
    OntologyDiff,
    SegmentReport,
    diff,
    merge,
    stats,
)
from .engine import backend_name, select_individuals
from .filters import (
    EvalError,
    FilterExpr,
    FilterSyntaxError,
    evaluate,
    parse_filter,
)
from .fixtures import (
    Allocation,
    PopulationParams,
    build_citizen_schema,
    generate_population,
    generate_with_allocation,
)
from .model import (
    ClassDef,
    DatatypePropertyDef,
    Individual,
    Literal,
    NamespaceMap,
    ObjectPropertyDef,
    Ontology,
    OntologyHeader,
    Violation,
)
from .rdfxml import ParseError, ParseOptions, ParseWarning, parse, serialize
from .segment import (
    PurgeReport,
    SegmentSpec,
    UnknownEntityError,
    full_hybrid,
    populate,
    purify,
    segment_horizontal,
    segment_hybrid,
    segment_vertical_classes,
    segment_vertical_properties,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "ClassDef",
    "DatatypePropertyDef",
    "EvalError",
    "FilterExpr",
    "FilterSyntaxError",
    "Individual",
    "Literal",
    "MergeConflict",
    "MergeError",
    "NamespaceMap",
    "ObjectPropertyDef",
    "Ontology",
    "OntologyDiff",
    "OntologyHeader",
    "ParseError",
    "ParseOptions",
    "ParseWarning",
    "PopulationParams",
    "PurgeReport",
    "SegmentReport",
    "SegmentSpec",
    "UnknownEntityError",
    "Violation",
    "backend_name",
    "build_citizen_schema",
    "diff",
    "evaluate",
    "full_hybrid",
    "generate_population",
    "generate_with_allocation",
    "merge",
    "parse",
    "parse_filter",
    "populate",
    "purify",
    "segment_horizontal",
    "segment_hybrid",
    "segment_vertical_classes",
    "segment_vertical_properties",
    "select_individuals",
    "serialize",
    "stats",
]
