"""Sub-ontology extraction: horizontal, vertical, and combined.

Horizontal segmentation keeps the whole schema and filters individuals.
Vertical segmentation projects the schema (by property or by class) and
keeps every individual that still has a type.  Both finish by purifying
the result so it is again a self-contained, valid ontology.

Every operation returns `(segment, PurgeReport)` where the report lists
exactly what the cleanup removed, in IRI-sorted order, so runs are
reproducible and auditable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import engine
from .filters import FilterExpr
from .model import ClassDef, Individual, Iri, Ontology, copy_structure


class UnknownEntityError(ValueError):
    """A keep-set or populate call names an IRI the source does not declare."""


@dataclass(frozen=True)
class SegmentSpec:
    """What to keep.  None means "no constraint on that axis".

    bridge_policy controls references leaving a class keep-set: `stub`
    declares the missing class as an empty external marker so the link
    survives, `drop` removes the link.
    """

    keep_classes: frozenset[Iri] | None = None
    keep_object_properties: frozenset[Iri] | None = None
    keep_datatype_properties: frozenset[Iri] | None = None
    filter: FilterExpr | None = None
    bridge_policy: str = "stub"

    def __post_init__(self) -> None:
        for field in ("keep_classes", "keep_object_properties",
                      "keep_datatype_properties"):
            value = getattr(self, field)
            if value is not None:
                object.__setattr__(self, field, frozenset(value))
        if self.bridge_policy not in ("stub", "drop"):
            raise ValueError(
                f"bridge_policy must be stub or drop, got {self.bridge_policy!r}")
        if (self.keep_classes is None and self.keep_object_properties is None
                and self.keep_datatype_properties is None
                and self.filter is None):
            raise ValueError("a segment spec must constrain at least one axis")


@dataclass(frozen=True)
class PurgeReport:
    """What purification removed.

    Object assertions are (source, property, target); data assertions
    are (source, property), deduplicated, so one pair may stand for
    several removed literals of that property.  All three listings are
    sorted.
    """

    removed_object_assertions: tuple[tuple[Iri, Iri, Iri], ...] = ()
    removed_data_assertions: tuple[tuple[Iri, Iri], ...] = ()
    removed_individuals: tuple[Iri, ...] = ()

    @property
    def empty(self) -> bool:
        return not (self.removed_object_assertions
                    or self.removed_data_assertions
                    or self.removed_individuals)

    def combine(self, later: "PurgeReport") -> "PurgeReport":
        """Union with removals from a later pipeline stage."""
        return PurgeReport(
            tuple(sorted(set(self.removed_object_assertions)
                         | set(later.removed_object_assertions))),
            tuple(sorted(set(self.removed_data_assertions)
                         | set(later.removed_data_assertions))),
            tuple(sorted(set(self.removed_individuals)
                         | set(later.removed_individuals))))


def _require_known(wanted, declared, what: str) -> None:
    missing = sorted(set(wanted) - set(declared))
    if missing:
        raise UnknownEntityError(f"{what} {missing[0]} is not declared")


def populate(schema: Ontology, src: Ontology, individuals) -> Ontology:
    """Copy the named individuals verbatim from `src` onto `schema`."""
    picked = {}
    for iri in sorted(set(individuals)):
        ind = src.individuals.get(iri)
        if ind is None:
            raise UnknownEntityError(f"individual {iri} is not in the source")
        picked[iri] = ind
    return replace(schema, individuals=picked)


def purify(o: Ontology) -> tuple[Ontology, PurgeReport]:
    """Make the instance level consistent with the ontology's own schema.

    Removes object assertions whose target is gone, assertions whose
    property the schema no longer declares (or declares with another
    range), and type entries naming absent classes.  An individual is
    dropped only when it loses its last type.  Removing an assertion
    never removes an individual, so a single pass reaches the fixpoint
    and purify is idempotent.
    """
    removed_objs: list[tuple[Iri, Iri, Iri]] = []
    removed_data: list[tuple[Iri, Iri]] = []
    removed_inds: list[Iri] = []

    surviving = set()
    for iri in sorted(o.individuals):
        if any(t in o.classes for t in o.individuals[iri].types):
            surviving.add(iri)
        else:
            removed_inds.append(iri)

    individuals = {}
    for iri in sorted(surviving):
        ind = o.individuals[iri]
        types = tuple(t for t in ind.types if t in o.classes)
        data = []
        for prop, lit in ind.data_assertions:
            decl = o.datatype_properties.get(prop)
            if decl is None or decl.range != lit.datatype:
                removed_data.append((iri, prop))
            else:
                data.append((prop, lit))
        objs = []
        for prop, target in ind.object_assertions:
            if prop not in o.object_properties or target not in surviving:
                removed_objs.append((iri, prop, target))
            else:
                objs.append((prop, target))
        individuals[iri] = Individual(iri, types, tuple(data), tuple(objs))

    out = replace(o, individuals=individuals)
    return out, PurgeReport(tuple(sorted(set(removed_objs))),
                            tuple(sorted(set(removed_data))),
                            tuple(sorted(removed_inds)))


def segment_horizontal(src: Ontology,
                       f: FilterExpr) -> tuple[Ontology, PurgeReport]:
    """Keep the schema, keep only the individuals satisfying `f`.

    The filter is evaluated against the full source, so a path condition
    may travel through individuals that are themselves filtered out.
    """
    selected = engine.select_individuals(src, f)
    return purify(populate(copy_structure(src), src, selected))


def segment_vertical_properties(src: Ontology, keep_dp, keep_op
                                ) -> tuple[Ontology, PurgeReport]:
    """Keep all classes and individuals; keep only the named properties.

    Assertions of dropped properties disappear from every individual and
    are listed in the report.
    """
    keep_dp = frozenset(keep_dp)
    keep_op = frozenset(keep_op)
    _require_known(keep_dp, src.datatype_properties, "datatype property")
    _require_known(keep_op, src.object_properties, "object property")
    schema = replace(
        src,
        object_properties={p: src.object_properties[p] for p in sorted(keep_op)},
        datatype_properties={p: src.datatype_properties[p] for p in sorted(keep_dp)})
    return purify(replace(schema, individuals=dict(src.individuals)))


def segment_vertical_classes(src: Ontology, keep, policy: str = "stub"
                             ) -> tuple[Ontology, PurgeReport]:
    """Keep only the named classes and the properties living among them.

    A property survives when its domain is kept and, for object
    properties, its range is kept or stubbed.  Individuals keep the
    types inside the keep-set and are dropped once none remain.
    """
    keep = frozenset(keep)
    if policy not in ("stub", "drop"):
        raise ValueError(f"policy must be stub or drop, got {policy!r}")
    _require_known(keep, src.classes, "class")

    stubs: set[Iri] = set()
    classes: dict[Iri, ClassDef] = {}
    for iri in sorted(keep):
        cdef = src.classes[iri]
        if policy == "stub":
            stubs.update(s for s in cdef.super_classes if s not in keep)
            supers = cdef.super_classes
        else:
            supers = tuple(s for s in cdef.super_classes if s in keep)
        classes[iri] = ClassDef(iri, supers, cdef.external)

    object_properties = {}
    for iri in sorted(src.object_properties):
        pdef = src.object_properties[iri]
        if pdef.domain not in keep:
            continue
        if pdef.range in keep:
            object_properties[iri] = pdef
        elif policy == "stub":
            stubs.add(pdef.range)
            object_properties[iri] = pdef
    datatype_properties = {
        iri: ddef for iri, ddef in sorted(src.datatype_properties.items())
        if ddef.domain in keep}

    for iri in sorted(stubs):
        classes[iri] = ClassDef(iri, (), external=True)

    removed_inds = []
    individuals = {}
    for iri in sorted(src.individuals):
        ind = src.individuals[iri]
        types = tuple(t for t in ind.types if t in keep)
        if types:
            individuals[iri] = replace(ind, types=types)
        else:
            removed_inds.append(iri)

    stage = Ontology(src.header, src.namespaces, classes, object_properties,
                     datatype_properties, individuals)
    out, report = purify(stage)
    return out, PurgeReport(removed_individuals=tuple(removed_inds)).combine(report)


def segment_hybrid(src: Ontology,
                   spec: SegmentSpec) -> tuple[Ontology, PurgeReport]:
    """Class projection followed by property projection.

    The keep-property sets are validated against the source; properties
    already eliminated by the class stage (their domain or range left the
    keep-set) are simply not there to keep.
    """
    if spec.keep_classes is None:
        raise ValueError("hybrid segmentation needs keep_classes")
    if (spec.keep_object_properties is None
            and spec.keep_datatype_properties is None):
        raise ValueError("hybrid segmentation needs a keep-property set")
    _require_known(spec.keep_object_properties or frozenset(),
                   src.object_properties, "object property")
    _require_known(spec.keep_datatype_properties or frozenset(),
                   src.datatype_properties, "datatype property")

    mid, first = segment_vertical_classes(src, spec.keep_classes,
                                          spec.bridge_policy)
    keep_op = set(mid.object_properties)
    if spec.keep_object_properties is not None:
        keep_op &= spec.keep_object_properties
    keep_dp = set(mid.datatype_properties)
    if spec.keep_datatype_properties is not None:
        keep_dp &= spec.keep_datatype_properties
    out, second = segment_vertical_properties(mid, keep_dp, keep_op)
    return out, first.combine(second)


def full_hybrid(src: Ontology,
                spec: SegmentSpec) -> tuple[Ontology, PurgeReport]:
    """Vertical segmentation first, then horizontal filtering.

    The filter is bound against the vertically segmented schema, so a
    condition over a property the vertical stage removed raises
    EvalError rather than silently matching nothing.
    """
    if spec.filter is None:
        raise ValueError("full hybrid segmentation needs a filter")
    mid, first = segment_hybrid(src, replace(spec, filter=None))
    out, second = segment_horizontal(mid, spec.filter)
    return out, first.combine(second)
