"""Putting segments back together, comparing ontologies, measuring size.

Merging is union by IRI: a stub class gives way to a full definition,
individuals pool their types and assertions, and anything else colliding
under one IRI must be field-for-field identical.  One purification pass
at the end clears cross-segment references that stayed dangling, so
segments cut along class boundaries recombine without manual repair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ClassDef, Individual, Iri, Ontology, OntologyHeader, NamespaceMap
from .rdfxml import serialize
from .segment import purify


@dataclass(frozen=True)
class MergeConflict:
    """Two incompatible definitions under one IRI."""

    iri: Iri
    kind: str  # class | object-property | datatype-property | individual
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} {self.iri}: {self.detail}"


class MergeError(Exception):
    def __init__(self, conflicts: list[MergeConflict]):
        self.conflicts = tuple(sorted(conflicts, key=lambda c: (c.iri, c.kind)))
        summary = "; ".join(str(c) for c in self.conflicts[:3])
        if len(self.conflicts) > 3:
            summary += f"; and {len(self.conflicts) - 3} more"
        super().__init__(f"{len(self.conflicts)} merge conflict(s): {summary}")


def _is_stub(cdef: ClassDef) -> bool:
    return cdef.external and not cdef.super_classes


def _merge_class(a: ClassDef, b: ClassDef) -> ClassDef | None:
    if a == b:
        return a
    if _is_stub(a):
        return b
    if _is_stub(b):
        return a
    if a.super_classes == b.super_classes:
        return ClassDef(a.id, a.super_classes, a.external and b.external)
    return None


def _merge_individual(a: Individual, b: Individual) -> Individual:
    return Individual(a.id,
                      a.types + b.types,
                      a.data_assertions + b.data_assertions,
                      a.object_assertions + b.object_assertions)


def _merge_namespaces(segments: list[Ontology]) -> NamespaceMap:
    bindings: dict[str, str] = {}
    bases = set()
    for seg in segments:
        for prefix, iri in seg.namespaces.bindings.items():
            if prefix in bindings and bindings[prefix] != iri:
                raise ValueError(
                    f"prefix {prefix!r} bound to both <{bindings[prefix]}> "
                    f"and <{iri}> across segments")
            bindings[prefix] = iri
        if seg.namespaces.base is not None:
            bases.add(seg.namespaces.base)
    if len(bases) > 1:
        raise ValueError(f"segments declare different xml:base values: "
                         f"{', '.join(sorted(bases))}")
    return NamespaceMap(bindings, next(iter(bases)) if bases else None)


def _merge_headers(segments: list[Ontology]) -> OntologyHeader:
    iris = sorted(s.header.iri for s in segments if s.header.iri is not None)
    comments: set[str] = set()
    for seg in segments:
        comments.update(seg.header.comments)
    return OntologyHeader(iris[0] if iris else None, tuple(sorted(comments)))


def merge(segments: list[Ontology]) -> Ontology:
    """Union a non-empty list of segments into one ontology.

    The result does not depend on the order of the list.  Incompatible
    definitions raise :class:`MergeError` carrying every conflict found;
    clashing namespace bindings raise ValueError since they make IRIs of
    the inputs ambiguous to compare.
    """
    if not segments:
        raise ValueError("merge needs at least one segment")
    conflicts: list[MergeConflict] = []

    classes: dict[Iri, ClassDef] = {}
    obj_props: dict[Iri, object] = {}
    dt_props: dict[Iri, object] = {}
    individuals: dict[Iri, Individual] = {}
    for seg in segments:
        for iri, cdef in seg.classes.items():
            if iri not in classes:
                classes[iri] = cdef
                continue
            merged = _merge_class(classes[iri], cdef)
            if merged is None:
                conflicts.append(MergeConflict(
                    iri, "class", "different superclass sets"))
            else:
                classes[iri] = merged
        for store, kind, defs in ((obj_props, "object-property",
                                   seg.object_properties),
                                  (dt_props, "datatype-property",
                                   seg.datatype_properties)):
            for iri, pdef in defs.items():
                if iri not in store:
                    store[iri] = pdef
                elif store[iri] != pdef:
                    conflicts.append(MergeConflict(
                        iri, kind, "different domain or range"))
        for iri, ind in seg.individuals.items():
            if iri not in individuals:
                individuals[iri] = ind
            else:
                individuals[iri] = _merge_individual(individuals[iri], ind)

    categories = (("class", classes), ("object-property", obj_props),
                  ("datatype-property", dt_props), ("individual", individuals))
    for i, (kind_a, cat_a) in enumerate(categories):
        for kind_b, cat_b in categories[i + 1:]:
            for iri in sorted(set(cat_a) & set(cat_b)):
                conflicts.append(MergeConflict(
                    iri, kind_a, f"also declared as a {kind_b}"))

    if conflicts:
        raise MergeError(conflicts)

    merged = Ontology(_merge_headers(segments), _merge_namespaces(segments),
                      classes, obj_props, dt_props, individuals)
    result, _ = purify(merged)
    violations = result.validate()
    if violations:
        raise ValueError(
            f"merged ontology is not valid: {violations[0]}")
    return result


# ----------------------------------------------------------------------
# diff


@dataclass(frozen=True)
class CategoryDiff:
    added: tuple[Iri, ...]
    removed: tuple[Iri, ...]
    changed: tuple[Iri, ...]

    @property
    def empty(self) -> bool:
        return not (self.added or self.removed or self.changed)


@dataclass(frozen=True)
class OntologyDiff:
    classes: CategoryDiff
    object_properties: CategoryDiff
    datatype_properties: CategoryDiff
    individuals: CategoryDiff
    header_changed: bool
    namespaces_changed: bool

    @property
    def empty(self) -> bool:
        return (self.classes.empty and self.object_properties.empty
                and self.datatype_properties.empty and self.individuals.empty
                and not self.header_changed and not self.namespaces_changed)


def _diff_category(a: dict, b: dict) -> CategoryDiff:
    return CategoryDiff(
        added=tuple(sorted(set(b) - set(a))),
        removed=tuple(sorted(set(a) - set(b))),
        changed=tuple(sorted(iri for iri in set(a) & set(b)
                             if a[iri] != b[iri])))


def diff(a: Ontology, b: Ontology) -> OntologyDiff:
    """Per-category difference from `a` to `b` (added = present only in b)."""
    return OntologyDiff(
        classes=_diff_category(a.classes, b.classes),
        object_properties=_diff_category(a.object_properties,
                                         b.object_properties),
        datatype_properties=_diff_category(a.datatype_properties,
                                           b.datatype_properties),
        individuals=_diff_category(a.individuals, b.individuals),
        header_changed=a.header != b.header,
        namespaces_changed=a.namespaces != b.namespaces)


# ----------------------------------------------------------------------
# stats


@dataclass(frozen=True)
class SegmentReport:
    """Size summary of one ontology, optionally relative to a reference.

    assertion_count totals property assertions (data plus object) over
    all individuals; type entries are not assertions.  reduction_ratio
    is serialized size over the reference's serialized size.
    """

    class_count: int
    object_property_count: int
    datatype_property_count: int
    individual_count: int
    assertion_count: int
    serialized_bytes: int
    reduction_ratio: float | None = None

    def to_line(self) -> str:
        parts = [f"{self.class_count} classes",
                 f"{self.object_property_count} object properties",
                 f"{self.datatype_property_count} datatype properties",
                 f"{self.individual_count} individuals",
                 f"{self.assertion_count} assertions",
                 f"{self.serialized_bytes} bytes"]
        if self.reduction_ratio is not None:
            parts.append(f"ratio {self.reduction_ratio:.6f}")
        return ", ".join(parts)

    def to_kv(self) -> str:
        lines = [f"class_count={self.class_count}",
                 f"object_property_count={self.object_property_count}",
                 f"datatype_property_count={self.datatype_property_count}",
                 f"individual_count={self.individual_count}",
                 f"assertion_count={self.assertion_count}",
                 f"serialized_bytes={self.serialized_bytes}"]
        if self.reduction_ratio is not None:
            lines.append(f"reduction_ratio={self.reduction_ratio:.6f}")
        return "\n".join(lines)


def stats(segment: Ontology, reference: Ontology | None = None) -> SegmentReport:
    """Counts and serialized size; ratio only when a reference is given."""
    assertions = sum(len(ind.data_assertions) + len(ind.object_assertions)
                     for ind in segment.individuals.values())
    size = len(serialize(segment))
    ratio = None
    if reference is not None:
        ratio = size / len(serialize(reference))
    return SegmentReport(
        class_count=len(segment.classes),
        object_property_count=len(segment.object_properties),
        datatype_property_count=len(segment.datatype_properties),
        individual_count=len(segment.individuals),
        assertion_count=assertions,
        serialized_bytes=size,
        reduction_ratio=ratio)
