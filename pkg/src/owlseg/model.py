"""In-memory model of the supported OWL subset.

The model covers named classes with subclass links, object / datatype
properties with a single domain and range, and typed individuals carrying
literal and object assertions.  Every element is identified by an absolute
IRI; equality is plain string equality, so loaders must resolve relative
references before building model objects.

All structures are immutable value objects.  Collection-valued fields are
canonicalized (sorted, exact duplicates removed) on construction, which
makes deep equality independent of input order and keeps serialization
deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import date
from decimal import Decimal, InvalidOperation

Iri = str

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"
SEG_NS = "http://owlseg.example/ns#"

# Prefixes every NamespaceMap carries; rebinding them to other IRIs is an
# error because serialization depends on them.
RESERVED_PREFIXES = {
    "rdf": RDF_NS,
    "rdfs": RDFS_NS,
    "owl": OWL_NS,
    "xsd": XSD_NS,
    "seg": SEG_NS,
}

DATATYPES = ("string", "integer", "decimal", "boolean", "date")

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_PREFIX_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")
_INTEGER_RE = re.compile(r"^[+-]?[0-9]+$")
_DECIMAL_RE = re.compile(r"^[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)$")
_DATE_RE = re.compile(r"^[0-9]{4}-[0-9]{2}-[0-9]{2}$")


def check_iri(value: str) -> str:
    """Validate an absolute IRI, returning it unchanged."""
    if not value:
        raise ValueError("IRI must be non-empty")
    if not _SCHEME_RE.match(value):
        raise ValueError(f"IRI is not absolute (missing scheme): {value!r}")
    if any(c in value for c in ' \t\n\r<>"'):
        raise ValueError(f"IRI contains a forbidden character: {value!r}")
    return value


def valid_lexical(lexical: str, datatype: str) -> bool:
    """True when `lexical` is a well-formed value of `datatype`."""
    if datatype == "string":
        return True
    if datatype == "integer":
        return bool(_INTEGER_RE.match(lexical))
    if datatype == "decimal":
        return bool(_DECIMAL_RE.match(lexical))
    if datatype == "boolean":
        return lexical in ("true", "false")
    if datatype == "date":
        if not _DATE_RE.match(lexical):
            return False
        try:
            date.fromisoformat(lexical)
        except ValueError:
            return False
        return True
    raise ValueError(f"unknown datatype tag: {datatype!r}")


@dataclass(frozen=True)
class Literal:
    """A typed literal value, kept in its lexical form.

    `lexical` must be valid for `datatype` (dates are ISO 8601 calendar
    dates, integers optional-sign digit strings, booleans true/false).
    Two literals are equal only when both fields match exactly; value-level
    comparison lives in :func:`typed_value`.
    """

    lexical: str
    datatype: str

    def __post_init__(self) -> None:
        if self.datatype not in DATATYPES:
            raise ValueError(f"unknown datatype tag: {self.datatype!r}")
        if not valid_lexical(self.lexical, self.datatype):
            raise ValueError(
                f"lexical form {self.lexical!r} is not a valid {self.datatype}")


def typed_value(lit: Literal):
    """Decode a literal to a comparable Python value."""
    if lit.datatype == "string":
        return lit.lexical
    if lit.datatype == "integer":
        return int(lit.lexical)
    if lit.datatype == "decimal":
        try:
            return Decimal(lit.lexical)
        except InvalidOperation as exc:  # unreachable for validated literals
            raise ValueError(f"bad decimal literal {lit.lexical!r}") from exc
    if lit.datatype == "boolean":
        return lit.lexical == "true"
    return date.fromisoformat(lit.lexical)


@dataclass(frozen=True)
class NamespaceMap:
    """Prefix bindings plus an optional base IRI for relative-reference use.

    The reserved prefixes (rdf, rdfs, owl, xsd, seg) are merged in on
    construction so every map can serialize the vocabulary; rebinding one
    of them to a different IRI raises.
    """

    bindings: dict[str, Iri] = field(default_factory=dict)
    base: Iri | None = None

    def __post_init__(self) -> None:
        merged = dict(RESERVED_PREFIXES)
        for prefix, iri in self.bindings.items():
            if prefix != "" and not _PREFIX_RE.match(prefix):
                raise ValueError(f"invalid namespace prefix: {prefix!r}")
            check_iri(iri)
            if prefix in RESERVED_PREFIXES and iri != RESERVED_PREFIXES[prefix]:
                raise ValueError(
                    f"prefix {prefix!r} is reserved for <{RESERVED_PREFIXES[prefix]}>")
            merged[prefix] = iri
        object.__setattr__(self, "bindings", merged)
        if self.base is not None:
            check_iri(self.base)

    def resolve(self, name: str) -> Iri:
        """Expand `pre:local`, `:local`, or a bare local name to an IRI."""
        if ":" in name:
            prefix, local = name.split(":", 1)
        else:
            prefix, local = "", name
        if prefix not in self.bindings:
            if prefix == "":
                raise KeyError("no default namespace bound")
            raise KeyError(f"unknown namespace prefix: {prefix!r}")
        return self.bindings[prefix] + local

    def default(self) -> Iri | None:
        return self.bindings.get("")


@dataclass(frozen=True)
class ClassDef:
    """A named class.  `external` marks declaration-only bridge stubs."""

    id: Iri
    super_classes: tuple[Iri, ...] = ()
    external: bool = False

    def __post_init__(self) -> None:
        check_iri(self.id)
        supers = tuple(sorted(set(self.super_classes)))
        for s in supers:
            check_iri(s)
        if self.id in supers:
            raise ValueError(f"class {self.id} cannot be its own superclass")
        object.__setattr__(self, "super_classes", supers)


@dataclass(frozen=True)
class ObjectPropertyDef:
    """A directed relation between individuals of two classes."""

    id: Iri
    domain: Iri
    range: Iri

    def __post_init__(self) -> None:
        check_iri(self.id)
        check_iri(self.domain)
        check_iri(self.range)


@dataclass(frozen=True)
class DatatypePropertyDef:
    """A relation from individuals of `domain` to literals of `range`."""

    id: Iri
    domain: Iri
    range: str

    def __post_init__(self) -> None:
        check_iri(self.id)
        check_iri(self.domain)
        if self.range not in DATATYPES:
            raise ValueError(f"unknown datatype tag: {self.range!r}")


@dataclass(frozen=True)
class Individual:
    """A named instance with its type list and assertions.

    Assertions are kept with set semantics: exact duplicates collapse and
    entries are sorted, so two individuals built from the same facts in a
    different order compare equal.
    """

    id: Iri
    types: tuple[Iri, ...]
    data_assertions: tuple[tuple[Iri, Literal], ...] = ()
    object_assertions: tuple[tuple[Iri, Iri], ...] = ()

    def __post_init__(self) -> None:
        check_iri(self.id)
        types = tuple(sorted(set(self.types)))
        if not types:
            raise ValueError(f"individual {self.id} has no types")
        for t in types:
            check_iri(t)
        data = tuple(sorted(set(self.data_assertions),
                            key=lambda a: (a[0], a[1].datatype, a[1].lexical)))
        objs = tuple(sorted(set(self.object_assertions)))
        for prop, _ in data:
            check_iri(prop)
        for prop, target in objs:
            check_iri(prop)
            check_iri(target)
        object.__setattr__(self, "types", types)
        object.__setattr__(self, "data_assertions", data)
        object.__setattr__(self, "object_assertions", objs)


@dataclass(frozen=True)
class OntologyHeader:
    """The owl:Ontology element: its IRI plus comment annotations."""

    iri: Iri | None = None
    comments: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.iri is not None:
            check_iri(self.iri)
        object.__setattr__(self, "comments", tuple(sorted(set(self.comments))))


@dataclass(frozen=True)
class Violation:
    """One referential-integrity problem found by :meth:`Ontology.validate`."""

    kind: str
    subject: Iri
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.subject}: {self.detail}"


@dataclass(frozen=True)
class Ontology:
    """A complete ontology: header, namespaces, schema and individuals.

    Each category is a mapping keyed by IRI, which rules out duplicate
    declarations within a category by construction; cross-category reuse
    of an IRI is reported by :meth:`validate`.  Treat instances as
    immutable and build changed copies through the segmentation operations.
    """

    header: OntologyHeader = OntologyHeader()
    namespaces: NamespaceMap = field(default_factory=NamespaceMap)
    classes: dict[Iri, ClassDef] = field(default_factory=dict)
    object_properties: dict[Iri, ObjectPropertyDef] = field(default_factory=dict)
    datatype_properties: dict[Iri, DatatypePropertyDef] = field(default_factory=dict)
    individuals: dict[Iri, Individual] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for key, entry in (("classes", self.classes),
                           ("object_properties", self.object_properties),
                           ("datatype_properties", self.datatype_properties),
                           ("individuals", self.individuals)):
            for iri, item in entry.items():
                if iri != item.id:
                    raise ValueError(
                        f"{key} entry keyed {iri!r} holds definition of {item.id!r}")

    def validate(self) -> list[Violation]:
        """Check referential integrity; an empty report means valid."""
        out: list[Violation] = []
        categories = {
            "class": self.classes,
            "object-property": self.object_properties,
            "datatype-property": self.datatype_properties,
            "individual": self.individuals,
        }
        seen: dict[Iri, str] = {}
        for cat_name, entries in categories.items():
            for iri in sorted(entries):
                if iri in seen:
                    out.append(Violation(
                        "duplicate-iri", iri,
                        f"declared both as {seen[iri]} and as {cat_name}"))
                else:
                    seen[iri] = cat_name

        for iri in sorted(self.classes):
            cdef = self.classes[iri]
            for sup in cdef.super_classes:
                if sup not in self.classes:
                    out.append(Violation(
                        "unknown-superclass", iri, f"superclass {sup} not declared"))
        out.extend(self._hierarchy_cycles())

        for iri in sorted(self.object_properties):
            pdef = self.object_properties[iri]
            if pdef.domain not in self.classes:
                out.append(Violation(
                    "unknown-domain", iri, f"domain {pdef.domain} not declared"))
            if pdef.range not in self.classes:
                out.append(Violation(
                    "unknown-range", iri, f"range {pdef.range} not declared"))
        for iri in sorted(self.datatype_properties):
            ddef = self.datatype_properties[iri]
            if ddef.domain not in self.classes:
                out.append(Violation(
                    "unknown-domain", iri, f"domain {ddef.domain} not declared"))

        for iri in sorted(self.individuals):
            ind = self.individuals[iri]
            for t in ind.types:
                if t not in self.classes:
                    out.append(Violation(
                        "unknown-type", iri, f"type {t} not declared as a class"))
            for prop, lit in ind.data_assertions:
                ddef = self.datatype_properties.get(prop)
                if ddef is None:
                    kind = ("wrong-property-kind" if prop in self.object_properties
                            else "undeclared-property")
                    out.append(Violation(
                        kind, iri, f"data assertion uses {prop}"))
                elif lit.datatype != ddef.range:
                    out.append(Violation(
                        "datatype-mismatch", iri,
                        f"{prop} expects {ddef.range}, got {lit.datatype} "
                        f"value {lit.lexical!r}"))
            for prop, target in ind.object_assertions:
                if prop not in self.object_properties:
                    kind = ("wrong-property-kind" if prop in self.datatype_properties
                            else "undeclared-property")
                    out.append(Violation(
                        kind, iri, f"object assertion uses {prop}"))
                if target not in self.individuals:
                    out.append(Violation(
                        "dangling-target", iri,
                        f"object assertion ({prop}) targets missing {target}"))

        out.extend(self._uncompressible_names())
        return out

    def _hierarchy_cycles(self) -> list[Violation]:
        # Iterative DFS; reports each class on a cycle once.
        out = []
        state: dict[Iri, int] = {}  # 1 = on stack, 2 = done
        for start in sorted(self.classes):
            if state.get(start):
                continue
            stack = [(start, iter(self.classes[start].super_classes))]
            state[start] = 1
            while stack:
                node, supers = stack[-1]
                advanced = False
                for sup in supers:
                    if sup not in self.classes:
                        continue
                    if state.get(sup) == 1:
                        out.append(Violation(
                            "cyclic-hierarchy", sup,
                            f"class reachable from itself via subclass links ({node} -> {sup})"))
                    elif not state.get(sup):
                        state[sup] = 1
                        stack.append((sup, iter(self.classes[sup].super_classes)))
                        advanced = True
                        break
                if not advanced:
                    state[node] = 2
                    stack.pop()
        return out

    def _uncompressible_names(self) -> list[Violation]:
        # RDF/XML writes class and property IRIs as element names, which
        # must be prefix-compressible QNames; flag ones that are not.
        out = []
        names = sorted(set(self.classes) | set(self.object_properties)
                       | set(self.datatype_properties))
        for iri in names:
            if compress_qname(iri, self.namespaces) is None:
                out.append(Violation(
                    "not-qname-serializable", iri,
                    "no bound namespace covers this class/property IRI"))
        return out

    def references_to(self, target: Iri) -> list[tuple[Iri, Iri]]:
        """All (source individual, property) pairs asserting an edge to `target`."""
        hits = []
        for iri in sorted(self.individuals):
            for prop, tgt in self.individuals[iri].object_assertions:
                if tgt == target:
                    hits.append((iri, prop))
        return hits

    def subclass_closure(self, cls: Iri) -> frozenset[Iri]:
        """`cls` plus every declared class below it in the hierarchy."""
        children: dict[Iri, list[Iri]] = {c: [] for c in self.classes}
        for c, cdef in self.classes.items():
            for sup in cdef.super_classes:
                if sup in children:
                    children[sup].append(c)
        seen = {cls}
        frontier = [cls]
        while frontier:
            nxt = []
            for node in frontier:
                for child in children.get(node, ()):
                    if child not in seen:
                        seen.add(child)
                        nxt.append(child)
            frontier = nxt
        return frozenset(seen)

    def schema_equal(self, other: "Ontology") -> bool:
        """Equality ignoring the individuals category."""
        return (self.header == other.header
                and self.namespaces == other.namespaces
                and self.classes == other.classes
                and self.object_properties == other.object_properties
                and self.datatype_properties == other.datatype_properties)


_NCNAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def compress_qname(iri: Iri, ns: NamespaceMap) -> tuple[str, str] | None:
    """Split an IRI into (prefix, local) under `ns`, or None.

    When several bindings cover the IRI the default namespace wins, then
    the alphabetically first prefix, so output is deterministic.
    """
    candidates = []
    for prefix, base in ns.bindings.items():
        if iri.startswith(base):
            local = iri[len(base):]
            if _NCNAME_RE.match(local):
                candidates.append((prefix != "", prefix, local))
    if not candidates:
        return None
    _, prefix, local = min(candidates)
    return prefix, local


def copy_structure(src: Ontology) -> Ontology:
    """The schema of `src` (header, namespaces, classes, properties) with
    an empty extension."""
    return replace(src, individuals={})
