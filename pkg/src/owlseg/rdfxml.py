"""RDF/XML reader and writer for the supported OWL subset.

Supported vocabulary: an owl:Ontology header with rdfs:comment children,
owl:Class with rdfs:subClassOf, owl:ObjectProperty / owl:DatatypeProperty
with one rdfs:domain and one rdfs:range, and typed individual elements
(class-named element, extra rdf:type children, nested property elements
carrying rdf:resource links or rdf:datatype literals).  Anything else is
an unsupported construct: strict mode rejects it with a position, lenient
mode drops it and records a :class:`ParseWarning`.

Writing is deterministic: fixed category order (header, classes, object
properties, datatype properties, individuals), entries sorted by IRI,
`rdf:about` with absolute IRIs throughout, UTF-8 with a fixed XML
declaration.  ``parse(serialize(o))`` returns a model equal to ``o``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urljoin
from xml.parsers import expat

from .model import (
    OWL_NS,
    RDF_NS,
    RDFS_NS,
    RESERVED_PREFIXES,
    SEG_NS,
    XSD_NS,
    ClassDef,
    DatatypePropertyDef,
    Individual,
    Literal,
    NamespaceMap,
    ObjectPropertyDef,
    Ontology,
    OntologyHeader,
    compress_qname,
)

XSD_TO_TAG = {
    XSD_NS + "string": "string",
    XSD_NS + "integer": "integer",
    XSD_NS + "decimal": "decimal",
    XSD_NS + "boolean": "boolean",
    XSD_NS + "date": "date",
}
TAG_TO_XSD = {tag: iri for iri, tag in XSD_TO_TAG.items()}

_NCNAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


class ParseError(Exception):
    """Rejected input; carries the 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class ParseOptions:
    mode: str = "strict"

    def __post_init__(self) -> None:
        if self.mode not in ("strict", "lenient"):
            raise ValueError(f"mode must be strict or lenient, got {self.mode!r}")

    @property
    def strict(self) -> bool:
        return self.mode == "strict"


@dataclass(frozen=True)
class ParseWarning:
    """A construct dropped during lenient parsing."""

    location: tuple[int, int]
    construct: str
    action: str = "dropped"

    def __str__(self) -> str:
        line, col = self.location
        return f"line {line}, column {col}: {self.action} {self.construct}"


class _Skip:
    """Subtree being discarded in lenient mode."""

    def __init__(self):
        self.depth = 1


class _Parser:
    def __init__(self, opts: ParseOptions):
        self.opts = opts
        self.warnings: list[ParseWarning] = []
        self.xp = expat.ParserCreate()
        self.xp.buffer_text = True
        self.xp.StartElementHandler = self._start
        self.xp.EndElementHandler = self._end
        self.xp.CharacterDataHandler = self._chars
        self.xp.XmlDeclHandler = self._xml_decl
        self.xp.StartDoctypeDeclHandler = self._doctype

        self.ns_stack: list[dict[str, str]] = [{}]
        self.flat_bindings: dict[str, str] = {}
        self.base: str | None = None
        self.stack: list[dict] = [{"kind": "doc"}]

        self.header: dict | None = None
        self.raw_classes: dict[str, dict] = {}
        self.raw_obj_props: dict[str, dict] = {}
        self.raw_dt_props: dict[str, dict] = {}
        self.raw_individuals: dict[str, dict] = {}
        self.positions: dict[str, tuple[int, int]] = {}

    # ------------------------------------------------------------------
    # position / error / warning helpers

    def _pos(self) -> tuple[int, int]:
        return (self.xp.CurrentLineNumber, self.xp.CurrentColumnNumber + 1)

    def _error(self, message: str, pos: tuple[int, int] | None = None):
        line, col = pos or self._pos()
        raise ParseError(message, line, col)

    def _warn(self, construct: str, pos: tuple[int, int] | None = None) -> None:
        self.warnings.append(ParseWarning(pos or self._pos(), construct))

    def _unsupported(self, construct: str, pos: tuple[int, int] | None = None,
                     skip: bool = True) -> None:
        """Strict: raise.  Lenient: warn and (optionally) skip the subtree."""
        if self.opts.strict:
            self._error(f"unsupported construct: {construct}", pos)
        self._warn(construct, pos)
        if skip:
            self.stack.append({"kind": "skip", "state": _Skip()})

    # ------------------------------------------------------------------
    # expat callbacks

    def _xml_decl(self, version, encoding, standalone) -> None:
        if encoding is not None and encoding.lower() != "utf-8":
            self._error(f"unsupported document encoding: {encoding}")

    def _doctype(self, *args) -> None:
        self._error("DOCTYPE declarations are not allowed")

    def _chars(self, data: str) -> None:
        top = self.stack[-1]
        kind = top["kind"]
        if kind == "skip":
            return
        if kind == "text":
            top["chunks"].append(data)
            return
        if data.strip():
            if self.opts.strict:
                self._error(f"unexpected text content: {data.strip()[:40]!r}")
            self._warn("text content")

    def _start(self, name: str, attrs: dict[str, str]) -> None:
        top = self.stack[-1]
        if top["kind"] == "skip":
            top["state"].depth += 1
            return
        scope = self._collect_namespaces(attrs)
        self.ns_stack.append(scope)
        try:
            self._dispatch_start(name, attrs, top)
        except Exception:
            self.ns_stack.pop()
            raise
        # _dispatch_start always pushes exactly one context

    def _end(self, name: str) -> None:
        top = self.stack[-1]
        if top["kind"] == "skip":
            top["state"].depth -= 1
            if top["state"].depth == 0:
                self.stack.pop()
            return
        self.stack.pop()
        self.ns_stack.pop()
        self._commit(top)

    # ------------------------------------------------------------------
    # namespace machinery

    def _collect_namespaces(self, attrs: dict[str, str]) -> dict[str, str]:
        scope: dict[str, str] = {}
        for key, value in attrs.items():
            if key == "xmlns":
                prefix = ""
            elif key.startswith("xmlns:"):
                prefix = key[6:]
            else:
                continue
            if not value:
                self._error(f"namespace prefix {prefix!r} bound to empty IRI")
            if prefix in RESERVED_PREFIXES and value != RESERVED_PREFIXES[prefix]:
                self._error(
                    f"prefix {prefix!r} is reserved for <{RESERVED_PREFIXES[prefix]}>")
            scope[prefix] = value
            if prefix not in self.flat_bindings:
                self.flat_bindings[prefix] = value
            elif self.flat_bindings[prefix] != value:
                if self.opts.strict:
                    self._error(f"conflicting redeclaration of prefix {prefix!r}")
                self._warn(f"redeclaration of prefix {prefix!r}")
        return scope

    def _lookup_prefix(self, prefix: str) -> str | None:
        for scope in reversed(self.ns_stack):
            if prefix in scope:
                return scope[prefix]
        return None

    def _resolve_qname(self, name: str) -> str | None:
        if ":" in name:
            prefix, local = name.split(":", 1)
        else:
            prefix, local = "", name
        ns = self._lookup_prefix(prefix)
        if ns is None:
            if prefix:
                self._error(f"undeclared namespace prefix: {prefix!r}")
            return None  # unprefixed with no default namespace
        return ns + local

    # ------------------------------------------------------------------
    # reference resolution

    def _resolve_ref(self, value: str) -> str:
        if self.base is None:
            if not re.match(r"^[A-Za-z][A-Za-z0-9+.\-]*:", value):
                self._error(
                    f"relative reference {value!r} but no xml:base declared")
            return value
        return urljoin(self.base, value)

    def _subject_from_attrs(self, name: str, attrs: dict[str, str]) -> str | None:
        """Resolve rdf:about / rdf:ID on a node element; None on failure."""
        about = attrs.get("rdf:about")
        ident = attrs.get("rdf:ID")
        if about is not None and ident is not None:
            self._unsupported(f"{name} with both rdf:about and rdf:ID")
            return None
        if about is None and ident is None:
            self._unsupported(f"{name} without rdf:about or rdf:ID")
            return None
        if ident is not None:
            if not _NCNAME_RE.match(ident):
                self._error(f"rdf:ID is not a valid name: {ident!r}")
            if self.base is None:
                self._error("rdf:ID requires xml:base")
            return self._resolve_ref("#" + ident)
        return self._resolve_ref(about)

    def _check_attrs(self, name: str, attrs: dict[str, str],
                     allowed: set[str]) -> bool:
        for key in attrs:
            if key == "xmlns" or key.startswith("xmlns:"):
                continue
            if key not in allowed:
                self._unsupported(f"attribute {key} on {name}")
                return False
        return True

    # ------------------------------------------------------------------
    # element dispatch

    def _dispatch_start(self, name: str, attrs: dict[str, str], top: dict) -> None:
        kind = top["kind"]
        if kind == "doc":
            self._start_root(name, attrs)
        elif kind == "root":
            self._start_toplevel(name, attrs)
        elif kind == "header":
            self._start_in_header(name, attrs, top)
        elif kind == "class":
            self._start_in_class(name, attrs, top)
        elif kind in ("objprop", "dtprop"):
            self._start_in_property(name, attrs, top)
        elif kind == "individual":
            self._start_in_individual(name, attrs, top)
        elif kind in ("text", "empty"):
            parent = top["construct"]
            top["poisoned"] = True
            self._unsupported(f"nested element {name} inside {parent}")
        else:  # pragma: no cover - defensive
            self._error(f"unexpected element {name}")

    def _start_root(self, name: str, attrs: dict[str, str]) -> None:
        iri = self._resolve_qname(name)
        if iri != RDF_NS + "RDF":
            self._error(f"expected rdf:RDF document element, got {name}")
        base = attrs.get("xml:base")
        if base is not None:
            self.base = base
        if not self._check_attrs(name, attrs, {"xml:base"}):
            self._error("unsupported attributes on rdf:RDF")
        self.stack.append({"kind": "root"})

    def _start_toplevel(self, name: str, attrs: dict[str, str]) -> None:
        iri = self._resolve_qname(name)
        if iri is None:
            self._unsupported(f"element {name} with no resolvable namespace")
            return
        pos = self._pos()
        if iri == OWL_NS + "Ontology":
            if not self._check_attrs(name, attrs, {"rdf:about", "rdf:ID"}):
                return
            subject = None
            if "rdf:about" in attrs or "rdf:ID" in attrs:
                subject = self._subject_from_attrs(name, attrs)
                if subject is None and self.stack[-1]["kind"] == "skip":
                    return
            self.stack.append({"kind": "header", "iri": subject,
                               "comments": [], "pos": pos})
        elif iri == OWL_NS + "Class":
            if not self._check_attrs(name, attrs, {"rdf:about", "rdf:ID",
                                                   "seg:external"}):
                return
            subject = self._subject_from_attrs(name, attrs)
            if subject is None:
                return
            ext_raw = attrs.get("seg:external", "false")
            if ext_raw not in ("true", "false"):
                self._unsupported(f"seg:external value {ext_raw!r}")
                return
            self.stack.append({"kind": "class", "iri": subject, "supers": [],
                               "external": ext_raw == "true", "pos": pos})
        elif iri in (OWL_NS + "ObjectProperty", OWL_NS + "DatatypeProperty"):
            if not self._check_attrs(name, attrs, {"rdf:about", "rdf:ID"}):
                return
            subject = self._subject_from_attrs(name, attrs)
            if subject is None:
                return
            kind = "objprop" if iri == OWL_NS + "ObjectProperty" else "dtprop"
            self.stack.append({"kind": kind, "iri": subject, "domain": [],
                               "range": [], "pos": pos})
        elif iri.startswith((RDF_NS, RDFS_NS, OWL_NS, SEG_NS)):
            self._unsupported(f"element {name}")
        else:
            if not self._check_attrs(name, attrs, {"rdf:about", "rdf:ID"}):
                return
            subject = self._subject_from_attrs(name, attrs)
            if subject is None:
                return
            self.stack.append({"kind": "individual", "iri": subject,
                               "types": [iri], "data": [], "objs": [],
                               "pos": pos})

    def _start_in_header(self, name: str, attrs: dict[str, str], top: dict) -> None:
        iri = self._resolve_qname(name)
        if iri != RDFS_NS + "comment":
            self._unsupported(f"element {name} inside owl:Ontology")
            return
        if not self._check_attrs(name, attrs, set()):
            return
        self.stack.append({"kind": "text", "construct": name, "chunks": [],
                           "target": ("comment", top), "poisoned": False,
                           "pos": self._pos()})

    def _start_in_class(self, name: str, attrs: dict[str, str], top: dict) -> None:
        iri = self._resolve_qname(name)
        if iri != RDFS_NS + "subClassOf":
            self._unsupported(f"element {name} inside owl:Class")
            return
        resource = attrs.get("rdf:resource")
        if resource is None or not self._check_attrs(name, attrs, {"rdf:resource"}):
            if resource is None:
                self._unsupported("rdfs:subClassOf without rdf:resource")
            return
        top["supers"].append(self._resolve_ref(resource))
        self.stack.append({"kind": "empty", "construct": name, "poisoned": False,
                           "target": None})

    def _start_in_property(self, name: str, attrs: dict[str, str], top: dict) -> None:
        iri = self._resolve_qname(name)
        slot = {RDFS_NS + "domain": "domain", RDFS_NS + "range": "range"}.get(iri)
        if slot is None:
            self._unsupported(f"element {name} inside a property definition")
            return
        resource = attrs.get("rdf:resource")
        if resource is None or not self._check_attrs(name, attrs, {"rdf:resource"}):
            if resource is None:
                self._unsupported(f"{name} without rdf:resource")
            return
        if top[slot]:
            if self.opts.strict:
                self._error(f"multiple rdfs:{slot} on one property")
            self._warn(f"extra rdfs:{slot}")
        else:
            top[slot].append(self._resolve_ref(resource))
        self.stack.append({"kind": "empty", "construct": name, "poisoned": False,
                           "target": None})

    def _start_in_individual(self, name: str, attrs: dict[str, str],
                             top: dict) -> None:
        iri = self._resolve_qname(name)
        if iri is None:
            self._unsupported(f"element {name} with no resolvable namespace")
            return
        if iri == RDF_NS + "type":
            resource = attrs.get("rdf:resource")
            if resource is None or not self._check_attrs(name, attrs,
                                                         {"rdf:resource"}):
                if resource is None:
                    self._unsupported("rdf:type without rdf:resource")
                return
            top["types"].append(self._resolve_ref(resource))
            self.stack.append({"kind": "empty", "construct": name,
                               "poisoned": False, "target": None})
            return
        if iri.startswith((RDF_NS, RDFS_NS, OWL_NS, SEG_NS)):
            self._unsupported(f"element {name} inside an individual")
            return
        resource = attrs.get("rdf:resource")
        datatype = attrs.get("rdf:datatype")
        if resource is not None and datatype is None:
            if not self._check_attrs(name, attrs, {"rdf:resource"}):
                return
            top["objs"].append((iri, self._resolve_ref(resource)))
            self.stack.append({"kind": "empty", "construct": name,
                               "poisoned": False, "target": None})
            return
        if datatype is not None and resource is None:
            if not self._check_attrs(name, attrs, {"rdf:datatype"}):
                return
            tag = XSD_TO_TAG.get(datatype)
            if tag is None:
                self._unsupported(f"datatype {datatype} on {name}")
                return
            self.stack.append({"kind": "text", "construct": name, "chunks": [],
                               "target": ("data", top, iri, tag),
                               "poisoned": False, "pos": self._pos()})
            return
        self._unsupported(
            f"property element {name} needs exactly one of rdf:resource or rdf:datatype")

    # ------------------------------------------------------------------
    # commits (run at EndElement, after children)

    def _commit(self, top: dict) -> None:
        kind = top["kind"]
        if kind == "empty":
            return
        if kind == "text":
            if top["poisoned"]:
                return
            text = "".join(top["chunks"])
            target = top["target"]
            if target[0] == "comment":
                target[1]["comments"].append(text)
            else:
                _, owner, prop, tag = target
                owner["data"].append((prop, tag, text, top["pos"]))
            return
        if kind == "header":
            if self.header is not None:
                if self.opts.strict:
                    self._error("duplicate owl:Ontology header", top["pos"])
                self._warn("duplicate owl:Ontology header", top["pos"])
                return
            self.header = top
            return
        if kind == "class":
            self._commit_named(self.raw_classes, top, "owl:Class")
        elif kind == "objprop":
            if self._require_domain_range(top, "owl:ObjectProperty"):
                self._commit_named(self.raw_obj_props, top, "owl:ObjectProperty")
        elif kind == "dtprop":
            if self._require_domain_range(top, "owl:DatatypeProperty"):
                rng = top["range"][0]
                tag = XSD_TO_TAG.get(rng)
                if tag is None:
                    self._unsupported(f"datatype property range {rng}",
                                      top["pos"], skip=False)
                    return
                top["range"] = [tag]
                self._commit_named(self.raw_dt_props, top, "owl:DatatypeProperty")
        elif kind == "individual":
            self._commit_named(self.raw_individuals, top, "individual")

    def _require_domain_range(self, top: dict, what: str) -> bool:
        for slot in ("domain", "range"):
            if not top[slot]:
                if self.opts.strict:
                    self._error(f"{what} {top['iri']} has no rdfs:{slot}",
                                top["pos"])
                self._warn(f"{what} without rdfs:{slot}", top["pos"])
                return False
        return True

    def _commit_named(self, store: dict[str, dict], top: dict, what: str) -> None:
        iri = top["iri"]
        if iri in store:
            if self.opts.strict:
                self._error(f"duplicate declaration of {iri}", top["pos"])
            self._warn(f"duplicate {what} {iri}", top["pos"])
            return
        store[iri] = top
        self.positions.setdefault(iri, top["pos"])

    # ------------------------------------------------------------------
    # model assembly

    def finalize(self) -> Ontology:
        header = OntologyHeader()
        if self.header is not None:
            header = OntologyHeader(self.header["iri"],
                                    tuple(self.header["comments"]))
        namespaces = NamespaceMap(dict(self.flat_bindings), self.base)

        classes = {}
        for iri, raw in self.raw_classes.items():
            supers = [s for s in raw["supers"] if s != iri]
            if len(supers) != len(raw["supers"]):
                if self.opts.strict:
                    self._error(f"class {iri} is its own superclass", raw["pos"])
                self._warn(f"self superclass on {iri}", raw["pos"])
            classes[iri] = ClassDef(iri, tuple(supers), raw["external"])
        obj_props = {iri: ObjectPropertyDef(iri, raw["domain"][0], raw["range"][0])
                     for iri, raw in self.raw_obj_props.items()}
        dt_props = {iri: DatatypePropertyDef(iri, raw["domain"][0], raw["range"][0])
                    for iri, raw in self.raw_dt_props.items()}
        individuals = {}
        for iri, raw in self.raw_individuals.items():
            data = []
            for prop, tag, text, pos in raw["data"]:
                try:
                    lit = Literal(text, tag)
                except ValueError as exc:
                    if self.opts.strict:
                        self._error(str(exc), pos)
                    self._warn(f"ill-formed {tag} literal on {iri}", pos)
                    continue
                data.append((prop, lit))
            individuals[iri] = Individual(iri, tuple(raw["types"]), tuple(data),
                                          tuple(raw["objs"]))

        onto = Ontology(header, namespaces, classes, obj_props, dt_props,
                        individuals)
        violations = onto.validate()
        if not violations:
            return onto
        if self.opts.strict:
            first = violations[0]
            line, col = self.positions.get(first.subject, (None, None))
            raise ParseError(str(first), line, col)
        return self._repair(onto)

    def _repair(self, onto: Ontology) -> Ontology:
        """Lenient cleanup: drop the minimal offending pieces, warning once
        per drop.  Structural faults (cycles, duplicate IRIs) still raise."""
        classes = {}
        for iri in sorted(onto.classes):
            cdef = onto.classes[iri]
            supers = tuple(s for s in cdef.super_classes if s in onto.classes)
            for s in cdef.super_classes:
                if s not in onto.classes:
                    self._warn(f"subclass link {iri} -> {s}",
                               self.positions.get(iri, (0, 0)))
            classes[iri] = ClassDef(iri, supers, cdef.external)

        obj_props = {}
        for iri in sorted(onto.object_properties):
            pdef = onto.object_properties[iri]
            if pdef.domain in classes and pdef.range in classes:
                obj_props[iri] = pdef
            else:
                self._warn(f"property {iri} with undeclared domain/range",
                           self.positions.get(iri, (0, 0)))
        dt_props = {}
        for iri in sorted(onto.datatype_properties):
            ddef = onto.datatype_properties[iri]
            if ddef.domain in classes:
                dt_props[iri] = ddef
            else:
                self._warn(f"property {iri} with undeclared domain",
                           self.positions.get(iri, (0, 0)))

        surviving: dict[str, tuple[str, ...]] = {}
        for iri in sorted(onto.individuals):
            ind = onto.individuals[iri]
            types = tuple(t for t in ind.types if t in classes)
            for t in ind.types:
                if t not in classes:
                    self._warn(f"type {t} on {iri}",
                               self.positions.get(iri, (0, 0)))
            if types:
                surviving[iri] = types
            else:
                self._warn(f"individual {iri} left without a type",
                           self.positions.get(iri, (0, 0)))

        individuals = {}
        for iri in sorted(surviving):
            ind = onto.individuals[iri]
            pos = self.positions.get(iri, (0, 0))
            data = []
            for prop, lit in ind.data_assertions:
                ddef = dt_props.get(prop)
                if ddef is None or lit.datatype != ddef.range:
                    self._warn(f"data assertion {prop} on {iri}", pos)
                else:
                    data.append((prop, lit))
            objs = []
            for prop, target in ind.object_assertions:
                if prop not in obj_props or target not in surviving:
                    self._warn(f"object assertion {prop} on {iri}", pos)
                else:
                    objs.append((prop, target))
            individuals[iri] = Individual(iri, surviving[iri], tuple(data),
                                          tuple(objs))

        repaired = Ontology(onto.header, onto.namespaces, classes, obj_props,
                            dt_props, individuals)
        remaining = repaired.validate()
        if remaining:
            first = remaining[0]
            line, col = self.positions.get(first.subject, (None, None))
            raise ParseError(str(first), line, col)
        return repaired


def parse(data: bytes | str,
          opts: ParseOptions = ParseOptions()) -> tuple[Ontology, list[ParseWarning]]:
    """Read one RDF/XML document into an :class:`Ontology`.

    Returns the ontology and the list of lenient-mode warnings (always
    empty in strict mode, which raises :class:`ParseError` instead).
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    p = _Parser(opts)
    try:
        p.xp.Parse(data, True)
    except expat.ExpatError as exc:
        raise ParseError(expat.errors.messages[exc.code],
                         exc.lineno, exc.offset + 1) from exc
    onto = p.finalize()
    return onto, p.warnings


# ----------------------------------------------------------------------
# serialization


def _esc_text(value: str) -> str:
    value = value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    return value.replace("\r", "&#xD;")


def _esc_attr(value: str) -> str:
    value = _esc_text(value).replace('"', "&quot;")
    return value.replace("\n", "&#xA;").replace("\t", "&#x9;")


def _qname(iri: str, onto: Ontology, role: str) -> str:
    parts = compress_qname(iri, onto.namespaces)
    if parts is None:
        raise ValueError(
            f"cannot serialize {role} {iri}: no bound namespace covers it")
    prefix, local = parts
    return local if prefix == "" else f"{prefix}:{local}"


def serialize(o: Ontology) -> bytes:
    """Write `o` as canonical RDF/XML (UTF-8 bytes).

    Output is a pure function of the model: equal ontologies serialize to
    identical bytes.  Requires a valid ontology (in particular, every
    class and property IRI must compress to a QName under the bound
    namespaces).
    """
    ns = o.namespaces
    out: list[str] = ['<?xml version="1.0" encoding="UTF-8"?>']

    root_attrs = []
    if "" in ns.bindings:
        root_attrs.append(f'xmlns="{_esc_attr(ns.bindings[""])}"')
    for prefix in sorted(p for p in ns.bindings if p):
        root_attrs.append(f'xmlns:{prefix}="{_esc_attr(ns.bindings[prefix])}"')
    if ns.base is not None:
        root_attrs.append(f'xml:base="{_esc_attr(ns.base)}"')
    sep = "\n" + " " * 9
    out.append(f'<rdf:RDF {sep.join(root_attrs)}>')

    if o.header.iri is not None or o.header.comments:
        about = (f' rdf:about="{_esc_attr(o.header.iri)}"'
                 if o.header.iri is not None else "")
        if o.header.comments:
            out.append(f'  <owl:Ontology{about}>')
            for comment in o.header.comments:
                out.append(f'    <rdfs:comment>{_esc_text(comment)}</rdfs:comment>')
            out.append('  </owl:Ontology>')
        else:
            out.append(f'  <owl:Ontology{about}/>')

    for iri in sorted(o.classes):
        cdef = o.classes[iri]
        ext = ' seg:external="true"' if cdef.external else ""
        open_tag = f'  <owl:Class rdf:about="{_esc_attr(iri)}"{ext}'
        if not cdef.super_classes:
            out.append(open_tag + "/>")
            continue
        out.append(open_tag + ">")
        for sup in cdef.super_classes:
            out.append(f'    <rdfs:subClassOf rdf:resource="{_esc_attr(sup)}"/>')
        out.append('  </owl:Class>')

    for iri in sorted(o.object_properties):
        pdef = o.object_properties[iri]
        out.append(f'  <owl:ObjectProperty rdf:about="{_esc_attr(iri)}">')
        out.append(f'    <rdfs:domain rdf:resource="{_esc_attr(pdef.domain)}"/>')
        out.append(f'    <rdfs:range rdf:resource="{_esc_attr(pdef.range)}"/>')
        out.append('  </owl:ObjectProperty>')

    for iri in sorted(o.datatype_properties):
        ddef = o.datatype_properties[iri]
        out.append(f'  <owl:DatatypeProperty rdf:about="{_esc_attr(iri)}">')
        out.append(f'    <rdfs:domain rdf:resource="{_esc_attr(ddef.domain)}"/>')
        out.append(f'    <rdfs:range rdf:resource="{_esc_attr(TAG_TO_XSD[ddef.range])}"/>')
        out.append('  </owl:DatatypeProperty>')

    for iri in sorted(o.individuals):
        ind = o.individuals[iri]
        tag = _qname(ind.types[0], o, "type")
        body: list[str] = []
        for extra in ind.types[1:]:
            body.append(f'    <rdf:type rdf:resource="{_esc_attr(extra)}"/>')
        for prop, lit in ind.data_assertions:
            pq = _qname(prop, o, "property")
            dt = TAG_TO_XSD[lit.datatype]
            body.append(f'    <{pq} rdf:datatype="{_esc_attr(dt)}">'
                        f'{_esc_text(lit.lexical)}</{pq}>')
        for prop, target in ind.object_assertions:
            pq = _qname(prop, o, "property")
            body.append(f'    <{pq} rdf:resource="{_esc_attr(target)}"/>')
        open_tag = f'  <{tag} rdf:about="{_esc_attr(iri)}"'
        if not body:
            out.append(open_tag + "/>")
            continue
        out.append(open_tag + ">")
        out.extend(body)
        out.append(f'  </{tag}>')

    out.append('</rdf:RDF>')
    return ("\n".join(out) + "\n").encode("utf-8")
