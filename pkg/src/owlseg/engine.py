"""Bulk filter evaluation over an integer-interned index.

Horizontal segmentation evaluates one filter against every individual.
Instead of walking the model per individual, this module interns IRIs as
integers once (:class:`OntologyIndex`), turns each atom into a flat table
scan producing a byte mask, and combines masks with boolean kernels.
Distinct literal values are compared in Python and cached as a verdict
table, so kernels never reimplement comparison semantics and results are
exactly those of :func:`owlseg.filters.evaluate`.

The kernels come from the compiled `_speedups` extension when it built,
else from `_kernels_py`.  Set ``OWLSEG_NO_SPEEDUPS=1`` before import to
force the pure-Python kernels.
"""

from __future__ import annotations

import os
from array import array

from .filters import (
    And,
    BoundData,
    BoundObject,
    BoundPath,
    BoundType,
    FalseFilter,
    FilterExpr,
    Not,
    Or,
    TrueFilter,
    _compare,
    bind,
)
from .model import Individual, Iri, Ontology, typed_value

if os.environ.get("OWLSEG_NO_SPEEDUPS"):
    from . import _kernels_py as _kernels
    _BACKEND = "pure"
else:
    try:
        from . import _speedups as _kernels  # type: ignore[attr-defined]
        _BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _kernels
        _BACKEND = "pure"


def backend_name() -> str:
    """Which kernel set is active: `compiled` or `pure`."""
    return _BACKEND


class OntologyIndex:
    """Flat integer tables for one ontology's instance level.

    Individuals get ids 0..n-1 in IRI order.  Object-assertion targets
    that are not declared individuals still get node ids past n, so an
    atom naming such a target behaves exactly like the per-individual
    evaluator instead of crashing a kernel with an out-of-range id.
    """

    def __init__(self, o: Ontology):
        self.individual_iris: list[Iri] = sorted(o.individuals)
        self.node_id: dict[Iri, int] = {
            iri: i for i, iri in enumerate(self.individual_iris)}
        self.size = len(self.individual_iris)

        class_iris = sorted(o.classes)
        self.class_id = {iri: i for i, iri in enumerate(class_iris)}
        self.n_classes = len(class_iris)

        offsets = array("i", [0])
        codes = array("i")
        obj_rows: dict[Iri, tuple[list[int], list[int]]] = {}
        dat_rows: dict[Iri, tuple[list[int], list[int], dict]] = {}
        for i, iri in enumerate(self.individual_iris):
            ind: Individual = o.individuals[iri]
            for t in ind.types:
                codes.append(self.class_id[t])
            offsets.append(len(codes))
            for prop, target in ind.object_assertions:
                rows = obj_rows.setdefault(prop, ([], []))
                rows[0].append(i)
                rows[1].append(self._intern(target))
            for prop, lit in ind.data_assertions:
                src, code, value_codes = dat_rows.setdefault(prop, ([], [], {}))
                value = typed_value(lit)
                src.append(i)
                code.append(value_codes.setdefault(value, len(value_codes)))
        self.type_offsets = offsets
        self.type_codes = codes
        self.n_nodes = len(self.node_id)

        self.object_tables = {
            prop: (array("i", src), array("i", tgt))
            for prop, (src, tgt) in obj_rows.items()}
        self.data_tables = {}
        for prop, (src, code, value_codes) in dat_rows.items():
            values: list = [None] * len(value_codes)
            for value, c in value_codes.items():
                values[c] = value
            self.data_tables[prop] = (array("i", src), array("i", code),
                                      tuple(values))

    def _intern(self, iri: Iri) -> int:
        nid = self.node_id.get(iri)
        if nid is None:
            nid = len(self.node_id)
            self.node_id[iri] = nid
        return nid


def _run(bound, idx: OntologyIndex, kernels=_kernels) -> bytearray:
    """Evaluate a bound filter tree into a byte mask over individuals."""
    n = idx.size
    if isinstance(bound, TrueFilter):
        return bytearray(b"\x01") * n
    if isinstance(bound, FalseFilter):
        return bytearray(n)
    if isinstance(bound, Not):
        mask = _run(bound.child, idx, kernels)
        if n:
            kernels.mask_not(mask)
        return mask
    if isinstance(bound, And):
        mask = _run(bound.children[0], idx, kernels)
        for child in bound.children[1:]:
            if n:
                kernels.mask_and(mask, _run(child, idx, kernels))
        return mask
    if isinstance(bound, Or):
        mask = _run(bound.children[0], idx, kernels)
        for child in bound.children[1:]:
            if n:
                kernels.mask_or(mask, _run(child, idx, kernels))
        return mask
    if isinstance(bound, BoundData):
        mask = bytearray(n)
        table = idx.data_tables.get(bound.property)
        if table is not None:
            src, code, values = table
            sat = bytes(
                1 if _compare(bound.op, value, bound.value) else 0
                for value in values)
            kernels.scan_data_atom(src, code, sat, mask)
        return mask
    if isinstance(bound, BoundObject):
        mask = bytearray(n)
        table = idx.object_tables.get(bound.property)
        target = idx.node_id.get(bound.target)
        if table is not None and target is not None:
            kernels.scan_object_atom(table[0], table[1], target, mask)
        return mask
    if isinstance(bound, BoundPath):
        target = idx.node_id.get(bound.target)
        if target is None:
            return bytearray(n)
        sat = bytearray(idx.n_nodes)
        sat[target] = 1
        for hop in reversed(bound.path):
            out = bytearray(idx.n_nodes)
            table = idx.object_tables.get(hop)
            if table is not None:
                kernels.path_step(table[0], table[1], sat, out)
            sat = out
        return bytearray(sat[:n])
    if isinstance(bound, BoundType):
        mask = bytearray(n)
        if n:
            match = bytearray(idx.n_classes)
            for cls in bound.matches:
                match[idx.class_id[cls]] = 1
            kernels.scan_types(idx.type_offsets, idx.type_codes, bytes(match),
                               mask)
        return mask
    raise TypeError(f"not a bound node: {bound!r}")


def select_individuals(o: Ontology, f: FilterExpr) -> list[Iri]:
    """IRIs of the individuals in `o` satisfying `f`, sorted.

    Binds the whole filter first, so schema problems raise EvalError
    before any individual is examined.
    """
    bound = bind(f, o)
    idx = OntologyIndex(o)
    mask = _run(bound, idx)
    return [iri for i, iri in enumerate(idx.individual_iris) if mask[i]]
