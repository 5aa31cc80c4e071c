"""End-to-end checks, one per shipped guarantee, each printing a verdict.

Run with plain pytest; the verdict lines bypass capture so the summary
is visible either way:

    criterion 1 PASS: round-trip fidelity ...
"""

import random
import time
from contextlib import contextmanager
from dataclasses import replace

import pytest

from owlseg.assembly import merge
from owlseg.cli import run
from owlseg.engine import select_individuals
from owlseg.filters import evaluate, parse_filter
from owlseg.fixtures import (
    PopulationParams,
    build_citizen_schema,
    generate_with_allocation,
)
from owlseg.model import copy_structure
from owlseg.rdfxml import parse, serialize
from owlseg.segment import (
    SegmentSpec,
    full_hybrid,
    populate,
    purify,
    segment_horizontal,
    segment_hybrid,
    segment_vertical_classes,
    segment_vertical_properties,
)

from conftest import n
from corruption import corrupt_ontology
from oracles import purify_rebuild, random_filter, two_hop_select

SIX_CLASSES = frozenset(
    n(x) for x in ("Person", "Man", "Woman", "City", "Country", "Email"))
EIGHT_PERSON_PROPS = frozenset(
    n(x) for x in ("hasAsFather", "hasAsMother", "lastName", "firstName",
                   "dateOfBirth", "livesIn", "personAddress", "hasEmail"))
QUARTER_FILTER = "livesIn = :City0 or type = :City or type = :Country"


@contextmanager
def verdict(capsys, number: int, title: str):
    notes: list[str] = []
    try:
        yield notes
    except BaseException:
        with capsys.disabled():
            print(f"criterion {number} FAIL: {title}")
        raise
    detail = f" ({'; '.join(notes)})" if notes else ""
    with capsys.disabled():
        print(f"criterion {number} PASS: {title}{detail}")


def instance_bytes(o) -> int:
    """Serialized size of the instance section alone."""
    return len(serialize(o)) - len(serialize(copy_structure(o)))


def test_criterion_1_round_trip_fidelity(capsys, schema):
    with verdict(capsys, 1, "round-trip fidelity, deterministic bytes") as notes:
        started = time.monotonic()
        ontologies = [schema]
        for i in range(20):
            p = PopulationParams(n_individuals=(i * 53) % 1001, seed=100 + i)
            ontologies.append(generate_with_allocation(schema, p)[0])
        for o in ontologies:
            data = serialize(o)
            assert serialize(o) == data
            back, warnings = parse(data)
            assert warnings == []
            assert back == o
            assert serialize(back) == data
        elapsed = time.monotonic() - started
        assert elapsed < 5.0
        notes.append(f"schema + 20 populations in {elapsed:.2f}s")


def test_criterion_2_horizontal_selection_count(capsys, citizen1000, tmp_path):
    with verdict(capsys, 2, "horizontal segment count matches the "
                            "generator's City0 allocation") as notes:
        o, allocation = citizen1000
        expected = allocation.count_for("City0")
        expr = parse_filter("livesIn = :City0", o.namespaces)
        seg, _ = segment_horizontal(o, expr)
        assert len(seg.individuals) == expected
        assert seg.validate() == []

        src = tmp_path / "pop.owl"
        out = tmp_path / "city0.owl"
        src.write_bytes(serialize(o))
        assert run(["hseg", str(src), "-o", str(out),
                    "--filter", "livesIn = :City0"]) == 0
        from_cli, _ = parse(out.read_bytes())
        assert from_cli == seg
        notes.append(f"{expected} of {len(o.individuals)} individuals, "
                     "library and CLI agree")


def test_criterion_3_path_filter_matches_two_hop_oracle(capsys, citizen1000):
    with verdict(capsys, 3, "path filter equals brute-force two-hop "
                            "oracle") as notes:
        o, _ = citizen1000
        expr = parse_filter("livesIn/isLocatedIn = :Country0", o.namespaces)
        got = select_individuals(o, expr)
        want = two_hop_select(o, n("livesIn"), n("isLocatedIn"), n("Country0"))
        assert got == want
        notes.append(f"{len(got)} matches")


def test_criterion_4_purification_invariants(capsys, schema):
    with verdict(capsys, 4, "purify removes exactly the oracle's dangling "
                            "set and is idempotent") as notes:
        bases = [generate_with_allocation(
            schema, PopulationParams(150, seed=s))[0] for s in (41, 42)]
        total_removed = 0
        for round_no in range(100):
            base = bases[round_no % 2]
            broken = corrupt_ontology(base, random.Random(round_no))
            out, report = purify(broken)
            rebuilt, obj, dat, inds = purify_rebuild(broken)
            assert out == rebuilt
            assert set(report.removed_object_assertions) == obj
            assert set(report.removed_data_assertions) == dat
            assert set(report.removed_individuals) == inds
            again, second = purify(out)
            assert second.empty and again == out
            total_removed += len(obj) + len(dat) + len(inds)
        notes.append(f"100 corrupted fixtures, {total_removed} removals "
                     "verified")


def test_criterion_5_reference_segment_shape(capsys, citizen1000):
    with verdict(capsys, 5, "hybrid segment has exactly the six classes "
                            "and eight Person properties") as notes:
        o, _ = citizen1000
        spec = SegmentSpec(
            keep_classes=SIX_CLASSES,
            keep_object_properties=frozenset(
                p for p in EIGHT_PERSON_PROPS if p in o.object_properties),
            keep_datatype_properties=frozenset(
                p for p in EIGHT_PERSON_PROPS if p in o.datatype_properties),
            bridge_policy="drop")
        seg, _ = segment_hybrid(o, spec)
        assert set(seg.classes) == SIX_CLASSES
        person_props = {p for p, d in seg.object_properties.items()
                        if d.domain == n("Person")}
        person_props |= {p for p, d in seg.datatype_properties.items()
                         if d.domain == n("Person")}
        assert person_props == EIGHT_PERSON_PROPS
        assert seg.validate() == []
        notes.append("6 classes, 8 Person properties, drop policy")


def test_criterion_6_merge_round_trips(capsys, citizen300):
    with verdict(capsys, 6, "segments merge back to the source") as notes:
        dps = sorted(citizen300.datatype_properties)
        ops = sorted(citizen300.object_properties)
        parts = [
            segment_vertical_properties(citizen300, dps[0::2], ops[0::2])[0],
            segment_vertical_properties(citizen300, dps[1::2], ops[1::2])[0]]
        assert merge(parts) == citizen300

        complement = frozenset(citizen300.classes) - SIX_CLASSES
        covers = [segment_vertical_classes(citizen300, SIX_CLASSES, "stub")[0],
                  segment_vertical_classes(citizen300, complement, "stub")[0]]
        reassembled = merge(covers)
        assert copy_structure(reassembled) == copy_structure(citizen300)
        notes.append("property partition deep-equal; class cover "
                     "schema-equal")


def test_criterion_7_size_reduction(capsys, citizen1000):
    with verdict(capsys, 7, "quarter-sized horizontal segment lands in "
                            "[0.20, 0.35] of the instance section") as notes:
        started = time.monotonic()
        o, _ = citizen1000
        expr = parse_filter(QUARTER_FILTER, o.namespaces)
        seg, _ = segment_horizontal(o, expr)

        picked = len(seg.individuals)
        total = len(o.individuals)
        assert 0.20 <= picked / total <= 0.30  # the "~25%" selection

        ratio = instance_bytes(seg) / instance_bytes(o)
        assert 0.20 <= ratio <= 0.35
        assert len(serialize(seg)) < len(serialize(o))
        elapsed = time.monotonic() - started
        assert elapsed < 5.0
        notes.append(f"{picked}/{total} individuals, instance-section "
                     f"ratio {ratio:.4f}, {elapsed:.2f}s")


def test_criterion_8_composition_law(capsys, schema):
    with verdict(capsys, 8, "full hybrid equals staged "
                            "vertical-then-horizontal composition") as notes:
        rng = random.Random(20268)
        populations = [generate_with_allocation(
            schema, PopulationParams(200, seed=s))[0] for s in (31, 32, 33, 34)]
        for round_no in range(20):
            src = populations[round_no % 4]
            keep_classes = frozenset(
                rng.sample(sorted(src.classes), rng.randint(2, 9)))
            keep_op = frozenset(
                rng.sample(sorted(src.object_properties), rng.randint(0, 9)))
            keep_dp = frozenset(
                rng.sample(sorted(src.datatype_properties), rng.randint(0, 4)))
            policy = rng.choice(("stub", "drop"))

            mid1, _ = segment_vertical_classes(src, keep_classes, policy)
            mid2, _ = segment_vertical_properties(
                mid1,
                set(mid1.datatype_properties) & keep_dp,
                set(mid1.object_properties) & keep_op)
            f = random_filter(rng, mid2)
            picked = [iri for iri in sorted(mid2.individuals)
                      if evaluate(f, mid2.individuals[iri], mid2)]
            staged, _ = purify(populate(copy_structure(mid2), mid2, picked))

            spec = SegmentSpec(keep_classes=keep_classes,
                               keep_object_properties=keep_op,
                               keep_datatype_properties=keep_dp,
                               filter=f, bridge_policy=policy)
            direct, _ = full_hybrid(src, spec)
            assert direct == staged
            assert direct.validate() == []
        notes.append("20 random specs over 4 seeded fixtures")
