import random
from dataclasses import replace

import pytest

from owlseg.filters import (
    EvalError,
    FalseFilter,
    TrueFilter,
    parse_filter,
)
from owlseg.model import ClassDef, Individual, Literal, Ontology, copy_structure
from owlseg.segment import (
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

from conftest import n
from corruption import corrupt_ontology
from oracles import purify_rebuild, random_filter, two_hop_select

TABLE_CLASSES = frozenset(
    n(x) for x in ("Person", "Man", "Woman", "City", "Country", "Email"))
TABLE_OPROPS = frozenset(
    n(x) for x in ("hasAsFather", "hasAsMother", "livesIn", "hasEmail"))
TABLE_DPROPS = frozenset(
    n(x) for x in ("lastName", "firstName", "dateOfBirth", "personAddress"))


class TestSegmentSpec:
    def test_keep_sets_coerced(self):
        spec = SegmentSpec(keep_classes=[n("Person"), n("Man")])
        assert spec.keep_classes == frozenset({n("Person"), n("Man")})

    def test_needs_an_axis(self):
        with pytest.raises(ValueError):
            SegmentSpec()
        SegmentSpec(filter=TrueFilter())  # filter alone is enough

    def test_bridge_policy_checked(self):
        with pytest.raises(ValueError):
            SegmentSpec(keep_classes=[n("Person")], bridge_policy="sever")


class TestPurgeReport:
    def test_empty_flag(self):
        assert PurgeReport().empty
        assert not PurgeReport(removed_individuals=(n("x"),)).empty

    def test_combine_unions_and_sorts(self):
        a = PurgeReport(((n("b"), n("p"), n("t")),), ((n("b"), n("q")),),
                        (n("z"),))
        b = PurgeReport(((n("a"), n("p"), n("t")),), ((n("b"), n("q")),),
                        (n("y"),))
        both = a.combine(b)
        assert both.removed_object_assertions == (
            (n("a"), n("p"), n("t")), (n("b"), n("p"), n("t")))
        assert both.removed_data_assertions == ((n("b"), n("q")),)
        assert both.removed_individuals == (n("y"), n("z"))


class TestPopulate:
    def test_copies_verbatim(self, citizen300):
        shell = copy_structure(citizen300)
        assert shell.individuals == {}
        picked = sorted(citizen300.individuals)[:5]
        out = populate(shell, citizen300, picked)
        assert sorted(out.individuals) == picked
        for iri in picked:
            assert out.individuals[iri] is citizen300.individuals[iri]

    def test_unknown_individual(self, citizen300):
        with pytest.raises(UnknownEntityError):
            populate(copy_structure(citizen300), citizen300,
                     [n("personZZZ")])


class TestPurify:
    def test_clean_fixture_untouched(self, citizen300):
        out, report = purify(citizen300)
        assert report.empty
        assert out == citizen300

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_oracle_on_corrupted_fixture(self, citizen300, seed):
        broken = corrupt_ontology(citizen300, random.Random(seed))
        out, report = purify(broken)
        rebuilt, obj, dat, inds = purify_rebuild(broken)
        assert out == rebuilt
        assert set(report.removed_object_assertions) == obj
        assert set(report.removed_data_assertions) == dat
        assert set(report.removed_individuals) == inds
        assert out.validate() == []

    @pytest.mark.parametrize("seed", (1, 5, 9))
    def test_idempotent(self, citizen300, seed):
        broken = corrupt_ontology(citizen300, random.Random(seed))
        once, _ = purify(broken)
        twice, second = purify(once)
        assert second.empty
        assert twice == once

    def test_assertion_removal_does_not_cascade(self):
        NS = "http://t.example/c#"
        o = Ontology(
            classes={NS + "A": ClassDef(NS + "A")},
            object_properties={},
            individuals={
                NS + "a": Individual(NS + "a", (NS + "A",), (),
                                     ((NS + "link", NS + "b"),)),
                NS + "b": Individual(NS + "b", (NS + "Ghost",))})
        out, report = purify(o)
        # b goes (no surviving type); a stays despite losing its link
        assert sorted(out.individuals) == [NS + "a"]
        assert report.removed_individuals == (NS + "b",)
        assert report.removed_object_assertions == (
            (NS + "a", NS + "link", NS + "b"),)
        again, second = purify(out)
        assert second.empty and again == out

    def test_data_pairs_deduplicated(self):
        NS = "http://t.example/c#"
        o = Ontology(
            classes={NS + "A": ClassDef(NS + "A")},
            individuals={NS + "a": Individual(
                NS + "a", (NS + "A",),
                ((NS + "gone", Literal("1", "integer")),
                 (NS + "gone", Literal("2", "integer"))))})
        _, report = purify(o)
        assert report.removed_data_assertions == ((NS + "a", NS + "gone"),)


class TestHorizontal:
    def test_true_filter_is_identity(self, citizen300):
        out, report = segment_horizontal(citizen300, TrueFilter())
        assert report.empty
        assert out == citizen300

    def test_false_filter_empties_instances(self, citizen300):
        out, report = segment_horizontal(citizen300, FalseFilter())
        assert out.individuals == {}
        assert out.classes == citizen300.classes
        assert out.object_properties == citizen300.object_properties
        assert report.empty  # unselected is not purged

    def test_city_selection_count(self, citizen1000):
        o, allocation = citizen1000
        expr = parse_filter("livesIn = :City0", o.namespaces)
        out, report = segment_horizontal(o, expr)
        assert len(out.individuals) == allocation.count_for("City0")
        assert out.validate() == []
        # every purged link pointed at somebody who was not selected,
        # and City0 itself is such a somebody
        survivors = set(out.individuals)
        assert report.removed_object_assertions
        for src, _, target in report.removed_object_assertions:
            assert src in survivors and target not in survivors
        assert any(prop == n("livesIn") and target == n("City0")
                   for _, prop, target in report.removed_object_assertions)

    def test_schema_survives_untouched(self, citizen300):
        expr = parse_filter("type = :Woman", citizen300.namespaces)
        out, _ = segment_horizontal(citizen300, expr)
        assert copy_structure(out) == copy_structure(citizen300)
        assert all(i.types == (n("Woman"),)
                   for i in out.individuals.values())

    def test_stronger_filter_selects_subset(self, citizen300):
        weak = parse_filter("type = :Man", citizen300.namespaces)
        strong = parse_filter("type = :Man and dateOfBirth < '1970-01-01'",
                              citizen300.namespaces)
        weak_out, _ = segment_horizontal(citizen300, weak)
        strong_out, _ = segment_horizontal(citizen300, strong)
        assert set(strong_out.individuals) <= set(weak_out.individuals)

    def test_path_filter_matches_two_hop_oracle(self, citizen300):
        expr = parse_filter("livesIn/isLocatedIn = :Country0",
                            citizen300.namespaces)
        out, _ = segment_horizontal(citizen300, expr)
        assert sorted(out.individuals) == two_hop_select(
            citizen300, n("livesIn"), n("isLocatedIn"), n("Country0"))

    def test_unknown_property_raises(self, citizen300):
        expr = parse_filter("salary > '10'", citizen300.namespaces)
        with pytest.raises(EvalError):
            segment_horizontal(citizen300, expr)


class TestVerticalProperties:
    def test_keep_everything_is_identity(self, citizen300):
        out, report = segment_vertical_properties(
            citizen300, citizen300.datatype_properties,
            citizen300.object_properties)
        assert report.empty and out == citizen300

    def test_keep_nothing_strips_assertions(self, citizen300):
        out, report = segment_vertical_properties(citizen300, (), ())
        assert out.datatype_properties == {} and out.object_properties == {}
        assert set(out.individuals) == set(citizen300.individuals)
        assert all(i.data_assertions == () and i.object_assertions == ()
                   for i in out.individuals.values())
        # every original assertion shows up in the report
        total_obj = sum(len(i.object_assertions)
                        for i in citizen300.individuals.values())
        assert len(report.removed_object_assertions) == total_obj
        assert out.validate() == []

    def test_keep_subset(self, citizen300):
        keep_dp = {n("lastName")}
        keep_op = {n("livesIn"), n("isLocatedIn")}
        out, report = segment_vertical_properties(citizen300, keep_dp, keep_op)
        assert set(out.datatype_properties) == keep_dp
        assert set(out.object_properties) == keep_op
        for ind in out.individuals.values():
            src = citizen300.individuals[ind.id]
            assert ind.data_assertions == tuple(
                a for a in src.data_assertions if a[0] in keep_dp)
            assert ind.object_assertions == tuple(
                a for a in src.object_assertions if a[0] in keep_op)
        dropped = {p for _, p in report.removed_data_assertions}
        assert dropped == set(citizen300.datatype_properties) - keep_dp

    def test_classes_and_hierarchy_untouched(self, citizen300):
        out, _ = segment_vertical_properties(citizen300, (), (n("livesIn"),))
        assert out.classes == citizen300.classes

    def test_unknown_names_rejected(self, citizen300):
        with pytest.raises(UnknownEntityError):
            segment_vertical_properties(citizen300, {n("salary")}, ())
        with pytest.raises(UnknownEntityError):
            # an object property offered as a datatype property
            segment_vertical_properties(citizen300, {n("livesIn")}, ())
        with pytest.raises(UnknownEntityError):
            segment_vertical_properties(citizen300, (), {n("lastName")})


class TestVerticalClasses:
    def test_drop_policy_cuts_outward_links(self, citizen300):
        out, _ = segment_vertical_classes(citizen300, TABLE_CLASSES, "drop")
        assert set(out.classes) == TABLE_CLASSES
        assert n("hasBankAccount") not in out.object_properties
        assert set(out.object_properties) == {
            n("hasAsFather"), n("hasAsMother"), n("livesIn"), n("hasEmail"),
            n("isLocatedIn")}
        assert out.validate() == []

    def test_stub_policy_keeps_outward_links(self, citizen300):
        out, _ = segment_vertical_classes(citizen300, TABLE_CLASSES, "stub")
        assert n("hasBankAccount") in out.object_properties
        bank = out.classes[n("BankAccount")]
        assert bank.external and bank.super_classes == ()
        full = {c for c, d in out.classes.items() if not d.external}
        assert full == TABLE_CLASSES
        assert out.validate() == []

    def test_instances_follow_their_classes(self, citizen300):
        out, report = segment_vertical_classes(citizen300, TABLE_CLASSES,
                                               "drop")
        gone_types = {n("BankAccount"), n("School"), n("Club"), n("Party")}
        expected_gone = {i.id for i in citizen300.individuals.values()
                         if set(i.types) <= gone_types}
        assert set(report.removed_individuals) == expected_gone
        assert set(out.individuals) == set(citizen300.individuals) - expected_gone

    def test_stub_classes_have_no_instances(self, citizen300):
        out, _ = segment_vertical_classes(citizen300, TABLE_CLASSES, "stub")
        stubbed = {c for c, d in out.classes.items() if d.external}
        for ind in out.individuals.values():
            assert not set(ind.types) & stubbed

    def test_keep_all_is_identity(self, citizen300):
        for policy in ("stub", "drop"):
            out, report = segment_vertical_classes(
                citizen300, citizen300.classes, policy)
            assert report.empty and out == citizen300

    def test_superclass_outside_keep(self, citizen300):
        stubbed, _ = segment_vertical_classes(citizen300, {n("Man")}, "stub")
        assert stubbed.classes[n("Man")].super_classes == (n("Person"),)
        assert stubbed.classes[n("Person")].external
        dropped, _ = segment_vertical_classes(citizen300, {n("Man")}, "drop")
        assert dropped.classes[n("Man")].super_classes == ()
        assert n("Person") not in dropped.classes
        for out in (stubbed, dropped):
            assert out.validate() == []
            # domain Person left the keep-set, so person properties go
            assert out.object_properties == {}
            assert out.datatype_properties == {}

    def test_unknown_class_rejected(self, citizen300):
        with pytest.raises(UnknownEntityError):
            segment_vertical_classes(citizen300, {n("Spaceship")})

    def test_bad_policy_rejected(self, citizen300):
        with pytest.raises(ValueError):
            segment_vertical_classes(citizen300, TABLE_CLASSES, "sever")


class TestHybrid:
    def spec(self, **kw) -> SegmentSpec:
        base = dict(keep_classes=TABLE_CLASSES,
                    keep_object_properties=TABLE_OPROPS,
                    keep_datatype_properties=TABLE_DPROPS)
        base.update(kw)
        return SegmentSpec(**base)

    def test_school_schema_shape(self, citizen300):
        out, _ = segment_hybrid(citizen300, self.spec(bridge_policy="drop"))
        assert set(out.classes) == TABLE_CLASSES
        person_props = {p for p, d in out.object_properties.items()
                        if d.domain == n("Person")}
        person_props |= {p for p, d in out.datatype_properties.items()
                         if d.domain == n("Person")}
        assert person_props == TABLE_OPROPS | TABLE_DPROPS
        assert out.validate() == []

    def test_equals_manual_staging(self, citizen300):
        spec = self.spec(bridge_policy="drop")
        out, report = segment_hybrid(citizen300, spec)
        mid, first = segment_vertical_classes(citizen300, TABLE_CLASSES,
                                              "drop")
        expect, second = segment_vertical_properties(
            mid,
            set(mid.datatype_properties) & TABLE_DPROPS,
            set(mid.object_properties) & TABLE_OPROPS)
        assert out == expect
        assert report == first.combine(second)

    def test_keep_property_cut_by_class_stage(self, citizen300):
        # hasBankAccount is a fine source property, but the class stage
        # removes it under drop policy; asking to keep it is not an error
        spec = self.spec(
            keep_object_properties=TABLE_OPROPS | {n("hasBankAccount")},
            bridge_policy="drop")
        out, _ = segment_hybrid(citizen300, spec)
        assert n("hasBankAccount") not in out.object_properties

    def test_unknown_keep_property_rejected(self, citizen300):
        with pytest.raises(UnknownEntityError):
            segment_hybrid(citizen300, self.spec(
                keep_object_properties=TABLE_OPROPS | {n("owns")}))

    def test_axis_requirements(self, citizen300):
        with pytest.raises(ValueError):
            segment_hybrid(citizen300,
                           SegmentSpec(keep_object_properties=TABLE_OPROPS))
        with pytest.raises(ValueError):
            segment_hybrid(citizen300,
                           SegmentSpec(keep_classes=TABLE_CLASSES))


class TestFullHybrid:
    def spec(self, o: Ontology, text: str, policy: str = "stub") -> SegmentSpec:
        return SegmentSpec(
            keep_classes=TABLE_CLASSES,
            keep_object_properties=TABLE_OPROPS,
            keep_datatype_properties=TABLE_DPROPS,
            filter=parse_filter(text, o.namespaces),
            bridge_policy=policy)

    def test_equals_staged_composition(self, citizen300):
        spec = self.spec(citizen300, "type = :Woman and livesIn = :City1")
        out, report = full_hybrid(citizen300, spec)
        mid, first = segment_hybrid(citizen300, replace(spec, filter=None))
        expect, second = segment_horizontal(mid, spec.filter)
        assert out == expect
        assert report == first.combine(second)
        assert out.validate() == []

    def test_filter_binds_against_segmented_schema(self, citizen300):
        # studiesIn is dropped by the property stage, so a filter using
        # it must fail loudly instead of matching nothing
        spec = self.spec(citizen300, "studiesIn = :school01")
        with pytest.raises(EvalError) as err:
            full_hybrid(citizen300, spec)
        assert err.value.kind == "unknown-property"

    def test_needs_filter(self, citizen300):
        with pytest.raises(ValueError):
            full_hybrid(citizen300, SegmentSpec(
                keep_classes=TABLE_CLASSES,
                keep_object_properties=TABLE_OPROPS,
                keep_datatype_properties=TABLE_DPROPS))

    def test_random_specs_stay_valid(self, citizen300):
        rng = random.Random(777)
        classes = sorted(citizen300.classes)
        for _ in range(6):
            keep = frozenset(rng.sample(classes, rng.randint(2, 8)))
            keep |= {n("Man"), n("Woman")}
            mid, _ = segment_vertical_classes(
                citizen300, keep, rng.choice(("stub", "drop")))
            spec = SegmentSpec(
                keep_classes=keep,
                keep_object_properties=frozenset(mid.object_properties),
                keep_datatype_properties=frozenset(mid.datatype_properties),
                filter=random_filter(rng, mid),
                bridge_policy="stub")
            out, _ = full_hybrid(citizen300, spec)
            assert out.validate() == []
