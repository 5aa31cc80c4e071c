from collections import Counter
from datetime import date

import pytest

from owlseg.fixtures import (
    CITIZEN_NS,
    Allocation,
    PopulationParams,
    build_citizen_schema,
    generate_population,
    generate_with_allocation,
)
from owlseg.rdfxml import serialize

from conftest import n

TEN_CLASSES = {"Person", "Man", "Woman", "City", "Country", "Email",
               "BankAccount", "School", "Club", "Party"}
PERSON_OPROPS = {"hasAsFather", "hasAsMother", "livesIn", "hasEmail",
                 "hasBankAccount", "studiesIn", "isClubMember",
                 "IsPartyMember"}
PERSON_DPROPS = {"lastName", "firstName", "dateOfBirth", "personAddress"}


class TestSchema:
    def test_classes(self, schema):
        assert set(schema.classes) == {n(x) for x in TEN_CLASSES}
        assert schema.classes[n("Man")].super_classes == (n("Person"),)
        assert schema.classes[n("Woman")].super_classes == (n("Person"),)
        roots = {c for c, d in schema.classes.items() if not d.super_classes}
        assert roots == {n(x) for x in TEN_CLASSES - {"Man", "Woman"}}
        assert not any(d.external for d in schema.classes.values())

    def test_person_has_twelve_properties(self, schema):
        person_props = {p for p, d in schema.object_properties.items()
                        if d.domain == n("Person")}
        person_props |= {p for p, d in schema.datatype_properties.items()
                         if d.domain == n("Person")}
        assert person_props == {n(x) for x in PERSON_OPROPS | PERSON_DPROPS}
        assert len(person_props) == 12

    def test_geography_link(self, schema):
        located = schema.object_properties[n("isLocatedIn")]
        assert located.domain == n("City")
        assert located.range == n("Country")

    def test_ranges(self, schema):
        assert schema.object_properties[n("hasAsFather")].range == n("Man")
        assert schema.object_properties[n("hasAsMother")].range == n("Woman")
        assert schema.datatype_properties[n("dateOfBirth")].range == "date"
        assert all(schema.datatype_properties[n(x)].range == "string"
                   for x in ("lastName", "firstName", "personAddress"))

    def test_clean_shell(self, schema):
        assert schema.individuals == {}
        assert schema.validate() == []
        assert schema.namespaces.bindings[""] == CITIZEN_NS


class TestParams:
    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            PopulationParams(n_individuals=-1)
        with pytest.raises(ValueError):
            PopulationParams(n_individuals=10, n_cities=2, n_countries=3)
        with pytest.raises(ValueError):
            PopulationParams(n_individuals=10, n_countries=0)
        with pytest.raises(ValueError):
            PopulationParams(n_individuals=10,
                             date_range=("2000-01-01", "1999-01-01"))

    def test_defaults(self):
        p = PopulationParams(n_individuals=5)
        assert (p.n_cities, p.n_countries, p.seed) == (4, 2, 0)


class TestDeterminism:
    def test_same_seed_same_bytes(self, schema):
        p = PopulationParams(n_individuals=80, seed=11)
        assert serialize(generate_population(schema, p)) == serialize(
            generate_population(schema, p))

    def test_different_seeds_differ(self, schema):
        a = generate_population(schema, PopulationParams(50, seed=1))
        b = generate_population(schema, PopulationParams(50, seed=2))
        assert a != b

    def test_allocation_is_deterministic(self, schema):
        p = PopulationParams(n_individuals=80, seed=11)
        assert (generate_with_allocation(schema, p)[1]
                == generate_with_allocation(schema, p)[1])

    def test_population_is_first_of_pair(self, schema):
        p = PopulationParams(n_individuals=30, seed=4)
        assert generate_population(schema, p) == generate_with_allocation(
            schema, p)[0]


class TestPopulationShape:
    def test_empty_population(self, schema):
        o = generate_population(schema, PopulationParams(0))
        types = Counter(t for i in o.individuals.values() for t in i.types)
        assert types == {n("City"): 4, n("Country"): 2}
        assert o.validate() == []

    def test_small_population_has_no_satellites(self, schema):
        o = generate_population(schema, PopulationParams(11, seed=3))
        types = {t for i in o.individuals.values() for t in i.types}
        assert types == {n("City"), n("Country"), n("Man"), n("Woman")}
        assert len(o.individuals) == 11 + 4 + 2

    def test_satellite_pool_sizes(self, citizen300):
        types = Counter(t for i in citizen300.individuals.values()
                        for t in i.types)
        assert types[n("BankAccount")] == 12
        assert types[n("School")] == 8
        assert types[n("Club")] == 6
        assert types[n("Party")] == 4
        assert types[n("Man")] + types[n("Woman")] == 300

    def test_emails_match_links(self, citizen300):
        emails = {i.id for i in citizen300.individuals.values()
                  if i.types == (n("Email"),)}
        linked = {t for i in citizen300.individuals.values()
                  for p, t in i.object_assertions if p == n("hasEmail")}
        assert linked == emails

    def test_validates(self, schema):
        o = generate_population(schema, PopulationParams(150, seed=5))
        assert o.validate() == []

    def test_custom_geography(self, schema):
        p = PopulationParams(60, n_cities=7, n_countries=3, seed=9)
        o, allocation = generate_with_allocation(schema, p)
        assert sum(1 for i in o.individuals.values()
                   if i.types == (n("City"),)) == 7
        assert allocation.located == tuple(
            (f"City{c}", f"Country{c % 3}") for c in range(7))
        for c in range(7):
            city = o.individuals[n(f"City{c}")]
            assert city.object_assertions == (
                (n("isLocatedIn"), n(f"Country{c % 3}")),)

    def test_parent_sex_respected(self, citizen300):
        for ind in citizen300.individuals.values():
            for prop, target in ind.object_assertions:
                if prop == n("hasAsFather"):
                    assert citizen300.individuals[target].types == (n("Man"),)
                if prop == n("hasAsMother"):
                    assert citizen300.individuals[target].types == (n("Woman"),)
                assert target != ind.id

    def test_birth_dates_in_range(self, schema):
        lo, hi = date(1980, 1, 1), date(1989, 12, 31)
        p = PopulationParams(40, seed=6, date_range=("1980-01-01",
                                                     "1989-12-31"))
        o = generate_population(schema, p)
        for ind in o.individuals.values():
            for prop, lit in ind.data_assertions:
                if prop == n("dateOfBirth"):
                    assert lo <= date.fromisoformat(lit.lexical) <= hi

    def test_addresses_name_home_city(self, citizen300):
        for ind in citizen300.individuals.values():
            homes = [t for p, t in ind.object_assertions if p == n("livesIn")]
            if not homes:
                continue
            address = next(lit.lexical for p, lit in ind.data_assertions
                           if p == n("personAddress"))
            city_local = homes[0][len(CITIZEN_NS):]
            assert city_local in address and "postal code" in address


class TestAllocation:
    def test_counts_match_reality(self, citizen1000):
        o, allocation = citizen1000
        actual = Counter()
        for ind in o.individuals.values():
            for prop, target in ind.object_assertions:
                if prop == n("livesIn"):
                    actual[target[len(CITIZEN_NS):]] += 1
        assert dict(allocation.per_city) == dict(actual)
        assert allocation.persons == 1000
        assert sum(c for _, c in allocation.per_city) == 1000

    def test_country_aggregation(self, citizen1000):
        _, allocation = citizen1000
        per_city = dict(allocation.per_city)
        located = dict(allocation.located)
        expect = Counter()
        for city, count in per_city.items():
            expect[located[city]] += count
        assert dict(allocation.per_country) == dict(expect)

    def test_count_for(self, citizen1000):
        _, allocation = citizen1000
        assert allocation.count_for("City0") == dict(
            allocation.per_city)["City0"]
        with pytest.raises(KeyError):
            allocation.count_for("Atlantis")

    def test_text_round_trip(self, citizen1000):
        _, allocation = citizen1000
        assert Allocation.from_text(allocation.to_text()) == allocation

    def test_text_rejects_junk(self):
        with pytest.raises(ValueError):
            Allocation.from_text("persons=3\nwhat is this\n")
