"""The citizen ontology schema and seeded synthetic populations.

`build_citizen_schema` declares the ten classes and thirteen properties
of the running example: persons (men and women) with names, a birth
date, an address, a home city, parents, and optional links to emails,
bank accounts, schools, clubs and parties; cities sit in countries.

`generate_population` fills that schema with a population derived purely
from a 64-bit seed via a counter-based keyed hash, so the same
parameters always produce the same ontology, byte for byte.  The
generator also returns its own city allocation table, which tests use as
ground truth for selection counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from hashlib import blake2b

from .model import (
    ClassDef,
    DatatypePropertyDef,
    Individual,
    Iri,
    Literal,
    NamespaceMap,
    ObjectPropertyDef,
    Ontology,
    OntologyHeader,
)

CITIZEN_NS = "http://owlseg.example/citizen#"
CITIZEN_IRI = "http://owlseg.example/citizen"

# how much optional structure a person gets; probabilities per person
P_PARENT = 0.6        # chance of a father edge, and separately a mother edge
SAME_CITY_BIAS = 0.9  # chance a parent is drawn from the person's own city
P_EMAIL = 0.05
P_BANK = 0.08
P_SCHOOL = 0.06
P_CLUB = 0.05
P_PARTY = 0.03

_MALE = ("Adam", "Bilal", "Carl", "David", "Elias", "Farid", "George",
         "Hamid", "Igor", "Jamal", "Karim", "Lucas", "Mark", "Nabil",
         "Oscar", "Peter", "Quentin", "Rachid", "Samuel", "Tariq")
_FEMALE = ("Alice", "Basma", "Clara", "Dina", "Emma", "Farah", "Grace",
           "Hana", "Ines", "Julia", "Karima", "Leila", "Maria", "Nadia",
           "Olivia", "Paula", "Rania", "Salma", "Tara", "Vera")
_LAST = ("Alami", "Brown", "Cohen", "Diaz", "Evans", "Fassi", "Garcia",
         "Haddad", "Idrissi", "Johnson", "Khan", "Lopez", "Martin", "Nouri",
         "Okafor", "Perez", "Quinn", "Rossi", "Smith", "Tazi", "Umar",
         "Vidal", "Walker", "Ziani")
_STREETS = ("Olive", "Cedar", "Palm", "Maple", "Jasmine", "Saffron", "Atlas",
            "Harbor", "Garden", "Station", "Market", "Orchard", "Almond",
            "Mimosa", "Coral", "Summit")
_STREET_KINDS = ("Street", "Avenue", "Boulevard", "Road", "Lane")
_DISTRICTS = ("north", "south", "east", "west", "central")


def _c(local: str) -> Iri:
    return CITIZEN_NS + local


def build_citizen_schema() -> Ontology:
    """The citizen schema: ten classes, thirteen properties, no individuals."""
    classes = {}
    for local in ("Person", "City", "Country", "Email", "BankAccount",
                  "School", "Club", "Party"):
        classes[_c(local)] = ClassDef(_c(local))
    classes[_c("Man")] = ClassDef(_c("Man"), (_c("Person"),))
    classes[_c("Woman")] = ClassDef(_c("Woman"), (_c("Person"),))

    person = _c("Person")
    obj = {}
    for local, rng in (("hasAsFather", "Man"), ("hasAsMother", "Woman"),
                       ("livesIn", "City"), ("hasEmail", "Email"),
                       ("hasBankAccount", "BankAccount"),
                       ("studiesIn", "School"), ("isClubMember", "Club"),
                       ("IsPartyMember", "Party")):
        obj[_c(local)] = ObjectPropertyDef(_c(local), person, _c(rng))
    obj[_c("isLocatedIn")] = ObjectPropertyDef(_c("isLocatedIn"), _c("City"),
                                               _c("Country"))
    dt = {}
    for local, rng in (("lastName", "string"), ("firstName", "string"),
                       ("dateOfBirth", "date"), ("personAddress", "string")):
        dt[_c(local)] = DatatypePropertyDef(_c(local), person, rng)

    return Ontology(
        header=OntologyHeader(CITIZEN_IRI),
        namespaces=NamespaceMap({"": CITIZEN_NS}, CITIZEN_IRI),
        classes=classes,
        object_properties=obj,
        datatype_properties=dt,
        individuals={})


@dataclass(frozen=True)
class PopulationParams:
    n_individuals: int
    n_cities: int = 4
    n_countries: int = 2
    seed: int = 0
    date_range: tuple[str, str] = ("1940-01-01", "2009-12-31")

    def __post_init__(self) -> None:
        if self.n_individuals < 0:
            raise ValueError("n_individuals must be non-negative")
        if not 1 <= self.n_countries <= self.n_cities:
            raise ValueError("need n_cities >= n_countries >= 1")
        lo, hi = (date.fromisoformat(d) for d in self.date_range)
        if lo > hi:
            raise ValueError(f"empty date range {self.date_range}")


@dataclass(frozen=True)
class Allocation:
    """The generator's own record of where its persons live.

    per_city maps city local name to the number of persons with a
    livesIn assertion targeting it; per_country aggregates those counts;
    located records each city's country.
    """

    persons: int
    per_city: tuple[tuple[str, int], ...]
    per_country: tuple[tuple[str, int], ...]
    located: tuple[tuple[str, str], ...]

    def to_text(self) -> str:
        lines = [f"persons={self.persons}"]
        lines += [f"city:{name}={count}" for name, count in self.per_city]
        lines += [f"country:{name}={count}" for name, count in self.per_country]
        lines += [f"located:{city}={country}" for city, country in self.located]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Allocation":
        persons = 0
        per_city, per_country, located = [], [], []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            if key == "persons":
                persons = int(value)
            elif key.startswith("city:"):
                per_city.append((key[5:], int(value)))
            elif key.startswith("country:"):
                per_country.append((key[8:], int(value)))
            elif key.startswith("located:"):
                located.append((key[8:], value))
            else:
                raise ValueError(f"unrecognized allocation line: {line!r}")
        return Allocation(persons, tuple(per_city), tuple(per_country),
                          tuple(located))

    def count_for(self, city_local: str) -> int:
        for name, count in self.per_city:
            if name == city_local:
                return count
        raise KeyError(city_local)


class _Stream:
    """Deterministic value stream: blake2b keyed by the seed, fed labels."""

    def __init__(self, seed: int):
        self.key = (seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "big")

    def u64(self, *labels) -> int:
        text = "\x1f".join(str(x) for x in labels)
        return int.from_bytes(
            blake2b(text.encode(), digest_size=8, key=self.key).digest(), "big")

    def choice(self, seq, *labels):
        return seq[self.u64(*labels) % len(seq)]

    def chance(self, p: float, *labels) -> bool:
        return self.u64(*labels) < int(p * 2.0**64)


def generate_with_allocation(schema: Ontology, p: PopulationParams
                             ) -> tuple[Ontology, Allocation]:
    """Populate the citizen schema; also return the allocation table."""
    rng = _Stream(p.seed)
    width = max(4, len(str(p.n_individuals)))
    d_lo, d_hi = (date.fromisoformat(d) for d in p.date_range)
    span = (d_hi - d_lo).days

    individuals: dict[Iri, Individual] = {}

    def put(local: str, type_local: str, data=(), objs=()) -> Iri:
        iri = _c(local)
        individuals[iri] = Individual(iri, (_c(type_local),), tuple(data),
                                      tuple(objs))
        return iri

    country_local = [f"Country{k}" for k in range(p.n_countries)]
    city_local = [f"City{c}" for c in range(p.n_cities)]
    for name in country_local:
        put(name, "Country")
    for c, name in enumerate(city_local):
        put(name, "City",
            objs=[(_c("isLocatedIn"), _c(country_local[c % p.n_countries]))])

    n = p.n_individuals
    n_banks = min(12, n // 12)
    n_schools = min(8, n // 25)
    n_clubs = min(6, n // 40)
    n_parties = min(4, n // 60)
    banks = [put(f"bank{j:04d}", "BankAccount") for j in range(1, n_banks + 1)]
    schools = [put(f"school{j:02d}", "School") for j in range(1, n_schools + 1)]
    clubs = [put(f"club{j:02d}", "Club") for j in range(1, n_clubs + 1)]
    parties = [put(f"party{j:02d}", "Party") for j in range(1, n_parties + 1)]

    # fix everyone's sex and city first so parents can be drawn from the
    # finished city rosters
    male = [rng.u64("sex", i) % 2 == 0 for i in range(1, n + 1)]
    city_of = [rng.u64("city", i) % p.n_cities for i in range(1, n + 1)]
    men_by_city = [[] for _ in range(p.n_cities)]
    women_by_city = [[] for _ in range(p.n_cities)]
    for i in range(1, n + 1):
        (men_by_city if male[i - 1] else women_by_city)[city_of[i - 1]].append(i)
    men = [i for i in range(1, n + 1) if male[i - 1]]
    women = [i for i in range(1, n + 1) if not male[i - 1]]

    def person_local(i: int) -> str:
        return f"person{i:0{width}d}"

    def pick_parent(i: int, same_city, anywhere, label: str) -> Iri | None:
        pool = same_city if rng.chance(SAME_CITY_BIAS, label, "near", i) else anywhere
        pool = [j for j in pool if j != i]
        if not pool:
            pool = [j for j in anywhere if j != i]
        if not pool:
            return None
        return _c(person_local(rng.choice(pool, label, "pick", i)))

    for i in range(1, n + 1):
        is_man = male[i - 1]
        c = city_of[i - 1]
        first = rng.choice(_MALE if is_man else _FEMALE, "first", i)
        last = rng.choice(_LAST, "last", i)
        born = d_lo + timedelta(days=rng.u64("dob", i) % (span + 1))
        address = (f"{1 + rng.u64('addr_no', i) % 980} "
                   f"{rng.choice(_STREETS, 'street', i)} "
                   f"{rng.choice(_STREET_KINDS, 'kind', i)}, "
                   f"apartment {1 + rng.u64('apt', i) % 60}, "
                   f"{city_local[c]} {rng.choice(_DISTRICTS, 'district', i)} "
                   f"district, postal code {10000 + rng.u64('postal', i) % 90000}")
        data = [(_c("firstName"), Literal(first, "string")),
                (_c("lastName"), Literal(last, "string")),
                (_c("dateOfBirth"), Literal(born.isoformat(), "date")),
                (_c("personAddress"), Literal(address, "string"))]
        objs = [(_c("livesIn"), _c(city_local[c]))]

        if rng.chance(P_PARENT, "father", i):
            father = pick_parent(i, men_by_city[c], men, "father")
            if father is not None:
                objs.append((_c("hasAsFather"), father))
        if rng.chance(P_PARENT, "mother", i):
            mother = pick_parent(i, women_by_city[c], women, "mother")
            if mother is not None:
                objs.append((_c("hasAsMother"), mother))
        if rng.chance(P_EMAIL, "email", i):
            objs.append((_c("hasEmail"), put(f"email{i:0{width}d}", "Email")))
        if banks and rng.chance(P_BANK, "bank", i):
            objs.append((_c("hasBankAccount"), rng.choice(banks, "bank_pick", i)))
        if schools and rng.chance(P_SCHOOL, "school", i):
            objs.append((_c("studiesIn"), rng.choice(schools, "school_pick", i)))
        if clubs and rng.chance(P_CLUB, "club", i):
            objs.append((_c("isClubMember"), rng.choice(clubs, "club_pick", i)))
        if parties and rng.chance(P_PARTY, "party", i):
            objs.append((_c("IsPartyMember"), rng.choice(parties, "party_pick", i)))

        put(person_local(i), "Man" if is_man else "Woman", data, objs)

    city_counts = [0] * p.n_cities
    for c in city_of:
        city_counts[c] += 1
    country_counts = [0] * p.n_countries
    for c, count in enumerate(city_counts):
        country_counts[c % p.n_countries] += count
    allocation = Allocation(
        persons=n,
        per_city=tuple(zip(city_local, city_counts)),
        per_country=tuple(zip(country_local, country_counts)),
        located=tuple((city_local[c], country_local[c % p.n_countries])
                      for c in range(p.n_cities)))

    out = Ontology(schema.header, schema.namespaces, schema.classes,
                   schema.object_properties, schema.datatype_properties,
                   individuals)
    return out, allocation


def generate_population(schema: Ontology, p: PopulationParams) -> Ontology:
    return generate_with_allocation(schema, p)[0]
