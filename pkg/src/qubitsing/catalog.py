"""Normal-form catalog: families, parameter loci and seeded parameter draws."""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import Mapping, Sequence

from .scalar import ZERO, Scalar, parse_scalar
from .states import FourQubitState

__all__ = [
    "CatalogEntry", "Verdict", "Locus", "UnknownFamilyError", "load_catalog", "family",
    "families", "catalog_instantiate", "parse_condition", "parse_table_locus",
    "table_loci", "draw_parameters", "GENERIC", "TableRow", "table_rows",
]

GENERIC = "generic"


class UnknownFamilyError(KeyError):
    pass


@dataclass(frozen=True)
class Locus:
    """One irreducible parameter locus: each parameter is 0, free, or +-another free parameter.

    ``forms`` maps every parameter to ``(coefficient, free_name)``; ``free_name`` is None for 0.
    """

    forms: tuple[tuple[str, int, str | None], ...]

    @property
    def free(self) -> tuple[str, ...]:
        return tuple(p for p, c, f in self.forms if f == p and c == 1)

    def values(self, free_values: Mapping[str, Scalar]) -> dict[str, Scalar]:
        return {p: (free_values[f] * c if f is not None else ZERO) for p, c, f in self.forms}

    def contains(self, values: Mapping[str, Scalar]) -> bool:
        return all(values[p] == (values[f] * c if f is not None else ZERO)
                   for p, c, f in self.forms)

    def implies(self, other: Locus) -> bool:
        """Every point of this locus lies on ``other``."""
        mine = {p: (c, f) for p, c, f in self.forms}

        def linear(p, coef=1):
            c, f = mine[p]
            return {} if f is None else {f: coef * c}

        for p, c, f in other.forms:
            lhs = linear(p)
            rhs = {} if f is None else linear(f, c)
            if lhs != rhs:
                return False
        return True

    def describe(self) -> str:
        parts = []
        for p, c, f in self.forms:
            if f == p and c == 1:
                continue
            parts.append(f"{p}=" + ("0" if f is None else ("-" if c < 0 else "") + f))
        return ", ".join(parts) or GENERIC


def _identity_locus(params: Sequence[str]) -> Locus:
    return Locus(tuple((p, 1, p) for p in params))


def _chain_loci(chain: str, params: Sequence[str]) -> list[Locus]:
    tokens = chain.split("=")
    signs_choice = []
    names = []
    for k, tok in enumerate(tokens):
        pm = tok.startswith("+-")
        name = tok[2:] if pm else tok
        if name != "0" and name not in params:
            raise ValueError(f"unknown parameter {name!r} in condition {chain!r}")
        if pm and k == 0:
            raise ValueError(f"leading +- in condition {chain!r}")
        names.append(name)
        signs_choice.append((1, -1) if pm else (1,))
    out = []
    for signs in product(*signs_choice):
        anchor = names[-1]
        forms = {p: (1, p) for p in params}
        coef = 1
        # walk back from the anchor: names[k] = signs[k+1] * names[k+1]
        for k in range(len(names) - 2, -1, -1):
            coef *= signs[k + 1]
            forms[names[k]] = (0, None) if anchor == "0" else (coef, anchor)
        out.append(Locus(tuple((p, *forms[p]) for p in params)))
    return out


def parse_condition(condition: str, params: Sequence[str]) -> list[Locus]:
    """Expand ``a=+-b=+-c`` / ``a=c=0 or b=c=0`` style conditions into loci.

    ``none`` and ``generic`` give the whole parameter space.
    """
    text = condition.replace(" ", "")
    if text in ("none", GENERIC):
        return [_identity_locus(params)]
    out = []
    for alt in text.split("or"):
        out.extend(_chain_loci(alt, params))
    return out


_TABLE_ITEM = re.compile(r"^([a-z])=(-?)([a-z]|0)$")


def parse_table_locus(text: str, params: Sequence[str] = ("a", "b", "c", "d")) -> Locus:
    """Parse an appendix row such as ``{a = a, b = -a, c = 0, d = d}``."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"bad locus {text!r}")
    forms = {}
    for item in body[1:-1].split(","):
        m = _TABLE_ITEM.match(item.replace(" ", ""))
        if not m:
            raise ValueError(f"bad locus item {item!r}")
        p, neg, rhs = m.groups()
        forms[p] = (0, None) if rhs == "0" else (-1 if neg else 1, rhs)
    if set(forms) != set(params):
        raise ValueError(f"locus {text!r} must constrain exactly {params}")
    for p, (c, f) in forms.items():
        if f is not None and forms[f] != (1, f):
            raise ValueError(f"locus {text!r}: {p} refers to non-free {f}")
    return Locus(tuple((p, *forms[p]) for p in params))


@dataclass(frozen=True)
class Verdict:
    condition: str
    kind: str                 # unique | all | smooth | nonisolated
    type: str | None = None

    def describe(self) -> str:
        if self.kind == "unique":
            return f"{self.type} (unique)"
        if self.kind == "all":
            return f"only {self.type}"
        return {"smooth": "smooth", "nonisolated": "non-isolated"}[self.kind]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    table: int
    notation: str
    parameters: tuple[str, ...]
    template: dict
    verdicts: tuple[Verdict, ...]
    printed_template: dict | None = None
    known_singular_points: tuple[str, ...] = ()
    scaled_by: str | None = None

    def instantiate(self, values: Mapping[str, object] | Sequence | None = None,
                    printed: bool = False) -> FourQubitState:
        if values is None:
            values = {}
        if not isinstance(values, Mapping):
            values = dict(zip(self.parameters, values))
        missing = set(self.parameters) - set(values)
        if missing:
            raise ValueError(f"{self.name}: missing parameter values {sorted(missing)}")
        vals = {k: Scalar.coerce(v) for k, v in values.items()}
        vals["1"] = Scalar(1)
        template = self.printed_template if printed and self.printed_template else self.template
        amps = {}
        for key, coeffs in template.items():
            total = ZERO
            for param, c in coeffs.items():
                total = total + parse_scalar(c) * vals[param]
            amps[key] = total
        return FourQubitState.from_dict(amps)


@lru_cache(maxsize=1)
def load_catalog() -> dict:
    text = resources.files("qubitsing").joinpath("data/catalog.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def family(name: str) -> CatalogEntry:
    for raw in load_catalog()["families"]:
        if raw["name"] == name:
            return CatalogEntry(
                name=raw["name"],
                table=raw["table"],
                notation=raw["notation"],
                parameters=tuple(raw["parameters"]),
                template=raw["template"],
                verdicts=tuple(Verdict(v["condition"], v["expect"]["kind"], v["expect"].get("type"))
                               for v in raw["verdicts"]),
                printed_template=raw.get("printed_template"),
                known_singular_points=tuple(raw.get("known_singular_points", ())),
                scaled_by=raw.get("scaled_by"),
            )
    raise UnknownFamilyError(name)


def families(table: int | None = None) -> list[CatalogEntry]:
    out = [family(raw["name"]) for raw in load_catalog()["families"]]
    return [f for f in out if table is None or f.table == table]


def catalog_instantiate(entry: CatalogEntry | str, values=None, printed: bool = False) -> FourQubitState:
    if isinstance(entry, str):
        entry = family(entry)
    return entry.instantiate(values, printed=printed)


@lru_cache(maxsize=None)
def table_loci(table: int) -> tuple[Locus, ...]:
    key = {4: "table4", 5: "table5"}[table]
    return tuple(parse_table_locus(s) for s in load_catalog()[key])


def verdict_loci(entry: CatalogEntry, verdict: Verdict) -> list[Locus]:
    if verdict.condition in ("table4", "table5"):
        return list(table_loci(int(verdict.condition[-1])))
    return parse_condition(verdict.condition, entry.parameters)


def _special_loci(entry: CatalogEntry) -> list[Locus]:
    out = []
    for v in entry.verdicts:
        if v.condition not in ("none", GENERIC):
            out.extend(verdict_loci(entry, v))
    return out


def draw_parameters(entry: CatalogEntry, locus: Locus, rng: random.Random,
                    height: int = 60, max_den: int = 7, max_tries: int = 10_000) -> dict[str, Scalar]:
    """Random rational point of ``locus`` avoiding every other listed locus it does not imply.

    Free parameters are drawn nonzero.  Rejection also covers collisions between
    two special loci, so a draw exercises exactly one row of the verdict table.
    """
    avoid = [other for other in _special_loci(entry) if not locus.implies(other)]
    for _ in range(max_tries):
        free = {}
        for p in locus.free:
            while True:
                v = Fraction(rng.randint(-height, height), rng.randint(1, max_den))
                if v:
                    break
            free[p] = Scalar(v)
        values = locus.values(free)
        if not any(o.contains(values) for o in avoid):
            return values
    raise RuntimeError(f"could not draw a point on {locus.describe()} for {entry.name}")


@dataclass
class TableRow:
    """One line of a reproduction table: a family, a locus, its expectation and draws."""

    family: str
    condition: str
    locus: Locus
    expect: Verdict
    draws: list[dict[str, Scalar]] = field(default_factory=list)

    @property
    def label(self) -> str:
        return f"{self.family} [{self.locus.describe()}]"


def table_rows(table: int, draws: int = 3, seed: int = 0) -> list[TableRow]:
    """Rows reproduced by the harness for tables 2-5, with seeded parameter draws.

    Loci with no free parameter are instantiated once.
    """
    rng = random.Random(f"table{table}:{seed}")
    rows = []
    if table in (2, 3):
        for entry in families(table):
            for v in entry.verdicts:
                if v.condition in ("table4", "table5"):
                    continue
                for locus in verdict_loci(entry, v):
                    rows.append(TableRow(entry.name, v.condition, locus, v))
    else:
        entry = family("G_abcd")
        v = next(v for v in entry.verdicts if v.condition == f"table{table}")
        for locus in table_loci(table):
            rows.append(TableRow(entry.name, v.condition, locus, v))
    for row in rows:
        entry = family(row.family)
        n = draws if row.locus.free else 1
        row.draws = [draw_parameters(entry, row.locus, rng) for _ in range(n)]
    return rows
