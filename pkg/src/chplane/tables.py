"""Reference catalogues of disc bundle examples and comparison helpers.

Three fixture tables ship with the package:

* ``extremes``: the examples attaining the observed extremes of the
  invariants, with genus, Euler characteristic of the base, Euler number
  of the bundle and Toledo invariant.
* ``real_hyperbolic``: every example with ``3 e >= chi``, the condition
  under which the bundle carries a real hyperbolic structure candidate.
* ``n101``: the complete list of accepted parameters for n = 101 with
  their Euler numbers and Toledo invariants.

The helpers compare these against freshly computed records; they accept
any objects exposing ``n, l, k, p`` and the relevant invariant fields.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Iterable, Optional, Sequence


@dataclass(frozen=True)
class TableRow:
    """One catalogue entry; invariant fields are None when the table
    does not list them."""

    n: int
    l: int
    k: int
    p: int
    genus: Optional[int] = None
    chi: Optional[int] = None
    e: Optional[int] = None
    tau: Optional[Fraction] = None

    @property
    def key(self) -> tuple:
        return (self.n, self.l, self.k, self.p)


def _rows(name: str) -> list[dict]:
    with resources.files("chplane.data").joinpath(name).open() as fh:
        return list(csv.DictReader(fh))


def _parse(raw: dict) -> TableRow:
    def opt(field, conv):
        return conv(raw[field]) if field in raw and raw[field] != "" else None

    return TableRow(
        n=int(raw["n"]),
        l=int(raw["l"]),
        k=int(raw["k"]),
        p=int(raw["p"]),
        genus=opt("genus", int),
        chi=opt("chi", int),
        e=opt("e", int),
        tau=opt("tau", Fraction),
    )


def load_extremes() -> list[TableRow]:
    return [_parse(r) for r in _rows("extremes.csv")]


def load_real_hyperbolic() -> list[TableRow]:
    return [_parse(r) for r in _rows("real_hyperbolic.csv")]


def load_n101() -> list[TableRow]:
    return [_parse(r) for r in _rows("n101.csv")]


def match_rows(rows: Sequence[TableRow], records: Iterable) -> list[str]:
    """Check every catalogue row against the computed records.

    Each row's parameters must appear among the records and the listed
    invariants must agree exactly. Returns human readable mismatch
    descriptions; an empty list means full agreement.
    """
    by_key = {(r.n, r.l, r.k, r.p): r for r in records}
    problems = []
    for row in rows:
        rec = by_key.get(row.key)
        if rec is None:
            problems.append(f"{row.key}: not found among computed records")
            continue
        for field in ("genus", "chi", "e", "tau"):
            want = getattr(row, field)
            if want is None:
                continue
            got = getattr(rec, field)
            if Fraction(got) != Fraction(want):
                problems.append(f"{row.key}: {field} = {got}, table says {want}")
    return problems


def real_hyperbolic_keys(records: Iterable) -> set[tuple]:
    """Parameters of the computed records satisfying 3 e >= chi."""
    return {
        (r.n, r.l, r.k, r.p)
        for r in records
        if 3 * r.e >= r.chi
    }


def compare_key_sets(rows: Sequence[TableRow], keys: set[tuple]) -> list[str]:
    """Symmetric difference between a catalogue and a computed key set,
    reported as mismatch strings."""
    table_keys = {r.key for r in rows}
    problems = []
    for key in sorted(table_keys - keys):
        problems.append(f"{key}: listed in the table but not computed")
    for key in sorted(keys - table_keys):
        problems.append(f"{key}: computed but absent from the table")
    return problems
