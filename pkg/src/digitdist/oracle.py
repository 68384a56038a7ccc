"""Exact brute-force census of digit-restricted integer sets.

Enumeration walks the reversed, determinized presentation most significant
digit first, so integers come out ascending, each exactly once, with no
hashing: canonical expansions are exactly the paths whose leading digit is
nonzero (plus the single word "0").  This is the ground truth the Markov
predictions are checked against; it shares no code with the chain algebra.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from .shifts import Cover, DetAutomaton, ShiftSpec, build_cover
from .words import DomainError, GAdditiveFamily, residue_tuples


def _cover_of(obj) -> Cover:
    if isinstance(obj, ShiftSpec):
        return build_cover(obj)
    if isinstance(obj, Cover):
        return obj
    return obj.as_cover()


def _reversed_dfa(cover: Cover) -> DetAutomaton:
    return DetAutomaton(cover.reversed())


def enumerate_set(
    obj,
    max_exponent: Optional[int] = None,
    bound: Optional[int] = None,
) -> Iterator[int]:
    """Ascending members of the g-language set below g^max_exponent or bound."""
    cover = _cover_of(obj)
    g = cover.base
    if (max_exponent is None) == (bound is None):
        raise DomainError("give exactly one of max_exponent or bound")
    if bound is not None:
        if bound <= 0:
            return
        m = len_base(bound - 1, g) if bound > 1 else 1
    else:
        m = max_exponent
    dfa = _reversed_dfa(cover)
    for j in range(1, m + 1):
        yield from _emit_length(dfa, g, j, bound)


def len_base(n: int, g: int) -> int:
    length = 0
    if n == 0:
        return 1
    while n:
        n //= g
        length += 1
    return length


def _emit_length(dfa: DetAutomaton, g: int, j: int, bound: Optional[int]):
    powers = [g**t for t in range(j + 1)]

    def rec(state, depth, value):
        if depth == j:
            yield value
            return
        rem = j - depth
        for d in sorted(dfa.adj[state]):
            if depth == 0 and j >= 2 and d == 0:
                continue
            v2 = value * g + d
            if bound is not None and v2 * powers[rem - 1] >= bound:
                break  # digits ascend, so later ones only grow
            yield from rec(dfa.adj[state][d], depth + 1, v2)

    yield from rec(0, 0, 0)


@dataclass
class CensusTable:
    """Exact counts of set members per residue vector below a horizon."""

    moduli: tuple[int, ...]
    base: int
    max_exponent: Optional[int]
    bound: Optional[int]
    counts: dict = field(default_factory=dict)
    total: int = 0

    def frequency(self, residue: tuple) -> Fraction:
        if self.total == 0:
            return Fraction(0)
        return Fraction(self.counts.get(residue, 0), self.total)

    def frequencies(self) -> dict:
        return {r: self.frequency(r) for r in residue_tuples(self.moduli)}

    def merge(self, other: "CensusTable") -> "CensusTable":
        assert self.moduli == other.moduli
        merged = dict(self.counts)
        for r, c in other.counts.items():
            merged[r] = merged.get(r, 0) + c
        return CensusTable(
            self.moduli,
            self.base,
            self.max_exponent,
            self.bound,
            merged,
            self.total + other.total,
        )

    def csv(self) -> str:
        lines = []
        header = [f"b{j+1}" for j in range(len(self.moduli))]
        lines.append(",".join(header + ["count", "frequency_num", "frequency_den"]))
        for r in residue_tuples(self.moduli):
            f = self.frequency(r)
            lines.append(
                ",".join(
                    [str(x) for x in r]
                    + [str(self.counts.get(r, 0)), str(f.numerator), str(f.denominator)]
                )
            )
        return "\n".join(lines) + "\n"


def _census_lengths(cover, fam, lengths, bound=None):
    """Census restricted to given canonical word lengths (msd nonzero)."""
    dfa = _reversed_dfa(cover)
    g = cover.base
    zero = (0,) * len(fam.moduli)
    add = lambda r, inc: tuple((x + y) % m for x, y, m in zip(r, inc, fam.moduli))
    counts: dict = {}
    total = 0

    for j in lengths:
        powers = [g**t for t in range(j + 1)]

        def rec(state, depth, value, residue):
            nonlocal total
            if depth == j:
                counts[residue] = counts.get(residue, 0) + 1
                total += 1
                return
            rem = j - depth
            for d in sorted(dfa.adj[state]):
                if depth == 0 and j >= 2 and d == 0:
                    continue
                v2 = value * g + d
                if bound is not None and v2 * powers[rem - 1] >= bound:
                    break
                rec(
                    dfa.adj[state][d],
                    depth + 1,
                    v2,
                    add(residue, fam.term_vector(d, j - 1 - depth)),
                )

        rec(0, 0, 0, zero)
    return counts, total


def census(
    obj,
    fam: GAdditiveFamily,
    max_exponent: Optional[int] = None,
    bound: Optional[int] = None,
    threads: int = 1,
) -> CensusTable:
    """Exact residue-vector counts over the set below the horizon."""
    cover = _cover_of(obj)
    if cover.base != fam.base:
        raise DomainError("family base does not match the shift base")
    if (max_exponent is None) == (bound is None):
        raise DomainError("give exactly one of max_exponent or bound")
    if bound is not None:
        m = len_base(bound - 1, cover.base) if bound > 1 else 1
    else:
        m = max_exponent
    lengths = list(range(1, m + 1))
    if threads > 1 and len(lengths) > 1 and isinstance(obj, ShiftSpec):
        table = CensusTable(fam.moduli, cover.base, max_exponent, bound)
        spec_json = json.dumps(obj.to_json())
        fam_json = json.dumps([f.to_json() for f in fam.functions])
        chunks = [lengths[i::threads] for i in range(threads)]
        chunks = [c for c in chunks if c]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [
                pool.submit(_census_task, spec_json, fam_json, chunk, bound)
                for chunk in chunks
            ]
            for fut in futures:
                counts, total = fut.result()
                part = CensusTable(
                    fam.moduli, cover.base, max_exponent, bound,
                    {tuple(k): v for k, v in counts}, total,
                )
                table = table.merge(part)
        table.max_exponent = max_exponent
        table.bound = bound
        return table
    counts, total = _census_lengths(cover, fam, lengths, bound)
    return CensusTable(fam.moduli, cover.base, max_exponent, bound, counts, total)


def _census_task(spec_json: str, fam_json: str, lengths, bound):
    from .words import function_from_json

    spec = ShiftSpec.from_json(json.loads(spec_json))
    funcs = tuple(function_from_json(o) for o in json.loads(fam_json))
    fam = GAdditiveFamily(spec.base, funcs)
    counts, total = _census_lengths(build_cover(spec), fam, lengths, bound)
    return [(k, v) for k, v in counts.items()], total


def census_by_length(obj, fam: GAdditiveFamily, m_max: int) -> list[CensusTable]:
    """Cumulative censuses at horizons g^1, ..., g^m_max, one enumeration."""
    cover = _cover_of(obj)
    tables = []
    acc = CensusTable(fam.moduli, cover.base, 0, None)
    for j in range(1, m_max + 1):
        counts, total = _census_lengths(cover, fam, [j])
        part = CensusTable(fam.moduli, cover.base, j, None, counts, total)
        acc = acc.merge(part)
        acc.max_exponent = j
        tables.append(acc)
    return tables


def canonical_count(obj, m: int) -> int:
    """|A ∩ [0, g^m)| from transfer counts: words with nonzero leading digit
    per length, plus the integer 0 when the language has the word "0"."""
    cover = _cover_of(obj)
    dfa = _reversed_dfa(cover)
    total = 0
    if 0 in dfa.adj[0]:
        total += 1  # n = 0
    for j in range(1, m + 1):
        vec = [0] * len(dfa.states)
        for d, t in dfa.adj[0].items():
            if d != 0:
                vec[t] += 1
        for _ in range(j - 1):
            nxt = [0] * len(dfa.states)
            for i, c in enumerate(vec):
                if c:
                    for t in dfa.adj[i].values():
                        nxt[t] += c
            vec = nxt
        total += sum(vec)
    return total


@dataclass
class CompareResult:
    tv_distance: float
    max_cell_error: float
    passed: bool
    tolerance: float
    mode: str
    notes: list = field(default_factory=list)


def compare(predicted: dict, table: CensusTable, tolerance: float = 0.02) -> CompareResult:
    """Total-variation distance between a predicted limit table and the
    empirical frequencies.

    Cells predicted None ("does not exist") are excluded from the distance
    and reported informationally; if every defined cell is 0 the comparison
    degenerates to the empty-class assertion: those cells must be exactly
    empty.
    """
    cells = residue_tuples(table.moduli)
    defined = {r: v for r, v in predicted.items() if v is not None}
    notes = []
    oscillating = [r for r in cells if predicted.get(r, Fraction(0)) is None]
    if oscillating:
        notes.append(f"{len(oscillating)} cells have no predicted limit")
    if defined and all(v == 0 for v in defined.values()):
        worst = max((float(table.frequency(r)) for r in defined), default=0.0)
        passed = all(table.counts.get(r, 0) == 0 for r in defined)
        return CompareResult(worst, worst, passed, tolerance, "zero-cells", notes)
    tv = Fraction(0)
    max_err = Fraction(0)
    for r in cells:
        if predicted.get(r) is None:
            continue
        diff = abs(predicted.get(r, Fraction(0)) - table.frequency(r))
        tv += diff
        max_err = max(max_err, diff)
    tv = tv / 2
    return CompareResult(
        float(tv), float(max_err), float(tv) <= tolerance, tolerance, "tv", notes
    )


def convergence_table(obj, fam: GAdditiveFamily, predicted: dict, m_max: int):
    """Per-horizon tv distances against the predicted limit table."""
    rows = []
    for t in census_by_length(obj, fam, m_max):
        res = compare(predicted, t, tolerance=1.0)
        rows.append((t.max_exponent, res.tv_distance))
    return rows


def word_residue_supports(obj, fam: GAdditiveFamily, max_len: int) -> list[frozenset]:
    """Residue-vector supports of all length-i words, i = 1..max_len."""
    cover = _cover_of(obj)
    out_map = cover.out_map()
    zero = (0,) * len(fam.moduli)
    cur = {(n, zero) for n in cover.nodes}
    supports = []
    for j in range(max_len):
        cur = {
            (v, tuple((x + y) % m for x, y, m in zip(r, fam.term_vector(d, j), fam.moduli)))
            for (n, r) in cur
            for (v, d) in out_map[n]
        }
        supports.append(frozenset(r for _, r in cur))
    return supports


def default_exponent(obj, min_words: int = 10**5, cap: int = 24) -> int:
    """Smallest horizon exponent whose language has at least min_words words."""
    from .shifts import language_count

    cover = _cover_of(obj)
    for m in range(1, cap + 1):
        if language_count(cover, m) >= min_words:
            return m
    return cap
