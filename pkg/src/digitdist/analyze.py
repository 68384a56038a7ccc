"""Decision procedures for uniform distribution in residue classes.

Each analysis produces an AnalysisReport: a verdict, a predicted limit table
(exact rationals, None marking classes whose limit provably is zero or does
not exist), witnesses that re-evaluate to their claimed residues, and the
method that produced the verdict.  The chain-based route is independent of
the closed-form criteria, which is what the consistency checks exercise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .chains import ChainSystem
from .shifts import (
    FischerCover,
    NonTransitiveError,
    ShiftSpec,
    build_cover,
    fischer_cover,
    regularity_k,
    sft_shortcut_presentation,
    shortest_synchronizing_length,
)
from .words import (
    DomainError,
    GAdditiveFamily,
    Word,
    delta_gcd,
    euler_period,
    find_eventual_period,
    id_sum_family,
    residue_tuples,
    word_to_integer,
)

UNIFORM = "uniform"
SUBGROUP = "subgroup-uniform"
ZERO_OR_DNE = "zero-or-nonexistent"
NOT_UNIFORM = "not-uniform-with-witness"
UNSUPPORTED = "unsupported"


@dataclass
class AnalysisReport:
    verdict: str
    method: str
    moduli: tuple[int, ...]
    table: dict = field(default_factory=dict)  # residue tuple -> Fraction | None
    inputs: dict = field(default_factory=dict)
    subgroup: Optional[dict] = None
    witnesses: dict = field(default_factory=dict)
    per_i: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def defined_cells(self) -> dict:
        return {r: v for r, v in self.table.items() if v is not None}

    def to_json(self) -> dict:
        def frac(v):
            if v is None:
                return "DNE"
            return f"{v.numerator}/{v.denominator}"

        def key(r):
            return ",".join(map(str, r))

        obj = {
            "schema": 1,
            "verdict": self.verdict,
            "method": self.method,
            "moduli": list(self.moduli),
            "inputs": self.inputs,
            "table": {key(r): frac(v) for r, v in sorted(self.table.items())},
            "notes": list(self.notes),
        }
        if self.subgroup is not None:
            obj["subgroup"] = self.subgroup
        if self.witnesses:
            obj["witnesses"] = {
                k: (v if not isinstance(v, Word) else v.lsb_str())
                for k, v in sorted(self.witnesses.items())
            }
        if self.per_i:
            obj["per_i"] = [
                {
                    "i": entry["i"],
                    "exists": entry.get("exists"),
                    "support": [",".join(map(str, r)) for r in sorted(entry["support"])],
                    "value": frac(entry.get("value")),
                }
                for entry in self.per_i
            ]
        return obj


def _uniform_table(moduli) -> dict:
    v = Fraction(1, math.prod(moduli))
    return {r: v for r in residue_tuples(moduli)}


def _check_word(w: Word, fam: GAdditiveFamily, expect: tuple) -> None:
    got = fam.eval_word(w)
    if got != tuple(e % m for e, m in zip(expect, fam.moduli)):
        raise DomainError(f"witness word evaluates to {got}, expected {expect}")


# ---------------------------------------------------------------------------
# missing digits sets: the joint-distribution trichotomy


def bezout_word(g: int, digits, a: int, a2: int) -> Word:
    """Word of length divisible by p = a2*phi(a(g-1)) whose value and digit
    sum are both congruent to delta = gcd(a*a2, digit differences)."""
    ds = sorted(digits)
    d1 = ds[0]
    aa2 = a * a2
    p = euler_period(g, a, a2)
    delta = delta_gcd(aa2, ds)
    # Bezout coefficients for gcd(aa2, d_2-d_1, ..., d_t-d_1)
    coeffs = [0] * len(ds)
    acc = aa2
    acc_coeffs = {0: 1}  # index -> coefficient of that generator in acc
    for j, d in enumerate(ds[1:], start=1):
        diff = d - d1
        gcd_, x, y = _ext_gcd(acc, diff)
        acc_coeffs = {idx: c * x for idx, c in acc_coeffs.items()}
        acc_coeffs[j] = y
        acc = gcd_
    assert acc == delta
    blocks = []
    for j, d in enumerate(ds[1:], start=1):
        m = acc_coeffs.get(j, 0) % aa2
        if m:
            blocks.append(((d,) + (d1,) * (p - 1)) * m)
    if not blocks:
        blocks.append((d1,) * p)  # delta = 0 mod aa2: the constant word works
    word = Word(g, tuple(x for block in blocks for x in block))
    fam = id_sum_family(g, a, a2)
    _check_word(word, fam, (delta, delta))
    if len(word) % p != 0:
        raise DomainError("witness length must be a multiple of p")
    return word


def _ext_gcd(x: int, y: int):
    if y == 0:
        return x, 1, 0
    g, a, b = _ext_gcd(y, x % y)
    return g, b, a - (x // y) * b


def coset_family(g: int, digits, a: int, a2: int) -> list[tuple]:
    """Per-length residue cosets S(i): length-i words all carry the fixed
    pair (d1 * (1 + g + ... + g^(i-1)), i * d1) modulo (delta_a, delta_a2)."""
    ds = sorted(digits)
    d1 = ds[0]
    delta = delta_gcd(a * a2, ds)
    da = math.gcd(delta, a)
    da2 = math.gcd(delta, a2)
    p = euler_period(g, a, a2)
    out = []
    geom = 0
    for i in range(1, p + 1):
        geom = (geom * g + 1) % a if a > 1 else 0  # 1 + g + ... + g^(i-1)
        out.append(((d1 * geom) % da, (i * d1) % da2))
    return out


def _coset_cells(a, a2, da, da2, shift_a, shift_a2):
    cells = set()
    for b in range(shift_a % da, a, da):
        for b2 in range(shift_a2 % da2, a2, da2):
            cells.add((b, b2))
    return cells


def analyze_missing_digits(
    g: int, digits, a: int, a2: int = 1, with_witness: bool = True
) -> AnalysisReport:
    """Joint-distribution trichotomy for a missing digits set."""
    ds = sorted(set(digits))
    inputs = {"g": g, "digits": ds, "a": a, "a2": a2}
    moduli = (a, a2)
    if len(ds) < 2:
        raise DomainError("need at least two digits")
    if math.gcd(g, a) != 1 or math.gcd(a, a2) != 1:
        return AnalysisReport(
            UNSUPPORTED,
            "thm-missing-digits",
            moduli,
            inputs=inputs,
            notes=[
                "hypotheses gcd(g,a)=gcd(a,a2)=1 fail; use the chain route "
                "or the oracle"
            ],
        )
    aa2 = a * a2
    delta = delta_gcd(aa2, ds)
    da = math.gcd(delta, a)
    da2 = math.gcd(delta, a2)
    d1 = ds[0]
    witnesses = {}
    if with_witness:
        w = bezout_word(g, ds, a, a2)
        witnesses["generator_word"] = w
        witnesses["generator_residues"] = list(id_sum_family(g, a, a2).eval_word(w))
    if delta == 1:
        return AnalysisReport(
            UNIFORM,
            "thm-missing-digits",
            moduli,
            table=_uniform_table(moduli),
            inputs=inputs,
            subgroup={"delta": 1, "delta_a": 1, "delta_a2": 1},
            witnesses=witnesses,
        )
    subgroup = {
        "delta": delta,
        "delta_a": da,
        "delta_a2": da2,
        "subgroup": sorted(_coset_cells(a, a2, da, da2, 0, 0)),
    }
    if d1 % da == 0 and d1 % da2 == 0:
        cells = _coset_cells(a, a2, da, da2, 0, 0)
        value = Fraction(delta, aa2)
        table = {
            r: (value if r in cells else Fraction(0)) for r in residue_tuples(moduli)
        }
        return AnalysisReport(
            SUBGROUP,
            "thm-missing-digits",
            moduli,
            table=table,
            inputs=inputs,
            subgroup=subgroup,
            witnesses=witnesses,
        )
    # remaining case: the per-length coset rotates, limits are 0 or absent
    shifts = coset_family(g, ds, a, a2)
    per_i = []
    union = set()
    for i, (sa, sa2) in enumerate(shifts, start=1):
        cells = _coset_cells(a, a2, da, da2, sa, sa2)
        union |= cells
        per_i.append({"i": i, "support": sorted(cells), "value": None, "exists": False})
    table = {
        r: (None if r in union else Fraction(0)) for r in residue_tuples(moduli)
    }
    return AnalysisReport(
        ZERO_OR_DNE,
        "thm-missing-digits",
        moduli,
        table=table,
        inputs=inputs,
        subgroup=subgroup,
        witnesses=witnesses,
        per_i=per_i,
        notes=["per-length cosets rotate; each class has limit zero or none"],
    )


# ---------------------------------------------------------------------------
# missing digits without gcd(a, a') = 1


def analyze_general_pair(g: int, digits, a: int, a2: int) -> AnalysisReport:
    """Equivalent condition without gcd(a,a')=1: uniform iff the mod-a
    obstruction vanishes and a word with value 0 mod a, digit sum 1 mod a2
    and length divisible by p exists."""
    ds = sorted(set(digits))
    inputs = {"g": g, "digits": ds, "a": a, "a2": a2}
    moduli = (a, a2)
    if len(ds) < 2:
        raise DomainError("need at least two digits")
    if math.gcd(g, a) != 1:
        return AnalysisReport(
            UNSUPPORTED,
            "prop-general",
            moduli,
            inputs=inputs,
            notes=["needs gcd(g,a)=1"],
        )
    p = euler_period(g, a, a2)
    delta_a = a
    for d in ds[1:]:
        delta_a = math.gcd(delta_a, d - ds[0])
    found, closure = _word_witness_bfs(g, ds, a, a2, p)
    if delta_a == 1 and found is not None:
        w = Word(g, found)
        _check_word(w, id_sum_family(g, a, a2), (0, 1))
        return AnalysisReport(
            UNIFORM,
            "prop-general",
            moduli,
            table=_uniform_table(moduli),
            inputs=inputs,
            witnesses={"witness_word": w},
            notes=[f"period p={p}"],
        )
    notes = []
    if delta_a != 1:
        notes.append(f"gcd(a, digit differences) = {delta_a} != 1")
    if found is None:
        notes.append(
            f"no word with value 0 mod {a}, digit sum 1 mod {a2}, length "
            f"multiple of {p}; reachable closure has {len(closure)} states"
        )
    return AnalysisReport(
        NOT_UNIFORM,
        "prop-general",
        moduli,
        inputs=inputs,
        witnesses={"closure_certificate": sorted(closure)} if found is None else {},
        notes=notes,
    )


def _word_witness_bfs(g, digits, a, a2, p):
    """Least word over the digits with value 0 mod a, digit sum 1 mod a2 and
    length 0 mod p, by layered search over (value, sum, length mod p).

    The start state may coincide with the target (a2 = 1), so the target
    test runs on arrival, before the visited check."""
    start = (0, 0, 0)
    target = (0, 1 % a2, 0)
    parents = {start: None}
    frontier = [start]
    gpow = [pow(g, j, a) for j in range(max(p, 1))] if a > 1 else [0] * max(p, 1)
    while frontier:
        nxt = []
        for state in frontier:
            val, s, ln = state
            for d in digits:
                v2 = (val + d * gpow[ln]) % a if a > 1 else 0
                state2 = (v2, (s + d) % a2, (ln + 1) % p)
                if state2 == target:
                    word = _reconstruct(parents, state) + (d,)
                    return word, set(parents)
                if state2 not in parents:
                    parents[state2] = (state, d)
                    nxt.append(state2)
        frontier = nxt
    return None, set(parents)


def _reconstruct(parents, state):
    rev = []
    while parents[state] is not None:
        state, d = parents[state]
        rev.append(d)
    return tuple(reversed(rev))  # index 0 = least significant digit


# ---------------------------------------------------------------------------
# the natural numbers: joint distribution of n and its digit sum


def analyze_naturals(g: int, a: int, a2: int) -> AnalysisReport:
    """Uniform joint distribution over all of N iff some n has n = 0 mod a
    and digit sum 1 mod a2; the witness search is exact and the negative
    case carries the closed reachable set as a certificate."""
    inputs = {"g": g, "a": a, "a2": a2}
    moduli = (a, a2)
    witness, closure = _natural_witness(g, a, a2)
    classical = math.gcd(g - 1, a2) == 1
    notes = [
        "classical sufficient condition gcd(g-1, a2)=1 "
        + ("holds" if classical else "fails")
    ]
    if witness is not None:
        return AnalysisReport(
            UNIFORM,
            "thm-gelfond",
            moduli,
            table=_uniform_table(moduli),
            inputs=inputs,
            witnesses={"witness_integer": witness},
            notes=notes,
        )
    table, per_i = _naturals_chain_table(g, a, a2)
    return AnalysisReport(
        NOT_UNIFORM,
        "thm-gelfond",
        moduli,
        table=table,
        inputs=inputs,
        witnesses={"closure_certificate": sorted(closure)},
        per_i=per_i,
        notes=notes + ["no integer with value 0 mod a and digit sum 1 mod a2"],
    )


def _natural_witness(g: int, a: int, a2: int):
    """Minimal integer n >= 1 with n = 0 mod a and digit sum = 1 mod a2.

    Layered DP over (n mod a, digit sum mod a2) keeping the minimal positive
    value per state; each layer adds one more significant digit.  Values per
    state are nonincreasing and the layer map is eventually periodic, so a
    repeated (table, power) layer certifies nonexistence.
    """
    target = (0, 1 % a2)
    best: dict = {}
    seen_layers = set()
    power = 1
    powmod = 1 % a if a > 1 else 0
    while True:
        layer_key = (tuple(sorted(best.items())), powmod)
        if layer_key in seen_layers:
            break
        seen_layers.add(layer_key)
        nxt: dict = {}
        for (r, s), val in best.items():
            for d in range(g):
                r2 = (r + d * powmod) % a if a > 1 else 0
                s2 = (s + d) % a2
                v2 = val + d * power
                key = (r2, s2)
                if key not in nxt or v2 < nxt[key]:
                    nxt[key] = v2
        for d in range(1, g):  # words whose most significant digit sits here
            r2 = (d * powmod) % a if a > 1 else 0
            s2 = d % a2
            v2 = d * power
            key = (r2, s2)
            if key not in nxt or v2 < nxt[key]:
                nxt[key] = v2
        if target in nxt:
            return nxt[target], set()
        best = nxt
        power *= g
        powmod = (powmod * g) % a if a > 1 else 0
    # no witness: the closed reachable set certifies nonexistence
    closure = set()
    frontier = {(0, 0, 1 % a if a > 1 else 0)}
    while frontier:
        state = frontier.pop()
        if state in closure:
            continue
        closure.add(state)
        r, s, pw = state
        pw2 = (pw * g) % a if a > 1 else 0
        for d in range(g):
            r2 = (r + d * pw) % a if a > 1 else 0
            s2 = (s + d) % a2
            if (r2, s2, pw2) not in closure:
                frontier.add((r2, s2, pw2))
    return None, closure


def _naturals_chain_table(g: int, a: int, a2: int):
    """Limit table for N from the class-decomposed chains; cells are None
    when the per-i limits disagree or a class fails to converge.

    Runs on the minimal eventual period: every length then belongs to one
    chain, so per-class convergence gives the limit along all horizons.
    """
    from .chains import _digraph_period_dict, _sccs_dict

    fam = id_sum_family(g, a, a2)
    fc = fischer_cover(build_cover(ShiftSpec.full(g, range(g))))
    ep = find_eventual_period(fam)
    sys = ChainSystem(fc, fam, ep.p, max(ep.ell, 1))
    tables = []
    per_i = []
    for i in sys.stored_range():
        pieces = sys.decompose_classes(i)
        cell: dict = {r: Fraction(0) for r in residue_tuples(fam.moduli)}
        ok = True
        support = set()
        for piece in pieces:
            idx = {s: j for j, s in enumerate(piece.states)}
            adj = {
                s: [t for t in piece.states if piece.matrix[idx[s]][idx[t]] > 0]
                for s in piece.states
            }
            if len(_sccs_dict(adj)) > 1 or _digraph_period_dict(adj) != 1:
                ok = False
                break
            for s in piece.states:
                r, _node = sys.states.unpack(s)
                cell[r] += piece.weight * Fraction(1, len(piece.states))
                support.add(r)
        per_i.append(
            {"i": i, "support": sorted(support), "value": None, "exists": ok}
        )
        tables.append(cell if ok else None)
    if all(t is not None for t in tables) and all(t == tables[0] for t in tables):
        return tables[0], per_i
    return {r: None for r in residue_tuples(fam.moduli)}, per_i


# ---------------------------------------------------------------------------
# 1-step SFTs: the digit-pair criterion


def analyze_sft(g: int, digits, allowed, a: int, a2: int = 1) -> AnalysisReport:
    """Digit-pair sufficient condition for 1-step SFTs, with chain fallback."""
    ds = sorted(set(digits))
    allowed = {(int(x), int(y)) for x, y in allowed}
    inputs = {"g": g, "digits": ds, "a": a, "a2": a2, "pairs": sorted(allowed)}
    moduli = (a, a2)
    spec = ShiftSpec.sft1(g, ds, allowed)
    if math.gcd(g, a) != 1 or math.gcd(a, a2) != 1:
        return AnalysisReport(
            UNSUPPORTED, "thm-sft", moduli, inputs=inputs,
            notes=["needs gcd(g,a)=gcd(a,a2)=1"],
        )
    fc = sft_shortcut_presentation(spec)
    from .shifts import is_transitive

    k = regularity_k(fc)
    if k is None or not is_transitive(fc):
        return AnalysisReport(
            UNSUPPORTED, "thm-sft", moduli, inputs=inputs,
            notes=["matrix must be k-regular (k>=2) and irreducible"],
        )
    for d in ds:
        if (d, d) not in allowed:
            continue
        for d2 in ds:
            if d2 == d:
                continue
            if (d, d2) in allowed and (d2, d) in allowed and math.gcd(abs(d2 - d), a * a2) == 1:
                return AnalysisReport(
                    UNIFORM,
                    "thm-sft",
                    moduli,
                    table=_uniform_table(moduli),
                    inputs=inputs,
                    witnesses={"digit_pair": [d, d2]},
                    notes=[f"pair ({d},{d2}) self-loop plus 2-cycle, gcd {abs(d2-d)}"],
                )
    report = chain_direct(spec, a, a2)
    report.notes.insert(0, "no qualifying digit pair; chain verdict follows")
    return report


# ---------------------------------------------------------------------------
# the chain route


def _chain_system_for(fc: FischerCover, fam: GAdditiveFamily, g, a, a2, shortcut=False):
    """Chain with the application-grade period: for (id, digit-sum) pairs
    with gcd(g,a)=1 the constant-word period a2*phi(a(g-1)) keeps every
    residue-class coset closed, which the subgroup analysis relies on."""
    ep = find_eventual_period(fam)
    sync = shortest_synchronizing_length(fc)
    ell = max(ep.ell, sync, 1)
    p = ep.p
    if a is not None and math.gcd(g, a) == 1:
        p_paper = euler_period(g, a, a2)
        if p_paper % ep.p == 0:
            p = p_paper
    return ChainSystem(fc, fam, p, ell, shortcut_cover=shortcut)


def chain_direct(
    spec_or_fc,
    a: Optional[int] = None,
    a2: int = 1,
    fam: Optional[GAdditiveFamily] = None,
    shortcut: Optional[bool] = None,
) -> AnalysisReport:
    """Markov-chain verdict for any k-regular transitive sofic presentation.

    With the Markov condition the limit is uniform; otherwise the per-i
    visited chains decide between a common subgroup-supported limit, a
    rotating family of cosets (limit zero or nonexistent), and the special
    full-shift reductions when gcd(g, a) != 1.
    """
    # normalize inputs
    if isinstance(spec_or_fc, ShiftSpec):
        spec = spec_or_fc
        g = spec.base
        use_shortcut = spec.kind == "sft1" if shortcut is None else shortcut
        try:
            if use_shortcut:
                fc = sft_shortcut_presentation(spec)
                from .shifts import is_transitive

                if not is_transitive(fc) or regularity_k(fc) is None:
                    fc = fischer_cover(build_cover(spec))
                    use_shortcut = False
            else:
                fc = fischer_cover(build_cover(spec))
        except NonTransitiveError as exc:
            return AnalysisReport(
                UNSUPPORTED,
                "chain-direct",
                (a or 1, a2),
                inputs={"g": g, "a": a, "a2": a2},
                notes=[
                    f"not transitive: {len(exc.cover_sccs)} components; "
                    "analyze the parts separately"
                ],
            )
    else:
        fc = spec_or_fc
        spec = None
        g = fc.base
        use_shortcut = bool(shortcut)
    if fam is None:
        if a is None:
            raise DomainError("need either a family or moduli")
        fam = id_sum_family(g, a, a2)
        id_sum_shape = True
    else:
        id_sum_shape = False
        a = None
    moduli = fam.moduli
    inputs = {"g": g, "moduli": list(moduli)}
    if spec is not None:
        inputs["shift"] = spec.to_json()
    k = regularity_k(fc)
    if k is None:
        return AnalysisReport(
            UNSUPPORTED, "chain-direct", moduli, inputs=inputs,
            notes=["presentation is not k-regular with k >= 2"],
        )
    sys = (
        _chain_system_for(fc, fam, g, a, a2, shortcut=use_shortcut)
        if id_sum_shape
        else _chain_system_for(fc, fam, g, None, a2, shortcut=use_shortcut)
    )
    verdict = sys.markov_condition()
    if verdict["holds"]:
        return AnalysisReport(
            UNIFORM,
            "chain-direct",
            moduli,
            table=_uniform_table(moduli),
            inputs=inputs,
            notes=[f"Markov condition holds with p={sys.p}, ell={sys.ell}"],
        )
    # per-i analysis on visited supports (support-level, exact)
    supports = sys.mu_supports_range()
    limit_cache: dict = {}
    per_i = []
    residue_tables = []
    all_exist = True
    for i in sys.stored_range():
        seed = supports[i]
        if seed not in limit_cache:
            limit_cache[seed] = sys.limit_distribution(i, seed=seed)
        res = limit_cache[seed]
        marginal: dict = {}
        residues = set()
        for s in res.support:
            r, _node = sys.states.unpack(s)
            marginal[r] = marginal.get(r, 0) + 1
            residues.add(r)
        if res.exists:
            tab = {r: Fraction(c, len(res.support)) for r, c in marginal.items()}
        else:
            tab = None
            all_exist = False
        residue_tables.append(tab)
        per_i.append(
            {
                "i": i,
                "support": sorted(residues),
                "value": res.value,
                "exists": res.exists,
            }
        )
    if all_exist and all(t == residue_tables[0] for t in residue_tables):
        table = dict(residue_tables[0])
        for r in residue_tuples(moduli):
            table.setdefault(r, Fraction(0))
        support_cells = sorted(residue_tables[0])
        return AnalysisReport(
            SUBGROUP,
            "chain-direct",
            moduli,
            table=table,
            inputs=inputs,
            subgroup={"support": support_cells},
            per_i=per_i,
            notes=["all chains share one supported limit"],
        )
    if all_exist:
        # per-i limits all exist but differ: a class keeps its limit only if
        # every i assigns it the same value (usually 0); the rest oscillate
        table = {}
        for r in residue_tuples(moduli):
            values = {t.get(r, Fraction(0)) for t in residue_tables}
            table[r] = values.pop() if len(values) == 1 else None
        return AnalysisReport(
            ZERO_OR_DNE,
            "chain-direct",
            moduli,
            table=table,
            inputs=inputs,
            per_i=per_i,
            notes=["per-i supports differ: limits are zero or do not exist"],
        )
    # some restricted chain is periodic or reducible: full-shift special routes
    if spec is not None and spec.kind == "full" and id_sum_shape:
        report = _full_shift_special(spec, a, a2, inputs, per_i)
        if report is not None:
            return report
    return AnalysisReport(
        UNSUPPORTED,
        "chain-direct",
        moduli,
        inputs=inputs,
        per_i=per_i,
        notes=["restricted chain fails to converge; no special route applies"],
    )


def _full_shift_special(spec: ShiftSpec, a: int, a2: int, inputs, per_i):
    g = spec.base
    digits = spec.digits
    if set(digits) == set(range(g)):
        # the full base: the Gelfond criterion decides
        return analyze_naturals(g, a, a2)
    if a2 == 1:
        i0 = _power_hits_zero(g, a)
        if i0 is not None:
            table = _prefix_table(g, digits, a, i0)
            full = {r: table.get(r, Fraction(0)) for r in residue_tuples((a, a2))}
            return AnalysisReport(
                NOT_UNIFORM,
                "chain-direct",
                (a, a2),
                table=full,
                inputs=inputs,
                witnesses={"determining_prefix_length": i0},
                per_i=per_i,
                notes=[
                    f"a divides g^{i0}: the limit is the residue distribution "
                    f"of the last {i0} digits"
                ],
            )
    return None


def _power_hits_zero(g: int, a: int, cap: int = 64):
    x = 1 % a
    for i in range(1, cap + 1):
        x = (x * g) % a
        if x == 0:
            return i
    return None


def _prefix_table(g: int, digits, a: int, i0: int) -> dict:
    cur = {0: 1}
    power = 1
    for _ in range(i0):
        nxt: dict = {}
        for r, c in cur.items():
            for d in digits:
                r2 = (r + d * power) % a
                nxt[r2] = nxt.get(r2, 0) + c
        cur = nxt
        power = (power * g) % a
    total = sum(cur.values())
    return {(r, 0): Fraction(c, total) for r, c in cur.items()}


# ---------------------------------------------------------------------------
# dispatch


def analyze_spec(
    spec: ShiftSpec,
    a: int,
    a2: int = 1,
    functions: Optional[GAdditiveFamily] = None,
) -> AnalysisReport:
    """Route a shift spec to the sharpest applicable criterion."""
    if functions is not None:
        return chain_direct(spec, fam=functions)
    g = spec.base
    if spec.kind == "union":
        return AnalysisReport(
            UNSUPPORTED,
            "chain-direct",
            (a, a2),
            inputs={"g": g, "a": a, "a2": a2},
            notes=["union shifts are not transitive; analyze parts separately"],
        )
    if spec.kind == "full":
        if set(spec.digits) == set(range(g)):
            return analyze_naturals(g, a, a2)
        if math.gcd(g, a) == 1 and math.gcd(a, a2) == 1:
            return analyze_missing_digits(g, spec.digits, a, a2)
        if math.gcd(g, a) == 1:
            return analyze_general_pair(g, spec.digits, a, a2)
        return chain_direct(spec, a, a2)
    if spec.kind == "sft1":
        return analyze_sft(g, spec.digits, spec.allowed, a, a2)
    return chain_direct(spec, a, a2)
