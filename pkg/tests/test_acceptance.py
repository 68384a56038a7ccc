"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criterion 3's oracle-closeness clause is implemented exactly as stated
(horizon exponent 7, total variation at most 0.05).  Slowly mixing digit-sum
moduli make that bound unreachable at such a short horizon (see the
decisions ledger), so that single sub-assertion is expected to fail; the
verdict-consistency and disjoint-support clauses of the same criterion pass
and are asserted first.
"""

import math
import random
import time
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest

from conftest import brute_cover_state_counts, random_regular_sft
from digitdist.analyze import (
    SUBGROUP,
    UNIFORM,
    ZERO_OR_DNE,
    analyze_missing_digits,
    analyze_naturals,
    chain_direct,
    _chain_system_for,
)
from digitdist.chains import build_chain_system, _vec_mat
from digitdist.cli import main as cli_main
from digitdist.dimension import (
    block_sequence_shift,
    empirical_dimension,
    entropy,
    mass_dimension,
    transversality_check,
)
from digitdist.oracle import census, compare, enumerate_set, word_residue_supports
from digitdist.shifts import ShiftSpec, build_cover, fischer_cover
from digitdist.words import GAdditiveFamily, id_sum_family, identity_function

SPECS = Path(__file__).resolve().parent.parent / "specs"


def report(criterion, ok, detail=""):
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" - {detail}"
    print(line)
    return ok


def even_spec():
    return ShiftSpec.load(str(SPECS / "even3.json"))


# ---------------------------------------------------------------------------


def test_acceptance_1_d124_g6_mod12(capsys):
    t0 = time.monotonic()
    rep = chain_direct(ShiftSpec.load(str(SPECS / "d124_g6.json")), 12, 1)
    expected = {}
    for b in range(12):
        if b in (1, 2, 4):
            expected[(b, 0)] = Fraction(2, 9)
        elif b in (7, 8, 10):
            expected[(b, 0)] = Fraction(1, 9)
        else:
            expected[(b, 0)] = Fraction(0)
    exact = rep.table == expected
    table = census(
        ShiftSpec.full(6, [1, 2, 4]),
        GAdditiveFamily(6, (identity_function(6, 12),)),
        max_exponent=8,
    )
    predicted_1d = {(b,): v for (b, _s2), v in rep.table.items()}
    res = compare(predicted_1d, table, tolerance=0.02)
    cli_code = cli_main(
        ["analyze", "--shift", str(SPECS / "d124_g6.json"), "--mod", "12"]
    )
    elapsed = time.monotonic() - t0
    ok = exact and res.passed and cli_code == 0 and elapsed < 10
    with capsys.disabled():
        assert report(
            1,
            ok,
            f"table exact={exact}, tv={res.tv_distance:.5f} (<=0.02), "
            f"runtime {elapsed:.1f}s (<10s)",
        )


def test_acceptance_2_even_shift_1_35(capsys):
    t0 = time.monotonic()
    fam = id_sum_family(3, 5, 7)
    fc = fischer_cover(build_cover(even_spec()))
    sys = _chain_system_for(fc, fam, 3, 5, 7)
    verdict = sys.markov_condition()
    per_i_ok = all(
        v["irreducible"] and v["aperiodic"] for v in verdict["per_i"].values()
    )
    rep = chain_direct(even_spec(), 5, 7)
    value_ok = rep.verdict == UNIFORM and all(
        v == Fraction(1, 35) for v in rep.table.values()
    )
    table = census(even_spec(), fam, max_exponent=14)
    res = compare(rep.table, table, tolerance=0.02)
    elapsed = time.monotonic() - t0
    ok = per_i_ok and value_ok and res.passed and elapsed < 60
    with capsys.disabled():
        assert report(
            2,
            ok,
            f"markov holds for i in [{sys.ell},{sys.ell + sys.p}) "
            f"(p={sys.p}), tv={res.tv_distance:.5f} (<=0.02), "
            f"runtime {elapsed:.1f}s (<60s)",
        )


def _sweep_cases():
    for g in range(2, 11):
        digit_sets = [c for r in (2, 3) for c in combinations(range(g), r)]
        for a in range(1, 7):
            if math.gcd(g, a) != 1:
                continue
            for a2 in range(1, 7):
                if math.gcd(a, a2) != 1:
                    continue
                for digits in digit_sets:
                    yield g, digits, a, a2


@pytest.fixture(scope="module")
def trichotomy_sweep():
    t0 = time.monotonic()
    mismatches = []
    support_failures = []
    tv_failures = []
    checked = 0
    for g, digits, a, a2 in _sweep_cases():
        checked += 1
        tri = analyze_missing_digits(g, digits, a, a2, with_witness=False)
        chain = chain_direct(ShiftSpec.full(g, digits), a, a2)
        if tri.verdict != chain.verdict:
            mismatches.append((g, digits, a, a2, tri.verdict, chain.verdict))
            continue
        if tri.verdict in (UNIFORM, SUBGROUP):
            if tri.table != chain.table:
                mismatches.append((g, digits, a, a2, "table"))
                continue
            table = census(
                ShiftSpec.full(g, digits), id_sum_family(g, a, a2), max_exponent=7
            )
            res = compare(tri.table, table, tolerance=0.05)
            if not res.passed:
                tv_failures.append((g, digits, a, a2, round(res.tv_distance, 4)))
        elif tri.verdict == ZERO_OR_DNE:
            fam = id_sum_family(g, a, a2)
            spec = ShiftSpec.full(g, digits)
            predicted = {e["i"]: set(e["support"]) for e in tri.per_i}
            distinct = {frozenset(s) for s in predicted.values()}
            if len(distinct) < 2:
                support_failures.append((g, digits, a, a2, "no rotation"))
                continue
            for s1 in distinct:
                for s2 in distinct:
                    if s1 != s2 and s1 & s2:
                        support_failures.append((g, digits, a, a2, "overlap"))
            horizon = min(len(predicted), 9)
            observed = word_residue_supports(spec, fam, horizon)
            for i in range(1, horizon + 1):
                if not observed[i - 1] <= set(map(tuple, predicted[i])):
                    support_failures.append((g, digits, a, a2, f"length {i}"))
    elapsed = time.monotonic() - t0
    return {
        "checked": checked,
        "mismatches": mismatches,
        "support_failures": support_failures,
        "tv_failures": tv_failures,
        "elapsed": elapsed,
    }


def test_acceptance_3a_verdicts_agree(trichotomy_sweep, capsys):
    sweep = trichotomy_sweep
    ok = not sweep["mismatches"] and sweep["elapsed"] < 600
    with capsys.disabled():
        assert report(
            "3a (trichotomy and chain verdicts agree)",
            ok,
            f"{sweep['checked']} cases, {len(sweep['mismatches'])} disagreements, "
            f"sweep runtime {sweep['elapsed']:.0f}s (<600s)",
        )


def test_acceptance_3c_case3_supports(trichotomy_sweep, capsys):
    sweep = trichotomy_sweep
    ok = not sweep["support_failures"]
    with capsys.disabled():
        assert report(
            "3c (case-3 per-length supports disjoint as predicted)",
            ok,
            f"{len(sweep['support_failures'])} failures",
        )


def test_acceptance_3b_oracle_tv_at_m7(trichotomy_sweep, capsys):
    """Implemented exactly as stated; unattainable at this horizon.

    At m=7 the g=2 census has 255 members spread over up to 30 residue
    cells, and digit sums over clustered digit sets mix slowly (binomial
    digit-sum mass mod 6 gives tv 0.2135 for g=2, D={0,1}, a=1, a2=6), so
    a 0.05 total-variation bound cannot hold.  See the decisions ledger.
    """
    sweep = trichotomy_sweep
    tv_failures = sweep["tv_failures"]
    worst = max((t[-1] for t in tv_failures), default=0.0)
    with capsys.disabled():
        ok = report(
            "3b (oracle tv<=0.05 at m=7)",
            not tv_failures,
            f"{len(tv_failures)} of {sweep['checked']} cases exceed the "
            f"bound; worst tv {worst} (slow digit-sum mixing: see ledger)",
        )
    assert ok, (
        f"{len(tv_failures)} cases exceed tv 0.05 at m=7; the bound is "
        "unreachable at this horizon for slowly mixing digit-sum moduli "
        "(spec defect; analysis in the decisions ledger)"
    )


def test_acceptance_4_exact_algebra(capsys):
    t0 = time.monotonic()
    rng = random.Random(20240601)
    stochastic_ok = True
    evolution_ok = True
    count_ok = True
    count_checks = 0
    for trial in range(20):
        spec, fc = random_regular_sft(rng)
        a = rng.randrange(1, 5)
        a2 = rng.randrange(1, 4)
        fam = id_sum_family(spec.base, a, a2)
        sys = build_chain_system(fc, fam, shortcut_cover=True)
        i = sys.ell
        mat = sys.transition_matrix(i)  # double stochasticity verified inside
        n = len(mat)
        uniform = [Fraction(1, n)] * n
        if _vec_mat(uniform, mat) != uniform:
            stochastic_ok = False
        if sys.evolve(i, 1) != sys.initial_distribution(i + sys.p):
            evolution_ok = False
        # integer-count identity at i+np <= 12, kept to enumerable sizes
        length = i + sys.p
        paths = len(fc.nodes) * (sys.k**length)
        if length <= 12 and paths <= 300_000:
            counts = brute_cover_state_counts(fc, fam, sys.ell, length)
            total = sum(counts.values())
            vec = sys.evolve(i, 1)
            for s, val in enumerate(vec):
                r, node = sys.states.unpack(s)
                if val * total != counts.get((r, node), 0):
                    count_ok = False
            count_checks += 1
    elapsed = time.monotonic() - t0
    ok = stochastic_ok and evolution_ok and count_ok and count_checks >= 8
    with capsys.disabled():
        assert report(
            4,
            ok,
            f"20 covers: doubly stochastic={stochastic_ok}, "
            f"evolution law={evolution_ok}, count identity on "
            f"{count_checks} covers={count_ok}, runtime {elapsed:.0f}s",
        )


def test_acceptance_5_gelfond(capsys):
    t0 = time.monotonic()
    neg = analyze_naturals(10, 9, 3)
    cert = neg.witnesses.get("closure_certificate", [])
    states = set(map(tuple, cert))
    cert_ok = neg.verdict != UNIFORM and bool(states)
    for r, s, pw in states:
        if r == 0 and s == 1:
            cert_ok = False
        for d in range(10):
            if ((r + d * pw) % 9, (s + d) % 3, (pw * 10) % 9) not in states:
                cert_ok = False
    pos = analyze_naturals(10, 2, 2)
    pos_ok = pos.verdict == UNIFORM and pos.witnesses["witness_integer"] == 10
    classical_ok = True
    for a in range(1, 9):
        for a2 in range(1, 9):
            if math.gcd(9, a2) != 1:
                continue
            if analyze_naturals(10, a, a2).verdict != UNIFORM:
                classical_ok = False
    elapsed = time.monotonic() - t0
    ok = cert_ok and pos_ok and classical_ok and elapsed < 5
    with capsys.disabled():
        assert report(
            5,
            ok,
            f"certificate exact={cert_ok}, witness-10={pos_ok}, "
            f"classical sweep={classical_ok}, runtime {elapsed:.2f}s (<5s)",
        )


def test_acceptance_6_dimension(capsys):
    t0 = time.monotonic()
    phi = (1 + math.sqrt(5)) / 2
    golden = ShiftSpec.load(str(SPECS / "golden2.json"))
    golden_ok = abs(entropy(golden) - math.log(phi)) < 1e-9
    sizes_ok = True
    for size in range(2, 10):
        est = mass_dimension(ShiftSpec.full(10, range(1, size + 1)), m_max=5)
        if abs(est.exact - math.log(size) / math.log(10)) >= 1e-9:
            sizes_ok = False
    union = ShiftSpec.load(str(SPECS / "union5.json"))
    est_full = mass_dimension(union, m_max=12)
    est_prog = empirical_dimension(union, progression=(5, 0), m_max=12)
    full_dev = abs(est_full.fitted_slope - math.log(3) / math.log(5))
    prog_dev = abs(est_prog.fitted_slope - math.log(2) / math.log(5))
    union_ok = full_dev < 0.03 and prog_dev < 0.03
    elapsed = time.monotonic() - t0
    ok = golden_ok and sizes_ok and union_ok
    with capsys.disabled():
        assert report(
            6,
            ok,
            f"golden entropy 1e-9={golden_ok}, |D| dims 1e-9={sizes_ok}, "
            f"union devs {full_dev:.4f}/{prog_dev:.4f} (<0.03), "
            f"runtime {elapsed:.0f}s",
        )


def test_acceptance_7_transversality(capsys):
    t0 = time.monotonic()
    cases = [
        (ShiftSpec.full(10, [1, 2, 4]), 10),
        (ShiftSpec.full(5, [0, 2]), 12),
        (ShiftSpec.load(str(SPECS / "golden2.json")), 20),
        (even_spec(), 13),
        (ShiftSpec.load(str(SPECS / "sgap12.json")), 22),
    ]
    failures = []
    for spec, m_max in cases:
        full = empirical_dimension(spec, m_max=m_max)
        members_all = None
        for a in range(1, 7):
            for b in range(a):
                res = transversality_check(spec, a, b)
                if res.verdict == "finite-intersection":
                    if members_all is None:
                        members_all = list(enumerate_set(spec, max_exponent=m_max))
                    actual = {n for n in members_all if n % a == b}
                    if actual != set(res.members) or len(res.members) > spec.base**a:
                        failures.append((spec.kind, a, b, "finite-listing"))
                else:
                    emp = empirical_dimension(spec, progression=(a, b), m_max=m_max)
                    if emp.fitted_slope is None:
                        failures.append((spec.kind, a, b, "empty"))
                    elif abs(emp.fitted_slope - full.fitted_slope) >= 0.05:
                        failures.append(
                            (spec.kind, a, b,
                             round(abs(emp.fitted_slope - full.fitted_slope), 4))
                        )
    elapsed = time.monotonic() - t0
    ok = not failures
    with capsys.disabled():
        assert report(
            7,
            ok,
            f"5 shifts x 21 progressions, failures={failures[:4]}, "
            f"runtime {elapsed:.0f}s",
        )


def test_acceptance_8_block_construction(capsys):
    t0 = time.monotonic()
    seq = block_sequence_shift(3, [0, 1], 2, 10)
    est_full, est_marker = seq.dimension_estimates()
    target = 0.5 * math.log(2) / math.log(3)
    dev = abs(est_marker.fitted_slope - target)
    elapsed = time.monotonic() - t0
    ok = dev < 0.05 and elapsed < 120
    with capsys.disabled():
        assert report(
            8,
            ok,
            f"marker slope {est_marker.fitted_slope:.4f} vs half-dimension "
            f"{target:.4f} (dev {dev:.4f} < 0.05), full slope "
            f"{est_full.fitted_slope:.4f}, runtime {elapsed:.1f}s (<120s)",
        )
