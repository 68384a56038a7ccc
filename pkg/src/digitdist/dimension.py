"""Topological entropy, mass dimension and transversality with progressions.

Entropy comes from the Perron eigenvalue of the determinized transfer
structure (exact word counts), mass dimension is entropy over log g, and
the transversality decision reduces to a bounded search for a short word
carrying the right residue.  Empirical slopes from the enumeration oracle
back every exact value.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .oracle import enumerate_set
from .shifts import (
    Cover,
    DetAutomaton,
    FischerCover,
    ShiftSpec,
    build_cover,
    fischer_cover,
    language_count,
)
from .words import DomainError, Word

POWER_TOL = 1e-12
POWER_CAP = 10**5


# ---------------------------------------------------------------------------
# entropy


def _as_cover(obj) -> Cover:
    if isinstance(obj, ShiftSpec):
        return build_cover(obj)
    if isinstance(obj, FischerCover):
        return obj.as_cover()
    return obj


def perron_eigenvalue(obj) -> float:
    """Largest eigenvalue of the determinized word-transfer matrix.

    Deterministic power iteration from the all-ones vector to relative
    tolerance 1e-12; falls back to the log-count slope if the cap is hit.
    """
    cover = _as_cover(obj)
    dfa = DetAutomaton(cover)
    mat = np.array(dfa.transition_counts(), dtype=float)
    v = np.ones(mat.shape[0])
    lam = 0.0
    for _ in range(POWER_CAP):
        w = mat.T @ v  # column action: counts words by terminal state
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        new_lam = norm / np.linalg.norm(v)
        v = w / norm
        if lam and abs(new_lam - lam) <= POWER_TOL * max(1.0, abs(lam)):
            return float(new_lam)
        lam = new_lam
    # periodic or slowly converging: use the exact-count slope instead
    lo, hi = 30, 40
    c_lo, c_hi = language_count(cover, lo), language_count(cover, hi)
    if c_lo == 0 or c_hi == 0:
        return 0.0
    return math.exp((math.log(c_hi) - math.log(c_lo)) / (hi - lo))


def entropy(obj) -> float:
    """Topological entropy: log of the Perron eigenvalue."""
    lam = perron_eigenvalue(obj)
    if lam <= 0:
        raise DomainError("empty language has no entropy")
    if lam < 1:
        return 0.0
    return math.log(lam)


def entropy_count_slope(obj, lo: int = 30, hi: int = 40) -> float:
    """Slope of log |L^n| over [lo, hi]; exact counts, float logs."""
    cover = _as_cover(obj)
    c_lo = language_count(cover, lo)
    c_hi = language_count(cover, hi)
    if c_lo == 0 or c_hi == 0:
        return 0.0
    return (math.log(c_hi) - math.log(c_lo)) / (hi - lo)


# ---------------------------------------------------------------------------
# dimension estimates


@dataclass
class DimensionEstimate:
    base: int
    eigenvalue: Optional[float] = None
    counts: list = field(default_factory=list)  # (m, |A cap [0, g^m)|)
    fitted_slope: Optional[float] = None
    lower_slope: Optional[float] = None
    upper_slope: Optional[float] = None
    empty_at_horizon: bool = False

    @property
    def exact(self) -> Optional[float]:
        if self.eigenvalue is None or self.eigenvalue <= 0:
            return None
        return max(math.log(self.eigenvalue), 0.0) / math.log(self.base)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "base": self.base,
            "exact": (
                None
                if self.eigenvalue is None
                else {"eigenvalue": self.eigenvalue, "value": self.exact}
            ),
            "empirical": {
                "counts": [[m, c] for m, c in self.counts],
                "fit": self.fitted_slope,
                "lower": self.lower_slope,
                "upper": self.upper_slope,
            },
            "empty_at_horizon": self.empty_at_horizon,
        }


def _slope_fit(counts, g) -> tuple:
    """Least-squares slope of log count against m log g on the last third."""
    pts = [(m * math.log(g), math.log(c)) for m, c in counts if c > 0]
    if len(pts) < 2:
        return None, None, None
    window = pts[-max(2, len(pts) // 3) :]
    xs = [x for x, _ in window]
    ys = [y for _, y in window]
    n = len(window)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    denom = sum((x - xbar) ** 2 for x in xs)
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / denom
    steps = [
        (y2 - y1) / (x2 - x1)
        for (x1, y1), (x2, y2) in zip(window, window[1:])
        if x2 > x1
    ]
    lower = max(0.0, min(min(steps, default=slope), slope))
    upper = min(1.0, max(max(steps, default=slope), slope))
    return slope, lower, upper


def _counts_from_values(values, g, m_max) -> list:
    values = sorted(values)
    return [(m, bisect_left(values, g**m)) for m in range(1, m_max + 1)]


def mass_dimension(spec: ShiftSpec, m_max: int = 10) -> DimensionEstimate:
    """Exact dimension h/log g plus empirical slopes from set counts."""
    lam = perron_eigenvalue(spec)
    members = list(enumerate_set(spec, max_exponent=m_max))
    counts = _counts_from_values(members, spec.base, m_max)
    fit, lower, upper = _slope_fit(counts, spec.base)
    return DimensionEstimate(
        base=spec.base,
        eigenvalue=lam,
        counts=counts,
        fitted_slope=fit,
        lower_slope=lower,
        upper_slope=upper,
        empty_at_horizon=not members,
    )


def empirical_dimension(
    spec: ShiftSpec,
    progression: Optional[tuple[int, int]] = None,
    m_max: int = 12,
) -> DimensionEstimate:
    """Slope estimate for A (optionally intersected with a*N + b)."""
    g = spec.base
    if progression is None:
        members = enumerate_set(spec, max_exponent=m_max)
    else:
        a, b = progression
        members = (n for n in enumerate_set(spec, max_exponent=m_max) if n % a == b % a)
    values = list(members)
    counts = _counts_from_values(values, g, m_max)
    fit, lower, upper = _slope_fit(counts, g)
    return DimensionEstimate(
        base=g,
        eigenvalue=None,
        counts=counts,
        fitted_slope=fit,
        lower_slope=lower,
        upper_slope=upper,
        empty_at_horizon=not values,
    )


# ---------------------------------------------------------------------------
# transversality with arithmetic progressions


@dataclass
class TransversalityResult:
    verdict: str  # "equal-dimension" | "finite-intersection"
    witness: Optional[Word] = None
    members: Optional[list] = None

    def to_json(self) -> dict:
        obj = {"verdict": self.verdict}
        if self.witness is not None:
            obj["witness"] = list(self.witness.digits)
        if self.members is not None:
            obj["members"] = list(self.members)
        return obj


def transversality_check(spec: ShiftSpec, a: int, b: int) -> TransversalityResult:
    """Decide dim(A cap (aN+b)) in {0, dim A} for a transitive sofic shift.

    Searches for a word of length >= a-1 whose value is b mod a; the length
    counter saturates at a-1, and positions enter only through g^len mod a,
    so the search space is finite and the negative answer is a certificate:
    the intersection is then listed exactly (all members below g^(a-1)).
    """
    if a < 1:
        raise DomainError("progression modulus must be >= 1")
    b %= a
    fc = fischer_cover(build_cover(spec))
    g = spec.base
    # orbit of g^len mod a: tail + cycle, indexed deterministically
    orbit = []
    index = {}
    x = 1 % a
    while x not in index:
        index[x] = len(orbit)
        orbit.append(x)
        x = (x * g) % a
    succ = [index[(v * g) % a] for v in orbit]
    min_len = max(a - 1, 1)

    start_states = [(n, 0, 0, 0) for n in fc.nodes]  # node, r, power idx, len cap
    parents = {s: None for s in start_states}
    frontier = list(start_states)
    while frontier:
        nxt = []
        for state in frontier:
            node, r, pi, cap = state
            for v, d in fc.out_edges(node):
                r2 = (r + d * orbit[pi]) % a
                state2 = (v, r2, succ[pi], min(cap + 1, min_len))
                if state2 in parents:
                    continue
                parents[state2] = (state, d)
                if state2[3] >= min_len and r2 == b:
                    digits = []
                    cur = state2
                    while parents[cur] is not None:
                        cur, dd = parents[cur]
                        digits.append(dd)
                    word = Word(g, tuple(reversed(digits)))
                    return TransversalityResult("equal-dimension", witness=word)
                nxt.append(state2)
        frontier = nxt
    # no witness: every member has a word shorter than a-1
    members = [
        n for n in enumerate_set(spec, max_exponent=max(a - 1, 1)) if n % a == b
    ]
    members = [n for n in members if n < g ** max(a - 1, 1)]
    return TransversalityResult("finite-intersection", members=members)


# ---------------------------------------------------------------------------
# count matrices (non-normalized chain data)


def count_matrix(sys, i: int) -> list:
    """The integer matrix k^p * M_i, entrywise exact."""
    mat = sys.transition_matrix(i)
    scale = sys.k**sys.p
    out = []
    for row in mat:
        out_row = []
        for c in row:
            v = c * scale
            if v.denominator != 1:
                raise DomainError("count matrix must be integral")
            out_row.append(v.numerator)
        out.append(out_row)
    return out


def nu_vector(sys, i: int) -> list:
    """Word counts by (residue, node) over the restricted language."""
    counts = sys._restricted_state_counts(i)
    vec = [0] * sys.states.size()
    for (r, node), c in counts.items():
        vec[sys.states.index(r, node)] = c
    return vec


# ---------------------------------------------------------------------------
# transitive non-sofic counterexample: the block-concatenation sequence


class BlockSequence:
    """Prefix of the sequence obtained by concatenating, for k = 0..i_max,
    every word of the form (marker, d^k, z) with z over the digit set.

    The marker digit is outside the digit set, so marker positions are rare
    and the set of values read in windows starting at a marker has half the
    exponent growth of the full window-value set.
    """

    def __init__(self, g: int, digits, marker: int, i_max: int):
        digits = tuple(sorted(set(digits)))
        if marker in digits:
            raise DomainError("marker digit must lie outside the digit set")
        if not digits or i_max < 0:
            raise DomainError("need digits and i_max >= 0")
        if i_max > 12:
            raise DomainError("i_max above 12 materializes too much")
        self.base = g
        self.digits = digits
        self.marker = marker
        self.i_max = i_max
        self.d = digits[0]
        seq: list[int] = []
        for k in range(i_max + 1):
            for z in self._tuples(k):
                seq.append(marker)
                seq.extend([self.d] * k)
                seq.extend(z)
        self.sequence = tuple(seq)

    def _tuples(self, k):
        if k == 0:
            yield ()
            return
        for rest in self._tuples(k - 1):
            for d in self.digits:
                yield rest + (d,)

    def block_size(self, k: int) -> int:
        return len(self.digits) ** k

    def window_values(self, m_max: int) -> tuple[set, set]:
        """Values of all windows of length <= m_max, and of those starting
        at the marker digit (the progression g*N + marker)."""
        g = self.base
        seq = self.sequence
        all_vals: set[int] = set()
        marker_vals: set[int] = set()
        n = len(seq)
        for m in range(1, m_max + 1):
            if m > n:
                break
            # rolling value of seq[o:o+m] with index 0 least significant
            val = 0
            for t in range(m):
                val += seq[t] * g**t
            top = g ** (m - 1)
            for o in range(n - m + 1):
                all_vals.add(val)
                if seq[o] == self.marker:
                    marker_vals.add(val)
                if o + m < n:
                    val = (val - seq[o]) // g + seq[o + m] * top
        return all_vals, marker_vals

    def dimension_estimates(self, m_max: Optional[int] = None):
        """(full-set estimate, marker-progression estimate).

        The materialized prefix carries every word up to length i_max, so
        the full-set counts stop there; marker windows of length up to
        2*i_max keep appearing inside the stored blocks, so the progression
        estimate uses the doubled horizon.
        """
        if m_max is None:
            m_max = 2 * self.i_max
        all_vals, marker_vals = self.window_values(m_max)
        full = _counts_from_values(all_vals, self.base, min(m_max, self.i_max))
        mark = _counts_from_values(marker_vals, self.base, m_max)
        est_full = DimensionEstimate(self.base, counts=full)
        est_full.fitted_slope, est_full.lower_slope, est_full.upper_slope = _slope_fit(
            full, self.base
        )
        est_mark = DimensionEstimate(self.base, counts=mark)
        est_mark.fitted_slope, est_mark.lower_slope, est_mark.upper_slope = _slope_fit(
            mark, self.base
        )
        est_mark.empty_at_horizon = not marker_vals
        return est_full, est_mark


def block_sequence_shift(g: int, digits, marker: int, i_max: int) -> BlockSequence:
    return BlockSequence(g, digits, marker, i_max)


# ---------------------------------------------------------------------------
# S-gap ladders


def sgap_dimension_ladder(gaps, a: int, b: int) -> list[dict]:
    """Exact dimensions of the S_n-gap sets intersected with a*N+b, for the
    increasing truncations S_n of the gap set."""
    gaps = sorted(set(gaps))
    out = []
    for n in range(1, len(gaps) + 1):
        spec = ShiftSpec.sgap(2, gaps[:n])
        lam = perron_eigenvalue(spec)
        h = math.log(lam) if lam > 1 else 0.0
        res = transversality_check(spec, a, b)
        dim = h / math.log(spec.base)
        out.append(
            {
                "gaps": gaps[:n],
                "entropy": h,
                "dimension": dim,
                "intersection_dimension": dim if res.verdict == "equal-dimension" else 0.0,
                "verdict": res.verdict,
            }
        )
    return out
