"""Markov chains on residue-vector x cover-node state spaces.

The transition matrix counts length-p extension words between cover nodes,
grouped by the residue increment they carry, normalized by k^p on a
k-regular presentation.  Entries are exact rationals; reachability
diagnostics (irreducibility, period, visited support) run on the positive
support only, which keeps large sweeps cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .shifts import FischerCover, regularity_k
from .shifts import _fc_subsets  # shared subset automaton
from .words import (
    EventualPeriod,
    GAdditiveFamily,
    Word,
    residue_tuples,
    verify_period,
)

EVOLVE_CAP = 2**16


class ChainError(ValueError):
    """Chain construction or evolution outside the supported domain."""


@dataclass(frozen=True)
class StateSpace:
    """Z_a1 x ... x Z_ar x nodes, residues lexicographic then cover order."""

    moduli: tuple[int, ...]
    nodes: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "_residues", tuple(residue_tuples(self.moduli)))
        object.__setattr__(
            self, "_ridx", {r: i for i, r in enumerate(self._residues)}
        )
        object.__setattr__(self, "_nidx", {n: i for i, n in enumerate(self.nodes)})

    @property
    def residues(self) -> tuple:
        return self._residues

    def size(self) -> int:
        return len(self._residues) * len(self.nodes)

    def index(self, residue: tuple, node: str) -> int:
        return self._ridx[residue] * len(self.nodes) + self._nidx[node]

    def unpack(self, idx: int) -> tuple[tuple, str]:
        r, n = divmod(idx, len(self.nodes))
        return self._residues[r], self.nodes[n]

    def labels(self) -> list[str]:
        return [
            "(" + ",".join(map(str, r)) + "|" + n + ")"
            for r in self._residues
            for n in self.nodes
        ]

    def add(self, r1: tuple, r2: tuple) -> tuple:
        return tuple((x + y) % m for x, y, m in zip(r1, r2, self.moduli))

    def sub(self, r1: tuple, r2: tuple) -> tuple:
        return tuple((x - y) % m for x, y, m in zip(r1, r2, self.moduli))


@dataclass
class LimitResult:
    exists: bool
    support: frozenset
    value: Optional[Fraction]
    cyclic_classes: list
    reason: str


@dataclass
class ChainPiece:
    """One communicating class: states, restricted matrix, restricted initial
    distribution, and its weight under the unrestricted initial distribution."""

    states: tuple[int, ...]
    matrix: list
    initial: list
    weight: Fraction


class ChainSystem:
    """All chain data for a family over a regular right-resolving cover.

    Matrices and distributions are stored for i in [ell, ell+p) only
    (extension sets repeat with period p there); other i are computed on
    demand.  On a one-node cover the matrix is i-independent for i >= ell
    because the increment kernels commute, so a single matrix is kept.
    """

    def __init__(
        self,
        fc: FischerCover,
        fam: GAdditiveFamily,
        p: int,
        ell: int,
        shortcut_cover: bool = False,
    ):
        if fam.base != fc.base:
            raise ChainError("family and cover base mismatch")
        if p < 1 or ell < 1:
            raise ChainError("need p >= 1 and ell >= 1 (words represent integers)")
        k = regularity_k(fc)
        if k is None:
            raise ChainError("regularity required by the k-regular construction")
        verify_period(fam, EventualPeriod(p, ell))
        self.fc = fc
        self.fam = fam
        self.p = p
        self.ell = ell
        self.k = k
        self.shortcut_cover = shortcut_cover
        self.states = StateSpace(fam.moduli, fc.nodes)
        self._matrices: dict = {}
        self._supports: dict = {}
        self._mus: dict[int, list] = {}
        self._diags: dict = {}
        self._sigs: dict[int, tuple] = {}

    # -- i bookkeeping ----------------------------------------------------

    def stored_range(self) -> range:
        return range(self.ell, self.ell + self.p)

    def _key(self, i: int) -> int:
        if i < 1:
            raise ChainError("extension step needs i >= 1")
        if i < self.ell:
            return i  # before the periodic regime: computed fresh
        if len(self.fc.nodes) == 1:
            return max(self.ell, 1)  # increment kernels commute: one matrix
        key = self.ell + (i - self.ell) % self.p
        return key if key >= 1 else key + self.p

    def _sig(self, i: int):
        """Kernel signature of the extension window at i: two windows with
        equal per-step increment tables have identical E-sets, which is much
        finer sharing than the period p (often p/ord copies of one matrix)."""
        key = self._key(i)
        sig = self._sigs.get(key)
        if sig is None:
            sig = tuple(
                tuple(self.fam.term_vector(d, key + j) for d in range(self.fam.base))
                for j in range(self.p)
            )
            self._sigs[key] = sig
        return sig

    # -- extension sets and counts ----------------------------------------

    def extension_counts(self, i: int) -> dict:
        """counts[start_node][(residue, end_node)] = |E_i(residue, F, F')|."""
        out = {}
        for start in self.fc.nodes:
            cur = {(start, (0,) * len(self.fam.moduli)): 1}
            for j in range(self.p):
                nxt: dict = {}
                for (node, r), c in cur.items():
                    for v, d in self.fc.out_edges(node):
                        r2 = self.states.add(r, self.fam.term_vector(d, i + j))
                        key = (v, r2)
                        nxt[key] = nxt.get(key, 0) + c
                cur = nxt
            out[start] = {(r, v): c for (v, r), c in cur.items()}
        return out

    def extension_support(self, i: int) -> dict:
        """Support-only variant: start_node -> set of (residue, end_node)."""
        out = {}
        for start in self.fc.nodes:
            cur = {(start, (0,) * len(self.fam.moduli))}
            for j in range(self.p):
                nxt = set()
                for node, r in cur:
                    for v, d in self.fc.out_edges(node):
                        nxt.add((v, self.states.add(r, self.fam.term_vector(d, i + j))))
                cur = nxt
            out[start] = {(r, v) for (v, r) in cur}
        return out

    def extension_set(self, i: int, residue: tuple, start: str, end: str) -> set:
        """The words of E_i(residue, F, F') themselves; explicit path walk."""
        if self.k**self.p > 2 * 10**6:
            raise ChainError("extension set too large to materialize; use counts")
        residue = tuple(b % a for b, a in zip(residue, self.fam.moduli))
        found = set()

        def rec(node, r, word):
            if len(word) == self.p:
                if node == end and r == residue:
                    found.add(Word(self.fam.base, tuple(word)))
                return
            for v, d in self.fc.out_edges(node):
                word.append(d)
                rec(v, self.states.add(r, self.fam.term_vector(d, i + len(word) - 1)), word)
                word.pop()

        rec(start, (0,) * len(self.fam.moduli), [])
        return found

    # -- matrices ----------------------------------------------------------

    def transition_matrix(self, i: int) -> list:
        """Doubly stochastic rational matrix M_i, verified on construction."""
        key = self._sig(i)
        if key not in self._matrices:
            counts = self.extension_counts(self._key(i))
            n = self.states.size()
            denom = self.k**self.p
            mat = [[Fraction(0)] * n for _ in range(n)]
            for r_b in self.states.residues:
                for start in self.fc.nodes:
                    s = self.states.index(r_b, start)
                    for (inc, end), c in counts[start].items():
                        t = self.states.index(self.states.add(r_b, inc), end)
                        mat[s][t] += Fraction(c, denom)
            one = Fraction(1)
            for row in mat:
                if sum(row) != one:
                    raise ChainError("row sums must be exactly 1")
            for col in range(n):
                if sum(mat[row][col] for row in range(n)) != one:
                    raise ChainError("column sums must be exactly 1")
            self._matrices[key] = mat
        return self._matrices[key]

    def transition_adjacency(self, i: int) -> list:
        """Positive-entry successor lists over state indices."""
        key = self._sig(i)
        if key not in self._supports:
            support = self.extension_support(self._key(i))
            n = self.states.size()
            adj: list[list[int]] = [[] for _ in range(n)]
            for r_b in self.states.residues:
                for start in self.fc.nodes:
                    s = self.states.index(r_b, start)
                    adj[s] = sorted(
                        self.states.index(self.states.add(r_b, inc), end)
                        for (inc, end) in support[start]
                    )
            self._supports[key] = adj
        return self._supports[key]

    def matrix_csv(self, i: int) -> str:
        mat = self.transition_matrix(i)
        labels = self.states.labels()
        lines = ["state," + ",".join(labels)]
        for lab, row in zip(labels, mat):
            lines.append(
                lab + "," + ",".join(f"{c.numerator}/{c.denominator}" for c in row)
            )
        return "\n".join(lines) + "\n"

    # -- initial distributions ---------------------------------------------

    def initial_distribution(self, i: int) -> list:
        """mu_i as exact rationals over the state space.

        For i below the chain's ell (used by the class-decomposition route)
        the prefix restriction drops to the largest admissible length, which
        still needs a synchronizing word; full shifts always qualify.
        """
        if i in self._mus:
            return self._mus[i]
        counts = self._restricted_state_counts(i)
        total = sum(counts.values())
        if total == 0:
            raise ChainError("empty restricted language")
        vec = [Fraction(0)] * self.states.size()
        for (r, node), c in counts.items():
            vec[self.states.index(r, node)] = Fraction(c, total)
        if self.ell <= i < self.ell + self.p:
            self._mus[i] = vec
        return vec

    def _restricted_state_counts(self, i: int) -> dict:
        """Counts of words in the ell-restricted language of length i, by
        (residue of the whole word, follower node)."""
        from .shifts import shortest_synchronizing_length

        ell_eff = min(self.ell, i)
        if ell_eff < self.ell:
            sync = shortest_synchronizing_length(self.fc)
            if ell_eff < sync:
                raise ChainError(
                    f"mu_{i} needs a synchronizing word of length <= {i}"
                )
        sub = _fc_subsets(self.fc)
        dfa = sub.dfa
        zero = (0,) * len(self.fam.moduli)
        start = dfa.index[frozenset(self.fc.nodes)]
        cur = {(start, zero): 1}
        for j in range(ell_eff):
            nxt: dict = {}
            for (si, r), c in cur.items():
                for d, sj in dfa.adj[si].items():
                    key = (sj, self.states.add(r, self.fam.term_vector(d, j)))
                    nxt[key] = nxt.get(key, 0) + c
            cur = nxt
        node_cur: dict = {}
        for (si, r), c in cur.items():
            node = sub.resolve(dfa.states[si])
            if node is not None:
                key = (node, r)
                node_cur[key] = node_cur.get(key, 0) + c
        for j in range(ell_eff, i):
            nxt = {}
            for (node, r), c in node_cur.items():
                for v, d in self.fc.out_edges(node):
                    key = (v, self.states.add(r, self.fam.term_vector(d, j)))
                    nxt[key] = nxt.get(key, 0) + c
            node_cur = nxt
        return {(r, node): c for (node, r), c in node_cur.items()}

    def initial_support(self, i: int) -> frozenset:
        mu = self.initial_distribution(i)
        return frozenset(s for s, v in enumerate(mu) if v > 0)

    def mu_supports_range(self) -> dict:
        """Support of mu_i for every stored i, in one cumulative pass."""
        sub = _fc_subsets(self.fc)
        dfa = sub.dfa
        zero = (0,) * len(self.fam.moduli)
        cur = {(dfa.index[frozenset(self.fc.nodes)], zero)}
        for j in range(self.ell):
            cur = {
                (sj, self.states.add(r, self.fam.term_vector(d, j)))
                for (si, r) in cur
                for d, sj in dfa.adj[si].items()
            }
        node_cur = set()
        for si, r in cur:
            node = sub.resolve(dfa.states[si])
            if node is not None:
                node_cur.add((node, r))
        out = {}
        j = self.ell
        for i in self.stored_range():
            while j < i:
                node_cur = {
                    (v, self.states.add(r, self.fam.term_vector(d, j)))
                    for (node, r) in node_cur
                    for v, d in self.fc.out_edges(node)
                }
                j += 1
            out[i] = frozenset(self.states.index(r, node) for node, r in node_cur)
        return out

    # -- evolution -----------------------------------------------------------

    def evolve(self, i: int, n: int) -> list:
        """mu_i M_i^n by exact repeated squaring."""
        if n < 0:
            raise ChainError("need n >= 0")
        if n > EVOLVE_CAP:
            raise ChainError(f"evolution cap {EVOLVE_CAP} exceeded")
        vec = list(self.initial_distribution(i))
        if n == 0:
            return vec
        mat = self.transition_matrix(i)
        power = n
        base = mat
        while power:
            if power & 1:
                vec = _vec_mat(vec, base)
            power >>= 1
            if power:
                base = _mat_mat(base, base)
        return vec

    # -- diagnostics ----------------------------------------------------------

    def chain_diagnostics(self, i: int) -> dict:
        """Irreducibility, period and SCC partition of the positive digraph."""
        key = self._sig(i)
        if key not in self._diags:
            adj = self.transition_adjacency(i)
            sccs = _sccs(adj)
            if len(sccs) == 1:
                period = _digraph_period(adj, range(len(adj)))
                self._diags[key] = {
                    "irreducible": True,
                    "aperiodic": period == 1,
                    "period": period,
                    "sccs": sccs,
                }
            else:
                self._diags[key] = {
                    "irreducible": False,
                    "aperiodic": False,
                    "period": 0,
                    "sccs": sccs,
                }
        return self._diags[key]

    def markov_condition(self) -> dict:
        """Per-i verdicts for the stored range plus the combined condition."""
        per_i = {i: self.chain_diagnostics(i) for i in self.stored_range()}
        holds = all(v["irreducible"] and v["aperiodic"] for v in per_i.values())
        return {"holds": holds, "per_i": per_i}

    def limit_distribution(self, i: int, seed: Optional[frozenset] = None) -> LimitResult:
        """Limit of the chain on its visited support, when it exists.

        The visited support is the forward closure of supp(mu_i); the
        restriction of a doubly stochastic matrix to a closed support is
        still doubly stochastic, so the limit value is uniform there.
        An explicit seed support skips the exact-count mu computation.
        """
        adj = self.transition_adjacency(i)
        if seed is None:
            seed = self.initial_support(i)
        visited = _forward_closure(adj, seed)
        restricted = {s: [t for t in adj[s] if t in visited] for s in sorted(visited)}
        comp = _sccs_dict(restricted)
        if len(comp) > 1:
            return LimitResult(
                exists=False,
                support=frozenset(visited),
                value=None,
                cyclic_classes=[sorted(c) for c in comp],
                reason="reducible on visited support",
            )
        period = _digraph_period_dict(restricted)
        if period != 1:
            classes = _cyclic_classes(restricted, period)
            return LimitResult(
                exists=False,
                support=frozenset(visited),
                value=None,
                cyclic_classes=classes,
                reason=f"periodic with period {period}",
            )
        return LimitResult(
            exists=True,
            support=frozenset(visited),
            value=Fraction(1, len(visited)),
            cyclic_classes=[],
            reason="irreducible aperiodic on visited support",
        )

    def decompose_classes(self, i: int) -> list[ChainPiece]:
        """Communicating classes of the visited chain with exact pieces."""
        mu = self.initial_distribution(i)
        adj = self.transition_adjacency(i)
        seed = frozenset(s for s, v in enumerate(mu) if v > 0)
        visited = _forward_closure(adj, seed)
        restricted = {s: [t for t in adj[s] if t in visited] for s in sorted(visited)}
        comps = _sccs_dict(restricted)
        comp_of = {}
        for ci, comp in enumerate(comps):
            for s in comp:
                comp_of[s] = ci
        for s in visited:
            for t in restricted[s]:
                if comp_of[t] != comp_of[s]:
                    raise ChainError(
                        "visited class is not closed; construction bug"
                    )
        mat = self.transition_matrix(i)
        pieces = []
        for comp in comps:
            states = tuple(sorted(comp))
            weight = sum((mu[s] for s in states), Fraction(0))
            sub = [[mat[s][t] for t in states] for s in states]
            for row in sub:
                if sum(row) != 1:
                    raise ChainError("restricted matrix is not stochastic")
            init = (
                [mu[s] / weight for s in states]
                if weight > 0
                else [Fraction(0)] * len(states)
            )
            pieces.append(ChainPiece(states, sub, init, weight))
        pieces.sort(key=lambda p: p.states)
        return pieces

    def spectral_gap_estimate(self, i: int, horizon: int = 20) -> dict:
        """Measured second-eigenvalue modulus and TV-to-uniform table."""
        import numpy as np

        limit = self.limit_distribution(i)
        tv = []
        mu = self.initial_distribution(i)
        mat = self.transition_matrix(i)
        vec = mu
        support = sorted(limit.support)
        target = (
            {s: limit.value for s in support}
            if limit.exists
            else {s: Fraction(1, len(support)) for s in support}
        )
        for n in range(1, horizon + 1):
            vec = _vec_mat(vec, mat)
            dist = sum(abs(vec[s] - target.get(s, Fraction(0))) for s in range(len(vec)))
            tv.append((n, float(dist / 2)))
        if not limit.exists:
            return {"rho": float("nan"), "tv": tv}
        sub = np.array(
            [[float(mat[s][t]) for t in support] for s in support], dtype=float
        )
        m = len(support)
        if m == 1:
            return {"rho": 0.0, "tv": tv}
        x = np.arange(m, dtype=float)
        x -= x.mean()
        norm = np.linalg.norm(x)
        if norm == 0:
            return {"rho": 0.0, "tv": tv}
        x /= norm
        rho = 0.0
        for _ in range(10000):
            y = x @ sub
            y -= y.mean()
            ny = np.linalg.norm(y)
            if ny < 1e-300:
                rho = 0.0
                break
            new_rho = ny
            x = y / ny
            if abs(new_rho - rho) < 1e-12:
                rho = new_rho
                break
            rho = new_rho
        return {"rho": float(rho), "tv": tv}


# ---------------------------------------------------------------------------
# small exact-matrix and digraph helpers


def _vec_mat(vec, mat):
    n = len(vec)
    out = [Fraction(0)] * n
    for s, v in enumerate(vec):
        if v:
            row = mat[s]
            for t in range(n):
                if row[t]:
                    out[t] += v * row[t]
    return out


def _mat_mat(a, b):
    n = len(a)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for k in range(n):
            if arow[k]:
                brow = b[k]
                aik = arow[k]
                for j in range(n):
                    if brow[j]:
                        orow[j] += aik * brow[j]
    return out


def _sccs(adj) -> list[list[int]]:
    return _sccs_dict({i: adj[i] for i in range(len(adj))})


def _sccs_dict(adj: dict) -> list[list]:
    index: dict = {}
    lowlink: dict = {}
    on_stack = set()
    stack: list = []
    out: list = []
    counter = [0]
    for root in adj:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = lowlink[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = lowlink[succ] = counter[0]
                    counter[0] += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(adj[succ])))
                    advanced = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(comp)
    return out


def _forward_closure(adj, seed) -> set:
    seen = set(seed)
    queue = list(seed)
    while queue:
        s = queue.pop()
        for t in adj[s]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def _digraph_period(adj, nodes) -> int:
    return _digraph_period_dict({n: adj[n] for n in nodes})


def _digraph_period_dict(adj: dict) -> int:
    nodes = list(adj)
    root = nodes[0]
    dist = {root: 0}
    queue = [root]
    g = 0
    while queue:
        u = queue.pop(0)
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
            else:
                g = math.gcd(g, dist[u] + 1 - dist[v])
    return abs(g)


def _cyclic_classes(adj: dict, period: int) -> list:
    nodes = list(adj)
    root = nodes[0]
    dist = {root: 0}
    queue = [root]
    while queue:
        u = queue.pop(0)
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    classes: dict = {}
    for n, d in dist.items():
        classes.setdefault(d % period, []).append(n)
    return [sorted(classes[r]) for r in sorted(classes)]


def build_chain_system(
    fc: FischerCover,
    fam: GAdditiveFamily,
    p: Optional[int] = None,
    ell: Optional[int] = None,
    shortcut_cover: bool = False,
) -> ChainSystem:
    """Convenience constructor: default (p, ell) from the family's minimal
    eventual period, with ell raised to admit a synchronizing word and to be
    at least 1 (integer semantics exclude the empty word)."""
    from .shifts import shortest_synchronizing_length
    from .words import find_eventual_period

    ep = find_eventual_period(fam)
    sync = shortest_synchronizing_length(fc)
    if ell is None:
        ell = max(ep.ell, sync, 1)
    if ell < max(ep.ell, sync):
        raise ChainError(f"ell must be at least max({ep.ell}, {sync})")
    if p is None:
        p = ep.p
    if p % ep.p != 0:
        raise ChainError(f"p must be a multiple of the minimal period {ep.p}")
    return ChainSystem(fc, fam, p, ell, shortcut_cover=shortcut_cover)
