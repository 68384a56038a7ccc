"""Subshift presentations over digit alphabets.

A subshift is described declaratively by a ShiftSpec and presented by a
labelled multigraph (Cover).  For transitive sofic shifts the minimal
right-resolving irreducible presentation (FischerCover) is computed by
subset construction, partition refinement and extraction of the unique
bottom strongly connected component.  Language enumeration and counting run
on the determinized graph, so counts are exact and words come out
deduplicated without hashing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Optional

from .words import DomainError


class ShiftSpecError(ValueError):
    """Malformed shift specification (CLI exit code 3)."""


class EmptyShiftError(ValueError):
    """The presentation trims to the empty graph."""


class NonTransitiveError(ValueError):
    """The presented shift is not transitive; carries the SCC split."""

    def __init__(self, message, cover_sccs):
        super().__init__(message)
        self.cover_sccs = cover_sccs


# ---------------------------------------------------------------------------
# Declarative specs


VALID_KINDS = ("full", "sft1", "sofic", "sgap", "union")


@dataclass(frozen=True)
class ShiftSpec:
    base: int
    kind: str
    digits: tuple[int, ...] = ()
    allowed: frozenset = frozenset()  # sft1: allowed digit pairs (d, d')
    nodes: tuple[str, ...] = ()  # sofic payload
    edges: tuple = ()  # sofic payload: (from, to, label)
    gaps: tuple[int, ...] = ()  # sgap payload
    parts: tuple = ()  # union payload

    def __post_init__(self):
        if self.base < 2:
            raise ShiftSpecError(f"base must be >= 2, got {self.base}")
        if self.kind not in VALID_KINDS:
            raise ShiftSpecError(f"unknown shift kind {self.kind!r}")
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ShiftSpecError(f"digit {d} out of range for base {self.base}")
        if self.kind in ("full", "sft1") and len(set(self.digits)) < 1:
            raise ShiftSpecError(f"{self.kind} spec needs a digit set")
        if self.kind == "sgap" and (not self.gaps or any(s < 0 for s in self.gaps)):
            raise ShiftSpecError("sgap spec needs a finite set of gaps >= 0")
        if self.kind == "union" and len(self.parts) < 2:
            raise ShiftSpecError("union spec needs at least two parts")

    @staticmethod
    def full(base: int, digits: Iterable[int]) -> "ShiftSpec":
        return ShiftSpec(base, "full", digits=tuple(sorted(set(digits))))

    @staticmethod
    def sft1(base: int, digits: Iterable[int], allowed: Iterable) -> "ShiftSpec":
        return ShiftSpec(
            base,
            "sft1",
            digits=tuple(sorted(set(digits))),
            allowed=frozenset((int(a), int(b)) for a, b in allowed),
        )

    @staticmethod
    def sofic(base: int, nodes: Iterable[str], edges: Iterable) -> "ShiftSpec":
        return ShiftSpec(
            base,
            "sofic",
            nodes=tuple(nodes),
            edges=tuple((str(u), str(v), int(d)) for u, v, d in edges),
        )

    @staticmethod
    def sgap(base: int, gaps: Iterable[int]) -> "ShiftSpec":
        return ShiftSpec(base, "sgap", gaps=tuple(sorted(set(gaps))))

    @staticmethod
    def union(parts: Iterable["ShiftSpec"]) -> "ShiftSpec":
        parts = tuple(parts)
        if len({p.base for p in parts}) > 1:
            raise ShiftSpecError("union parts must share the base")
        return ShiftSpec(parts[0].base, "union", parts=parts)

    def to_json(self) -> dict:
        obj = {"base": self.base, "kind": self.kind}
        if self.kind == "full":
            obj["digits"] = list(self.digits)
        elif self.kind == "sft1":
            obj["digits"] = list(self.digits)
            obj["allowed"] = sorted([a, b] for a, b in self.allowed)
        elif self.kind == "sofic":
            obj["nodes"] = list(self.nodes)
            obj["edges"] = [
                {"from": u, "to": v, "label": d} for u, v, d in self.edges
            ]
        elif self.kind == "sgap":
            obj["gaps"] = list(self.gaps)
        elif self.kind == "union":
            obj["parts"] = [p.to_json() for p in self.parts]
        return obj

    @staticmethod
    def from_json(obj: dict) -> "ShiftSpec":
        try:
            base = int(obj["base"])
            kind = obj["kind"]
            if kind == "full":
                return ShiftSpec.full(base, obj["digits"])
            if kind == "sft1":
                return ShiftSpec.sft1(base, obj["digits"], obj["allowed"])
            if kind == "sofic":
                edges = [(e["from"], e["to"], e["label"]) for e in obj["edges"]]
                return ShiftSpec.sofic(base, [str(n) for n in obj["nodes"]], edges)
            if kind == "sgap":
                return ShiftSpec.sgap(base, obj["gaps"])
            if kind == "union":
                return ShiftSpec.union(ShiftSpec.from_json(p) for p in obj["parts"])
            raise ShiftSpecError(f"unknown shift kind {kind!r}")
        except ShiftSpecError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ShiftSpecError(f"malformed shift spec: {exc}") from exc

    @staticmethod
    def load(path: str) -> "ShiftSpec":
        try:
            with open(path) as f:
                obj = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ShiftSpecError(f"cannot read shift spec {path}: {exc}") from exc
        return ShiftSpec.from_json(obj)


# ---------------------------------------------------------------------------
# Covers (labelled multigraphs)


@dataclass(frozen=True)
class Cover:
    """Labelled directed multigraph presenting a subshift."""

    base: int
    nodes: tuple
    edges: tuple  # (start, terminal, label)

    def out_map(self) -> dict:
        out = {n: [] for n in self.nodes}
        for u, v, d in self.edges:
            out[u].append((v, d))
        return out

    def trim_essential(self) -> "Cover":
        """Drop nodes without outgoing or incoming edges, iteratively."""
        nodes = set(self.nodes)
        edges = list(self.edges)
        while True:
            outs = {u for u, _, _ in edges}
            ins = {v for _, v, _ in edges}
            keep = {n for n in nodes if n in outs and n in ins}
            if keep == nodes:
                break
            nodes = keep
            edges = [e for e in edges if e[0] in nodes and e[1] in nodes]
        if not nodes:
            raise EmptyShiftError("presentation trims to the empty shift")
        return Cover(self.base, tuple(n for n in self.nodes if n in nodes), tuple(edges))

    def reversed(self) -> "Cover":
        return Cover(self.base, self.nodes, tuple((v, u, d) for u, v, d in self.edges))

    def sccs(self) -> list[list]:
        """Strongly connected components (iterative Tarjan), in node order."""
        adj = {n: [] for n in self.nodes}
        for u, v, _ in self.edges:
            adj[u].append(v)
        index = {}
        lowlink = {}
        on_stack = set()
        stack = []
        out = []
        counter = [0]
        for root in self.nodes:
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


def build_cover(spec: ShiftSpec) -> Cover:
    """Standard presentation for each spec kind, trimmed to its essential part."""
    if spec.kind == "full":
        edges = tuple(("F", "F", d) for d in spec.digits)
        cover = Cover(spec.base, ("F",), edges)
    elif spec.kind == "sft1":
        nodes = tuple(f"d{d}" for d in spec.digits)
        edges = tuple(
            (f"d{a}", f"d{b}", b)
            for (a, b) in sorted(spec.allowed)
            if a in spec.digits and b in spec.digits
        )
        cover = Cover(spec.base, nodes, edges)
    elif spec.kind == "sofic":
        for _, _, d in spec.edges:
            if not 0 <= d < spec.base:
                raise ShiftSpecError(f"edge label {d} out of range")
        known = set(spec.nodes)
        for u, v, _ in spec.edges:
            if u not in known or v not in known:
                raise ShiftSpecError(f"edge endpoint {u!r}->{v!r} not among nodes")
        cover = Cover(spec.base, spec.nodes, spec.edges)
    elif spec.kind == "sgap":
        nodes = ["H"]
        edges = []
        for s in spec.gaps:
            if s == 0:
                edges.append(("H", "H", 1))
                continue
            tail = [f"g{s}_{j}" for j in range(1, s + 1)]
            nodes.extend(tail)
            edges.append(("H", tail[0], 1))
            for a, b in zip(tail, tail[1:]):
                edges.append((a, b, 0))
            edges.append((tail[-1], "H", 0))
        cover = Cover(spec.base, tuple(nodes), tuple(edges))
    elif spec.kind == "union":
        nodes = []
        edges = []
        for idx, part in enumerate(spec.parts):
            sub = build_cover(part)
            nodes.extend(f"p{idx}.{n}" for n in sub.nodes)
            edges.extend((f"p{idx}.{u}", f"p{idx}.{v}", d) for u, v, d in sub.edges)
        cover = Cover(spec.base, tuple(nodes), tuple(edges))
    else:  # pragma: no cover - guarded by ShiftSpec
        raise ShiftSpecError(f"unknown kind {spec.kind}")
    return cover.trim_essential()


# ---------------------------------------------------------------------------
# Determinization and partition refinement


class DetAutomaton:
    """Subset automaton of a cover, reached from a start set of nodes.

    Every state accepts everything it can read, so two states are
    language-equal iff Moore refinement puts them in one block.
    """

    def __init__(self, cover: Cover, start: Optional[frozenset] = None):
        self.cover = cover
        out = cover.out_map()
        self.start = frozenset(cover.nodes) if start is None else frozenset(start)
        self.states: list[frozenset] = []
        self.index: dict[frozenset, int] = {}
        self.adj: list[dict[int, int]] = []  # per state: digit -> state index
        self._classes = None
        self._out = out
        self.absorb(self.start)

    def absorb(self, start: frozenset) -> int:
        """Ensure a start set and everything reachable from it is present."""
        if start in self.index:
            return self.index[start]
        self._classes = None
        root = self._add_state(start)
        queue = [start]
        while queue:
            cur = queue.pop(0)
            i = self.index[cur]
            step: dict[int, set] = {}
            for n in cur:
                for v, d in self._out[n]:
                    step.setdefault(d, set()).add(v)
            for d, nxt in sorted(step.items()):
                nxt = frozenset(nxt)
                if nxt not in self.index:
                    self._add_state(nxt)
                    queue.append(nxt)
                self.adj[i][d] = self.index[nxt]
        return root

    def _add_state(self, s: frozenset) -> int:
        self.index[s] = len(self.states)
        self.states.append(s)
        self.adj.append({})
        return self.index[s]

    def step(self, i: int, d: int) -> Optional[int]:
        return self.adj[i].get(d)

    def run(self, i: int, word: Iterable[int]) -> Optional[int]:
        for d in word:
            i = self.adj[i].get(d)
            if i is None:
                return None
        return i

    def out_labels(self, i: int) -> list[int]:
        return sorted(self.adj[i])

    def classes(self) -> list[int]:
        """Moore partition refinement: state -> class id, language-exact."""
        if self._classes is not None:
            return self._classes
        cls = [0] * len(self.states)
        while True:
            sig: dict = {}
            new = [0] * len(self.states)
            for i in range(len(self.states)):
                key = (cls[i], tuple(sorted((d, cls[j]) for d, j in self.adj[i].items())))
                if key not in sig:
                    sig[key] = len(sig)
                new[i] = sig[key]
            if new == cls:
                break
            cls = new
        self._classes = cls
        return cls

    def transition_counts(self):
        """Integer adjacency matrix between states (distinct-word transfer)."""
        n = len(self.states)
        mat = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in self.adj[i].values():
                mat[i][j] += 1
        return mat


# ---------------------------------------------------------------------------
# Fischer cover


@dataclass(frozen=True)
class FischerCover:
    """Right-resolving labelled graph presentation with node bookkeeping.

    Built by fischer_cover() it is the minimal right-resolving irreducible
    presentation; the 1-step SFT shortcut presentation reuses the class with
    minimal=False (same pipeline downstream, flag recorded).
    """

    base: int
    nodes: tuple[str, ...]
    trans: dict = field(compare=False)  # (node, digit) -> node
    minimal: bool = True
    sync_words: dict = field(default_factory=dict, compare=False)
    distinguishing: dict = field(default_factory=dict, compare=False)

    def out_edges(self, node: str) -> list[tuple[str, int]]:
        """(target, digit) pairs in digit order; right-resolving, so unique."""
        return sorted(
            ((v, d) for (u, d), v in self.trans.items() if u == node),
            key=lambda vd: vd[1],
        )

    def edges(self) -> list[tuple[str, str, int]]:
        return sorted((u, v, d) for (u, d), v in self.trans.items())

    def as_cover(self) -> Cover:
        return Cover(self.base, self.nodes, tuple(self.edges()))

    def step_set(self, subset: frozenset, d: int) -> frozenset:
        return frozenset(
            self.trans[(n, d)] for n in subset if (n, d) in self.trans
        )

    def node_index(self) -> dict:
        return {n: i for i, n in enumerate(self.nodes)}


def _period_of_digraph(nodes, succ) -> int:
    """gcd of cycle lengths of a strongly connected digraph (BFS residues)."""
    root = nodes[0]
    dist = {root: 0}
    queue = [root]
    g = 0
    while queue:
        u = queue.pop(0)
        for v in succ[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
            else:
                g = gcd(g, dist[u] + 1 - dist[v])
    return abs(g) if g else 0


def fischer_cover(cover: Cover) -> FischerCover:
    """Minimal right-resolving irreducible presentation of a transitive sofic
    shift, or NonTransitiveError carrying the input's SCC decomposition."""
    cover = cover.trim_essential()
    dfa = DetAutomaton(cover)
    cls = dfa.classes()
    n_classes = max(cls) + 1

    # quotient transition structure
    qtrans = {}
    for i in range(len(dfa.states)):
        for d, j in dfa.adj[i].items():
            qtrans[(cls[i], d)] = cls[j]
    qsucc = {c: set() for c in range(n_classes)}
    for (c, _), c2 in qtrans.items():
        qsucc[c].add(c2)

    # bottom SCCs of the quotient
    qcover = Cover(
        cover.base,
        tuple(range(n_classes)),
        tuple((c, c2, 0) for c in qsucc for c2 in qsucc[c]),
    )
    sccs = qcover.sccs()
    comp_of = {}
    for ci, comp in enumerate(sccs):
        for c in comp:
            comp_of[c] = ci
    bottoms = []
    for ci, comp in enumerate(sccs):
        if all(comp_of[c2] == ci for c in comp for c2 in qsucc[c]):
            bottoms.append(comp)
    if len(bottoms) != 1:
        raise NonTransitiveError(
            f"shift is not transitive: {len(bottoms)} closed components",
            cover_sccs=cover.sccs(),
        )
    bottom = set(bottoms[0])

    # the bottom must present the full language, else the shift is not transitive
    if not _language_included(dfa, cls, bottom):
        raise NonTransitiveError(
            "shift is not transitive: minimal closed component misses words",
            cover_sccs=cover.sccs(),
        )

    # canonical names by BFS access order from the full-subset class
    order = []
    seen = {cls[0]}
    queue = [cls[0]]
    while queue:
        c = queue.pop(0)
        if c in bottom and c not in order:
            order.append(c)
        for d in sorted(set(d for (cc, d) in qtrans if cc == c)):
            c2 = qtrans[(c, d)]
            if c2 not in seen:
                seen.add(c2)
                queue.append(c2)
    for c in sorted(bottom):  # unreachable-from-start classes cannot occur, be safe
        if c not in order:
            order.append(c)
    name = {c: f"F{i}" for i, c in enumerate(order)}

    trans = {
        (name[c], d): name[c2]
        for (c, d), c2 in qtrans.items()
        if c in bottom and c2 in bottom
    }
    nodes = tuple(name[c] for c in order)
    fc = FischerCover(cover.base, nodes, trans, minimal=True)
    object.__setattr__(fc, "sync_words", _sync_witnesses(fc))
    object.__setattr__(fc, "distinguishing", _distinguishing_words(fc))
    return fc


def _language_included(dfa: DetAutomaton, cls, bottom) -> bool:
    """L(start class) included in the union language of the bottom classes."""
    # deterministic product: start-state language vs union over bottom states
    starts = frozenset(i for i in range(len(dfa.states)) if cls[i] in bottom)
    pair0 = (0, starts)
    seen = {pair0}
    queue = [pair0]
    while queue:
        i, bset = queue.pop(0)
        for d, j in dfa.adj[i].items():
            b2 = frozenset(dfa.adj[b][d] for b in bset if d in dfa.adj[b])
            if not b2:
                return False
            pair = (j, b2)
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    return True


def _sync_witnesses(fc: FischerCover) -> dict:
    """Shortest word per node that focuses every path onto that node."""
    start = frozenset(fc.nodes)
    seen = {start: ()}
    queue = [start]
    witness = {}
    while queue and len(witness) < len(fc.nodes):
        cur = queue.pop(0)
        word = seen[cur]
        if len(cur) == 1:
            (n,) = cur
            if n not in witness:
                witness[n] = word
        for d in sorted({d for (_, d) in fc.trans}):
            nxt = fc.step_set(cur, d)
            if nxt and nxt not in seen:
                seen[nxt] = word + (d,)
                queue.append(nxt)
    for n in fc.nodes:
        if n not in witness:
            # reach the singleton via any focused node plus a connecting path
            base = next(iter(witness.items()), None)
            if base is None:
                break
            m, word = base
            path = _word_between(fc, m, n)
            if path is not None:
                witness[n] = word + path
    return witness


def _word_between(fc: FischerCover, src: str, dst: str):
    seen = {src: ()}
    queue = [src]
    while queue:
        u = queue.pop(0)
        if u == dst:
            return seen[u]
        for v, d in fc.out_edges(u):
            if v not in seen:
                seen[v] = seen[u] + (d,)
                queue.append(v)
    return None


def _distinguishing_words(fc: FischerCover) -> dict:
    """Shortest word accepted from exactly one node of each pair."""
    out = {}
    for i, a in enumerate(fc.nodes):
        for b in fc.nodes[i + 1 :]:
            seen = {(a, b): ()}
            queue = [(a, b)]
            found = None
            while queue and found is None:
                x, y = queue.pop(0)
                word = seen[(x, y)]
                for d in sorted({d for (_, d) in fc.trans}):
                    nx = fc.trans.get((x, d))
                    ny = fc.trans.get((y, d))
                    if (nx is None) != (ny is None):
                        found = word + (d,)
                        break
                    if nx is not None and (nx, ny) not in seen:
                        seen[(nx, ny)] = word + (d,)
                        queue.append((nx, ny))
            if found is not None:
                out[frozenset((a, b))] = found
    return out


def sft_shortcut_presentation(spec: ShiftSpec) -> FischerCover:
    """The node-per-digit cover of a 1-step SFT, kept unmerged (shortcut).

    Right-resolving by construction; every single digit focuses the subset
    run, so the chain pipeline applies unchanged.
    """
    if spec.kind != "sft1":
        raise ShiftSpecError("shortcut presentation needs an sft1 spec")
    cover = build_cover(spec)
    trans = {}
    for u, v, d in cover.edges:
        trans[(u, d)] = v  # labels equal target digit: deterministic
    fc = FischerCover(spec.base, cover.nodes, trans, minimal=False)
    object.__setattr__(
        fc, "sync_words", {f"d{d}": (d,) for d in spec.digits if f"d{d}" in cover.nodes}
    )
    return fc


# ---------------------------------------------------------------------------
# Structural predicates


def is_transitive(fc: FischerCover) -> bool:
    comps = fc.as_cover().sccs()
    return len(comps) == 1


def is_mixing(fc: FischerCover) -> bool:
    if not is_transitive(fc):
        return False
    succ = {n: set() for n in fc.nodes}
    for (u, _), v in fc.trans.items():
        succ[u].add(v)
    return _period_of_digraph(fc.nodes, succ) == 1


def regularity_k(fc: FischerCover) -> Optional[int]:
    """k if the graph is k-in/out-regular with k >= 2, else None (irregular)."""
    outdeg = {n: 0 for n in fc.nodes}
    indeg = {n: 0 for n in fc.nodes}
    for (u, _), v in fc.trans.items():
        outdeg[u] += 1
        indeg[v] += 1
    ks = set(outdeg.values()) | set(indeg.values())
    if len(ks) == 1:
        k = ks.pop()
        if k >= 2:
            return k
    return None


# ---------------------------------------------------------------------------
# Language operations


def _as_cover(obj) -> Cover:
    return obj.as_cover() if isinstance(obj, FischerCover) else obj


def enumerate_words(obj, n: int) -> Iterator[tuple[int, ...]]:
    """All length-n words in lexicographic order, each exactly once."""
    if n < 0:
        raise DomainError("word length must be >= 0")
    dfa = DetAutomaton(_as_cover(obj))
    word = []

    def rec(state, depth):
        if depth == n:
            yield tuple(word)
            return
        for d in sorted(dfa.adj[state]):
            word.append(d)
            yield from rec(dfa.adj[state][d], depth + 1)
            word.pop()

    yield from rec(0, 0)


def language_count(obj, n: int) -> int:
    """|L^n|, exact, via the determinized transfer structure."""
    if n < 0:
        raise DomainError("word length must be >= 0")
    dfa = DetAutomaton(_as_cover(obj))
    vec = [0] * len(dfa.states)
    vec[0] = 1
    for _ in range(n):
        nxt = [0] * len(dfa.states)
        for i, c in enumerate(vec):
            if c:
                for j in dfa.adj[i].values():
                    nxt[j] += c
        vec = nxt
    return sum(vec)


def contains_word(obj, word: Iterable[int]) -> bool:
    dfa = DetAutomaton(_as_cover(obj))
    return dfa.run(0, word) is not None


@dataclass(frozen=True)
class OutsideV:
    """Follower class of a word that is no single cover node: carries the
    subset of nodes its paths can end at."""

    subset: frozenset


class _FcSubsets:
    """Subset automaton of a Fischer cover with language classes, memoized."""

    def __init__(self, fc: FischerCover):
        self.fc = fc
        self.dfa = DetAutomaton(fc.as_cover())  # start: all nodes
        for n in fc.nodes:  # singletons may be unreachable from the full set
            self.dfa.absorb(frozenset((n,)))

    def resolve(self, subset: frozenset):
        """The unique node whose follower language equals the subset's union
        language, or None."""
        if len(subset) == 1:
            return next(iter(subset))
        if subset not in self.dfa.index:
            self.dfa.absorb(subset)
        cls = self.dfa.classes()
        target = cls[self.dfa.index[subset]]
        for n in self.fc.nodes:
            if cls[self.dfa.index[frozenset((n,))]] == target:
                return n
        return None


def _fc_subsets(fc: FischerCover) -> _FcSubsets:
    cached = getattr(fc, "_subsets", None)
    if cached is None:
        cached = _FcSubsets(fc)
        object.__setattr__(fc, "_subsets", cached)
    return cached


def follower_class(fc: FischerCover, word: Iterable[int]):
    """Fischer node whose language equals F(word), or OutsideV(subset)."""
    sub = _fc_subsets(fc)
    cur = frozenset(fc.nodes)
    for d in word:
        cur = fc.step_set(cur, d)
        if not cur:
            raise DomainError("word is not in the language")
    node = sub.resolve(cur)
    return node if node is not None else OutsideV(cur)


def shortest_synchronizing_length(fc: FischerCover, bound: Optional[int] = None) -> int:
    """Least length of a synchronizing word: one all whose presentation paths
    end at the same node.  Weaker "follower class is a node" resolutions do
    not qualify (the empty word resolves for the golden mean yet does not
    synchronize)."""
    if bound is None:
        bound = 10 * len(fc.nodes) ** 2
    start = frozenset(fc.nodes)
    if len(start) == 1:
        return 0
    seen = {start: 0}
    queue = [start]
    while queue:
        cur = queue.pop(0)
        depth = seen[cur]
        if depth >= bound:
            break
        for d in sorted({d for (_, d) in fc.trans}):
            nxt = fc.step_set(cur, d)
            if nxt and nxt not in seen:
                if len(nxt) == 1:
                    return depth + 1
                seen[nxt] = depth + 1
                queue.append(nxt)
    raise DomainError(f"no synchronizing word found within length {bound}")


def restricted_prefix_profile(fc: FischerCover, ell: int) -> dict:
    """Length-ell words with a node-valued follower class, grouped by node.

    Materializes the words, so only suitable for small ell; the counting
    variants below scale instead.
    """
    sub = _fc_subsets(fc)
    out: dict = {n: [] for n in fc.nodes}

    def rec(subset, word):
        if len(word) == ell:
            node = sub.resolve(subset)
            if node is not None:
                out[node].append(tuple(word))
            return
        for d in sorted({d for (_, d) in fc.trans}):
            nxt = fc.step_set(subset, d)
            if nxt:
                word.append(d)
                rec(nxt, word)
                word.pop()

    rec(frozenset(fc.nodes), [])
    return out


def restricted_count(fc: FischerCover, ell: int, i: int) -> int:
    """|L^i_{V,ell}|: words of length i whose ell-prefix has a node class."""
    _check_restricted_pre(fc, ell, i)
    sub = _fc_subsets(fc)
    dfa = sub.dfa
    # phase 1: count length-ell words per subset state
    vec = {dfa.index[frozenset(fc.nodes)]: 1}
    for _ in range(ell):
        nxt: dict = {}
        for si, c in vec.items():
            for j in dfa.adj[si].values():
                nxt[j] = nxt.get(j, 0) + c
        vec = nxt
    # keep states that resolve to a node, then walk the deterministic graph
    node_counts: dict = {}
    for si, c in vec.items():
        node = sub.resolve(dfa.states[si])
        if node is not None:
            node_counts[node] = node_counts.get(node, 0) + c
    for _ in range(i - ell):
        nxt = {}
        for n, c in node_counts.items():
            for v, _d in fc.out_edges(n):
                nxt[v] = nxt.get(v, 0) + c
        node_counts = nxt
    return sum(node_counts.values())


def restricted_enumerate(fc: FischerCover, ell: int, i: int) -> Iterator[tuple[int, ...]]:
    """Words of L^i_{V,ell} in lexicographic order."""
    _check_restricted_pre(fc, ell, i)
    sub = _fc_subsets(fc)
    labels = sorted({d for (_, d) in fc.trans})
    word: list[int] = []

    def suffix(node, depth):
        if depth == i:
            yield tuple(word)
            return
        for v, d in fc.out_edges(node):
            word.append(d)
            yield from suffix(v, depth + 1)
            word.pop()

    def prefix(subset, depth):
        if depth == ell:
            node = sub.resolve(subset)
            if node is not None:
                yield from suffix(node, depth)
            return
        for d in labels:
            nxt = fc.step_set(subset, d)
            if nxt:
                word.append(d)
                yield from prefix(nxt, depth + 1)
                word.pop()

    yield from prefix(frozenset(fc.nodes), 0)


def _check_restricted_pre(fc: FischerCover, ell: int, i: int) -> None:
    if i < ell:
        raise DomainError(f"need i >= ell, got i={i} < ell={ell}")
    shortest = shortest_synchronizing_length(fc)
    if ell < shortest:
        raise DomainError(
            f"no synchronizing word of length {ell}; shortest is {shortest}"
        )
