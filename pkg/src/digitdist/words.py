"""Base-g words, g-additive functions and their eventual periods.

Words store the least significant digit at index 0, so a word w of length n
represents the integer w[0] + w[1]*g + ... + w[n-1]*g^(n-1).  All arithmetic
is exact; residues are kept reduced.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

PERIOD_SCAN_CAP = 10**6


class DomainError(ValueError):
    """Raised when an operation is called outside its stated domain."""


@dataclass(frozen=True)
class Word:
    """A finite digit string over {0..g-1}, least significant digit first."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise DomainError(f"base must be >= 2, got {self.base}")
        for d in self.digits:
            if not 0 <= d < self.base:
                raise DomainError(f"digit {d} out of range for base {self.base}")
        object.__setattr__(self, "digits", tuple(self.digits))

    def __len__(self):
        return len(self.digits)

    def value(self) -> int:
        return word_to_integer(self)

    def msb_str(self) -> str:
        """Conventional most-significant-first rendering (CLI --msb)."""
        return "".join(str(d) for d in reversed(self.digits))

    def lsb_str(self) -> str:
        return "".join(str(d) for d in self.digits)


def word_to_integer(w: Word) -> int:
    """Value of the word: sum of w[i] * g^i, exact."""
    if len(w.digits) == 0:
        raise DomainError("empty word has no integer value")
    n = 0
    for d in reversed(w.digits):
        n = n * w.base + d
    return n


def integer_to_word(n: int, g: int) -> Word:
    """Canonical base-g expansion of n >= 0; n=0 yields the single digit [0]."""
    if g < 2:
        raise DomainError(f"base must be >= 2, got {g}")
    if n < 0:
        raise DomainError("negative integers are out of scope")
    if n == 0:
        return Word(g, (0,))
    digits = []
    while n:
        n, d = divmod(n, g)
        digits.append(d)
    return Word(g, tuple(digits))


def digit_sum(n: int, g: int) -> int:
    s = 0
    while n:
        n, d = divmod(n, g)
        s += d
    return s


@dataclass(frozen=True)
class EventualPeriod:
    """(p, ell) with f(d*g^(i+np)) = f(d*g^i) mod a for i >= ell, n >= 1."""

    p: int
    ell: int

    def __post_init__(self):
        if self.p < 1 or self.ell < 0:
            raise DomainError(f"invalid eventual period {self}")


@dataclass(frozen=True)
class GAdditiveFunction:
    """A g-additive function reduced mod a, given by a finite term table.

    table[(d, i)] holds f(d * g^i) mod a for 0 < d < g and i < ell + p; for
    i >= ell the terms repeat with period p.  f(0 * g^i) = 0 always.
    """

    base: int
    modulus: int
    ell: int
    p: int
    table: dict = field(compare=False)
    name: str = "custom"

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError("modulus must be >= 1")
        if self.p < 1 or self.ell < 0:
            raise DomainError("invalid declared period")
        cleaned = {}
        for (d, i), v in self.table.items():
            if not 0 <= d < self.base:
                raise DomainError(f"table digit {d} out of range")
            if not 0 <= i < self.ell + self.p:
                raise DomainError(
                    f"table position {i} outside [0, ell+p); periodic entries "
                    "must not be stored"
                )
            if d == 0 and v % self.modulus != 0:
                raise DomainError("g-additivity forces f(0 * g^i) = 0")
            cleaned[(d, i)] = v % self.modulus
        for d in range(1, self.base):
            for i in range(self.ell + self.p):
                if (d, i) not in cleaned:
                    raise DomainError(f"table misses entry for digit {d}, position {i}")
        object.__setattr__(self, "table", cleaned)

    def term(self, d: int, i: int) -> int:
        """f(d * g^i) mod a."""
        if d == 0:
            return 0
        if i >= self.ell + self.p:
            i = self.ell + (i - self.ell) % self.p
        return self.table[(d, i)]

    def period(self) -> EventualPeriod:
        return EventualPeriod(self.p, self.ell)

    def to_json(self) -> dict:
        if self.name in ("id", "sum_digits"):
            return {"base": self.base, "modulus": self.modulus, "name": self.name}
        return {
            "base": self.base,
            "modulus": self.modulus,
            "ell": self.ell,
            "p": self.p,
            "table": sorted([d, i, v] for (d, i), v in self.table.items()),
        }


def _power_tail_cycle(g: int, a: int) -> tuple[int, int]:
    """Least (ell, p) with g^(ell+p) = g^ell mod a, by direct scan."""
    seen = {}
    x = 1 % a
    j = 0
    while x not in seen:
        seen[x] = j
        x = (x * g) % a
        j += 1
        if j > PERIOD_SCAN_CAP:
            raise DomainError("period scan cap exceeded")
    ell = seen[x]
    p = j - ell
    return ell, p


def identity_function(g: int, a: int) -> GAdditiveFunction:
    """The identity as a g-additive function mod a: f(d*g^i) = d*g^i mod a."""
    ell, p = _power_tail_cycle(g, a)
    table = {
        (d, i): (d * pow(g, i, a)) % a for d in range(1, g) for i in range(ell + p)
    }
    return GAdditiveFunction(g, a, ell, p, table, name="id")


def sum_digits_function(g: int, a: int) -> GAdditiveFunction:
    """Sum-of-digits in base g mod a; eventually periodic with p=1, ell=0."""
    table = {(d, 0): d % a for d in range(1, g)}
    return GAdditiveFunction(g, a, 0, 1, table, name="sum_digits")


def function_from_json(obj: dict) -> GAdditiveFunction:
    g = int(obj["base"])
    a = int(obj["modulus"])
    name = obj.get("name")
    if name == "id":
        return identity_function(g, a)
    if name == "sum_digits":
        return sum_digits_function(g, a)
    table = {(int(d), int(i)): int(v) for d, i, v in obj["table"]}
    return GAdditiveFunction(g, a, int(obj["ell"]), int(obj["p"]), table)


def load_function(path: str) -> GAdditiveFunction:
    with open(path) as f:
        return function_from_json(json.load(f))


@dataclass(frozen=True)
class GAdditiveFamily:
    """A tuple of g-additive functions with their moduli vector."""

    base: int
    functions: tuple[GAdditiveFunction, ...]

    def __post_init__(self):
        if not self.functions:
            raise DomainError("family needs at least one function")
        for f in self.functions:
            if f.base != self.base:
                raise DomainError("family functions must share the base")
        object.__setattr__(self, "functions", tuple(self.functions))

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(f.modulus for f in self.functions)

    def modulus_product(self) -> int:
        return math.prod(self.moduli)

    def term_vector(self, d: int, i: int) -> tuple[int, ...]:
        """Componentwise f_j(d * g^i) mod a_j."""
        return tuple(f.term(d, i) for f in self.functions)

    def eval_word(self, w: Word, offset: int = 0) -> tuple[int, ...]:
        """f((w)_g * g^offset) componentwise; offset shifts every position."""
        if w.base != self.base:
            raise DomainError("word base does not match family base")
        acc = [0] * len(self.functions)
        for i, d in enumerate(w.digits):
            if d == 0:
                continue
            for j, f in enumerate(self.functions):
                acc[j] += f.term(d, i + offset)
        return tuple(v % a for v, a in zip(acc, self.moduli))

    def eval_int(self, n: int) -> tuple[int, ...]:
        return self.eval_word(integer_to_word(n, self.base))


def id_sum_family(g: int, a: int, a2: int) -> GAdditiveFamily:
    """The standard pair (identity mod a, sum-of-digits mod a2)."""
    return GAdditiveFamily(g, (identity_function(g, a), sum_digits_function(g, a2)))


def find_eventual_period(fam: GAdditiveFamily) -> EventualPeriod:
    """Least eventual period for the family: ell = max, p = lcm of components.

    Each component's (p, ell) is minimal by construction (power-scan for the
    identity, 1 for sum-of-digits, declared for table functions); the combined
    pair is verified against the definition before returning.
    """
    ell = max(f.ell for f in fam.functions)
    p = 1
    for f in fam.functions:
        p = math.lcm(p, f.p)
        if p > PERIOD_SCAN_CAP:
            raise DomainError("combined period exceeds scan cap")
    ep = EventualPeriod(p, ell)
    verify_period(fam, ep)
    return ep


def verify_period(fam: GAdditiveFamily, ep: EventualPeriod, reps: int = 1) -> None:
    """Check f(d*g^(i+np)) = f(d*g^i) componentwise for i in [ell, ell+p)."""
    for d in range(fam.base):
        for i in range(ep.ell, ep.ell + ep.p):
            base_term = fam.term_vector(d, i)
            for n in range(1, reps + 1):
                if fam.term_vector(d, i + n * ep.p) != base_term:
                    raise DomainError(
                        f"declared period {ep} fails at digit {d}, position {i}"
                    )


def totient(n: int) -> int:
    if n < 1:
        raise DomainError("totient needs n >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def euler_period(g: int, a: int, a2: int) -> int:
    """p = a2 * phi(a*(g-1)); then g^p = 1 mod a(g-1) and constant words of
    length p carry value 0 mod a and digit sum 0 mod a2."""
    if math.gcd(g, a) != 1:
        raise DomainError(f"euler_period needs gcd(g, a) = 1, got gcd={math.gcd(g, a)}")
    return a2 * totient(a * (g - 1))


def delta_gcd(aa2: int, digits: Sequence[int]) -> int:
    """gcd(a*a', d_2 - d_1, ..., d_t - d_1) for strictly increasing digits."""
    ds = list(digits)
    if len(ds) < 2:
        raise DomainError("need at least two digits for the distribution question")
    if any(y <= x for x, y in zip(ds, ds[1:])):
        raise DomainError("digits must be strictly increasing")
    d1 = ds[0]
    delta = aa2
    for d in ds[1:]:
        delta = math.gcd(delta, d - d1)
    return delta


def residue_tuples(moduli: Iterable[int]) -> list[tuple[int, ...]]:
    """All residue vectors of Z_a1 x ... x Z_ar in lexicographic order."""
    out = [()]
    for a in moduli:
        out = [t + (r,) for t in out for r in range(a)]
    return out
