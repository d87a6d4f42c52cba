"""
Finite groups given by multiplication tables.

Elements are the indices 0..n-1; `labels` names them for JSON and display.
Every constructor verifies the group axioms.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

from exceptions import GroupAxiomError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group: table[a][b] = a·b."""
    table: Tuple[Tuple[int, ...], ...]
    identity: int
    inverses: Tuple[int, ...]
    labels: Tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        n = len(self.table)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        if len(self.labels) != n or len(self.inverses) != n:
            raise GroupAxiomError("table, labels and inverses must have one entry per element")
        for row in self.table:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise GroupAxiomError("multiplication table is not closed")
        e = self.identity
        for a in range(n):
            if self.table[e][a] != a or self.table[a][e] != a:
                raise GroupAxiomError(f"{self.labels[e]} is not an identity")
            if self.table[a][self.inverses[a]] != e or self.table[self.inverses[a]][a] != e:
                raise GroupAxiomError(f"wrong inverse for {self.labels[a]}")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise GroupAxiomError(
                            f"associativity fails on ({self.labels[a]}, {self.labels[b]}, {self.labels[c]})"
                        )

    # ----- constructors ------------------------------------------------

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], labels: Sequence[str] = (), name: str = "") -> "FiniteGroup":
        """Group from a table alone; identity and inverses are found, not trusted."""
        rows = tuple(tuple(int(x) for x in row) for row in table)
        n = len(rows)
        if n == 0:
            raise GroupAxiomError("a group has at least one element")
        if any(len(row) != n for row in rows):
            raise GroupAxiomError("multiplication table is not square")
        identity = next((e for e in range(n) if all(rows[e][a] == a and rows[a][e] == a for a in range(n))), None)
        if identity is None:
            raise GroupAxiomError("no identity element")
        inverses = []
        for a in range(n):
            inv = next((b for b in range(n) if rows[a][b] == identity), None)
            if inv is None:
                raise GroupAxiomError(f"element {a} has no inverse")
            inverses.append(inv)
        return cls(rows, identity, tuple(inverses), tuple(labels), name)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise GroupAxiomError(f"cyclic group order must be positive, got {n}")
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls.from_table(table, [str(a) for a in range(n)], f"Z/{n}")

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls.from_table([[0]], ["e"], "1")

    @classmethod
    def symmetric(cls, k: int = 3) -> "FiniteGroup":
        """S_k on permutations in lexicographic order; composition (σ·τ)(x) = σ(τ(x))."""
        perms = list(permutations(range(k)))
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(s[t[x]] for x in range(k))] for t in perms] for s in perms]
        labels = ["".join(str(x) for x in p) for p in perms]
        return cls.from_table(table, labels, f"S{k}")

    @classmethod
    def direct_product(cls, left: "FiniteGroup", right: "FiniteGroup") -> "FiniteGroup":
        n, m = left.order, right.order
        table = [
            [left.mul(a // m, c // m) * m + right.mul(a % m, c % m) for c in range(n * m)]
            for a in range(n * m)
        ]
        labels = [f"({left.labels[a // m]},{right.labels[a % m]})" for a in range(n * m)]
        return cls.from_table(table, labels, f"{left.name or 'G'}x{right.name or 'H'}")

    # ----- arithmetic ------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, *items: int) -> int:
        result = self.identity
        for x in items:
            result = self.table[result][x]
        return result

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, n: int) -> int:
        base = a if n >= 0 else self.inv(a)
        result = self.identity
        for _ in range(abs(n)):
            result = self.table[result][base]
        return result

    def conjugate(self, g: int, a: int) -> int:
        """g·a·g⁻¹."""
        return self.table[self.table[g][a]][self.inverses[g]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements for b in self.elements)

    def abelian_invariants(self) -> Tuple[int, ...]:
        """
        Invariant factors d₁ | d₂ | … (all > 1) of a finite abelian group.

        Read off from N_k = #{x : x^{p^k} = e} for every prime p.
        """
        if not self.is_abelian():
            raise GroupAxiomError(f"{self.name or 'group'} is not abelian")
        primary: List[int] = []
        for p in _prime_factors(self.order):
            counts = [1]
            k = 1
            while True:
                n_k = sum(1 for x in self.elements if self.power(x, p ** k) == self.identity)
                counts.append(n_k)
                if n_k == counts[-2]:
                    break
                k += 1
            ranks = [_exact_log(counts[j] // counts[j - 1], p) for j in range(1, len(counts))]
            for j, r in enumerate(ranks, start=1):
                following = ranks[j] if j < len(ranks) else 0
                primary.extend([p ** j] * (r - following))
        return invariant_factors(primary)

    def to_json(self) -> Dict:
        return {"kind": "group", "name": self.name, "labels": list(self.labels), "table": [list(r) for r in self.table]}


def _prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _exact_log(value: int, p: int) -> int:
    k = 0
    while value > 1:
        if value % p:
            raise GroupAxiomError("element counts are not prime powers")
        value //= p
        k += 1
    return k


def invariant_factors(cyclic_orders: Sequence[int]) -> Tuple[int, ...]:
    """Invariant factors of ⊕ ℤ/n_i (entries ≤ 1 are ignored)."""
    by_prime: Dict[int, List[int]] = {}
    for n in cyclic_orders:
        if n <= 1:
            continue
        for p in _prime_factors(n):
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            by_prime.setdefault(p, []).append(q)
    length = max((len(v) for v in by_prime.values()), default=0)
    factors = [1] * length
    for powers in by_prime.values():
        for i, q in enumerate(sorted(powers, reverse=True)):
            factors[length - 1 - i] *= q
    return tuple(f for f in factors if f > 1)


def is_homomorphism(f: Sequence[int], source: FiniteGroup, target: FiniteGroup) -> bool:
    return all(
        f[source.mul(a, b)] == target.mul(f[a], f[b]) for a in source.elements for b in source.elements
    )


def cyclic_counts(group: FiniteGroup) -> Counter:
    """Element-order histogram, used in reports."""
    return Counter(group.element_order(a) for a in group.elements)
