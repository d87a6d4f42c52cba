"""
Crossed modules G⁻¹ →d G⁰ with an action δ: G⁰ → Aut(G⁻¹).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from exceptions import GroupAxiomError
from twogroup.groups import FiniteGroup, is_homomorphism

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CrossedModule:
    """
    (G⁻¹, G⁰, d, δ) with action[f][a] = δ(f)(a).

    Construction checks that d is a homomorphism, δ is a homomorphism into
    Aut(G⁻¹), d(δ(f)(a)) = f·d(a)·f⁻¹ and δ(d(a))(b) = a·b·a⁻¹.
    """
    lower: FiniteGroup
    upper: FiniteGroup
    d: Tuple[int, ...]
    action: Tuple[Tuple[int, ...], ...]
    name: str = ""
    _image: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)
    _kernel: Tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        low, up = self.lower, self.upper
        if len(self.d) != low.order or len(self.action) != up.order:
            raise GroupAxiomError("d and δ must be defined on every element")
        if not is_homomorphism(self.d, low, up):
            raise GroupAxiomError("d is not a homomorphism")
        for f in up.elements:
            auto = self.action[f]
            if len(auto) != low.order or sorted(auto) != list(low.elements):
                raise GroupAxiomError(f"δ({up.labels[f]}) is not a bijection")
            if not is_homomorphism(auto, low, low):
                raise GroupAxiomError(f"δ({up.labels[f]}) is not an automorphism")
        for f in up.elements:
            for g in up.elements:
                fg = up.mul(f, g)
                if any(self.action[fg][a] != self.action[f][self.action[g][a]] for a in low.elements):
                    raise GroupAxiomError("δ is not a homomorphism")
        for f in up.elements:
            for a in low.elements:
                if self.d[self.action[f][a]] != up.conjugate(f, self.d[a]):
                    raise GroupAxiomError("d is not G⁰-equivariant")
        for a in low.elements:
            for b in low.elements:
                if self.action[self.d[a]][b] != low.conjugate(a, b):
                    raise GroupAxiomError("Peiffer identity δ(d(a))(b) = aba⁻¹ fails")
        object.__setattr__(self, "_image", frozenset(self.d))
        object.__setattr__(self, "_kernel", tuple(a for a in low.elements if self.d[a] == up.identity))

    # ----- constructors ----------------------------------------------------

    @classmethod
    def from_abelian(cls, group: FiniteGroup, i: int) -> "CrossedModule":
        """G[i]: G in degree −i with the other group trivial."""
        trivial = FiniteGroup.trivial()
        if i == 0:
            return cls(trivial, group, (group.identity,), tuple((0,) for _ in group.elements), f"{group.name}[0]")
        if i == 1:
            if not group.is_abelian():
                raise GroupAxiomError(f"{group.name or 'group'}[1] needs an abelian group")
            return cls(group, trivial, tuple(0 for _ in group.elements), (tuple(group.elements),), f"{group.name}[1]")
        raise ValueError(f"shift must be 0 or 1, got {i}")

    @classmethod
    def identity_complex(cls, group: FiniteGroup) -> "CrossedModule":
        """G →id G with δ = conjugation."""
        action = tuple(tuple(group.conjugate(f, a) for a in group.elements) for f in group.elements)
        return cls(group, group, tuple(group.elements), action, f"{group.name}->{group.name}")

    @classmethod
    def from_complex(cls, lower: FiniteGroup, upper: FiniteGroup, d: Sequence[int]) -> "CrossedModule":
        """Two-term complex of abelian groups, trivial action."""
        if not (lower.is_abelian() and upper.is_abelian()):
            raise GroupAxiomError("a two-term complex needs abelian groups")
        action = tuple(tuple(lower.elements) for _ in upper.elements)
        return cls(lower, upper, tuple(d), action, f"{lower.name}->{upper.name}")

    # ----- structure -------------------------------------------------------

    def act(self, f: int, a: int) -> int:
        return self.action[f][a]

    def act_inverse(self, f: int, a: int) -> int:
        return self.action[self.upper.inv(f)][a]

    @property
    def image(self) -> frozenset:
        return self._image

    @property
    def kernel(self) -> Tuple[int, ...]:
        return self._kernel

    def is_abelian_complex(self) -> bool:
        trivial_action = all(self.action[f][a] == a for f in self.upper.elements for a in self.lower.elements)
        return trivial_action and self.lower.is_abelian() and self.upper.is_abelian()

    def is_acyclic(self) -> bool:
        return len(self._kernel) == 1 and len(self._image) == self.upper.order

    def upper_transversal(self) -> Tuple[int, ...]:
        """One representative per coset of d(G⁻¹) in G⁰; the identity represents its own coset."""
        return _transversal(self.upper, self._image)

    def lower_transversal(self) -> Tuple[int, ...]:
        """One representative per coset of ker d in G⁻¹."""
        return _transversal(self.lower, frozenset(self._kernel))

    def coset_representative(self, f: int) -> int:
        return _representative(self.upper, self._image, f)

    def kernel_representative(self, a: int) -> int:
        return _representative(self.lower, frozenset(self._kernel), a)

    def preimages(self, f: int) -> Tuple[int, ...]:
        return tuple(a for a in self.lower.elements if self.d[a] == f)

    def pi0(self) -> List[Tuple[int, ...]]:
        """Cosets G⁰/d(G⁻¹)."""
        return [tuple(sorted(self.upper.mul(h, r) for h in self._image)) for r in self.upper_transversal()]

    def pi1(self) -> Tuple[int, ...]:
        return self._kernel

    def fixed_kernel(self) -> Tuple[int, ...]:
        """Elements of ker d fixed by every δ(f)."""
        return tuple(k for k in self._kernel if all(self.action[f][k] == k for f in self.upper.elements))

    def to_json(self) -> Dict:
        return {
            "kind": "crossed_module",
            "name": self.name,
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "d": list(self.d),
            "action": [list(row) for row in self.action],
        }


def _representative(group: FiniteGroup, subgroup: frozenset, x: int) -> int:
    coset = {group.mul(h, x) for h in subgroup}
    return group.identity if group.identity in coset else min(coset)


def _transversal(group: FiniteGroup, subgroup: frozenset) -> Tuple[int, ...]:
    reps = {_representative(group, subgroup, x) for x in group.elements}
    return tuple(sorted(reps, key=lambda r: (r != group.identity, r)))
