"""
Seeded random inputs for property checks.

Every sampler takes a `random.Random` so test runs and the selftest are
reproducible from a single seed.
"""

import random
from fractions import Fraction
from typing import List, Optional, Sequence

from homology.coefficients import CoefficientGroup, CoefficientKind, RCxValue
from homology.complexes import Cochain, CochainComplex
from microdiff import MicrodiffOperator, from_terms
from symcore import ExactScalar, Monomial, monomial

DENOMINATORS = (1, 2, 3, 4, 6)


def random_rational(rng: random.Random, bound: int = 3, denominators: Sequence[int] = DENOMINATORS) -> Fraction:
    q = rng.choice(denominators)
    return Fraction(rng.randint(-bound * q, bound * q), q)


def random_scalar(rng: random.Random, gaussian: bool = True) -> ExactScalar:
    re = Fraction(rng.randint(-4, 4), rng.choice((1, 2, 3)))
    im = Fraction(rng.randint(-2, 2), rng.choice((1, 2))) if gaussian and rng.random() < 0.3 else Fraction(0)
    return ExactScalar(re, im)


def _random_monomial(rng: random.Random, nvars: int, degree: Fraction, max_x: int = 2) -> Monomial:
    """A monomial of ξ-degree exactly `degree`."""
    x = [rng.randint(0, max_x) if rng.random() < 0.5 else 0 for _ in range(nvars)]
    xi = [rng.randint(0, 1) if rng.random() < 0.3 else 0 for _ in range(nvars - 1)]
    coeff = random_scalar(rng)
    while coeff.is_zero():
        coeff = random_scalar(rng)
    return monomial(nvars, coeff, x=x, xi1=degree - sum(xi), xi=xi)


def random_operator(
    rng: random.Random,
    nvars: int,
    window: int,
    order: Optional[Fraction] = None,
    terms: int = 4,
    unit_leading: bool = False,
) -> MicrodiffOperator:
    """
    Random operator known on `window` levels below `order`.

    With `unit_leading` the top component is a single constant multiple of
    a power of ξ₁ (an invertible operator); otherwise the top component is
    merely nonzero.
    """
    if order is None:
        order = Fraction(rng.randint(-1, 2))
    out: List[Monomial] = []
    if unit_leading:
        c = random_scalar(rng, gaussian=False)
        while c.is_zero():
            c = random_scalar(rng, gaussian=False)
        out.append(monomial(nvars, c, xi1=order))
    else:
        out.append(_random_monomial(rng, nvars, order))
    for _ in range(terms - 1):
        j = rng.randint(1, window - 1) if window > 1 else 0
        if j == 0:
            continue
        out.append(_random_monomial(rng, nvars, order - j))
    return from_terms(nvars, out, window, order=order)


def random_cochain(
    rng: random.Random,
    complex: CochainComplex,
    degree: int,
    coefficient: CoefficientGroup,
    denominators: Sequence[int] = (2, 3, 4),
) -> Cochain:
    kind = coefficient.kind
    values = []
    for _ in range(complex.dim(degree)):
        if kind is CoefficientKind.Z:
            values.append(rng.randint(-3, 3))
        elif kind is CoefficientKind.ZMOD:
            values.append(rng.randrange(coefficient.modulus))
        elif kind is CoefficientKind.Q:
            values.append(random_rational(rng))
        elif kind is CoefficientKind.QMODZ:
            q = rng.choice(denominators)
            values.append(Fraction(rng.randrange(q), q))
        else:
            q = rng.choice(denominators)
            values.append(RCxValue(Fraction(rng.randrange(q), q), random_rational(rng, 2)))
    return Cochain(complex, degree, tuple(values), coefficient)


def random_permutation(rng: random.Random, n: int) -> List[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm
