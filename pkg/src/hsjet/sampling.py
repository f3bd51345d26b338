"""Seeded random polynomials for property checks."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .coeffs import CoefficientRing
from .poly import JetVariable, Monomial, Polynomial


def random_coeff(rng: random.Random, ring: CoefficientRing):
    if ring.kind == "QQ":
        return Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    if ring.kind == "ZZ":
        return rng.randint(-9, 9)
    return rng.randrange(ring.p)


def random_poly(rng: random.Random, names: Sequence[str], ring: CoefficientRing,
                max_degree: int = 3, max_terms: int = 4) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(0, max_degree)
        exps = {}
        for _ in range(deg):
            v = JetVariable(rng.choice(list(names)))
            exps[v] = exps.get(v, 0) + 1
        terms[Monomial.from_dict(exps)] = random_coeff(rng, ring)
    return Polynomial(terms, ring)
