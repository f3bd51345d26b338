import itertools
import random
from pathlib import Path

import pytest

from hsjet.coeffs import GF, QQ
from hsjet.presentation import Presentation

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def cusp():
    return Presentation.from_strings(QQ, ["x", "y"], ["y^2 - x^3"])


@pytest.fixture
def line():
    return Presentation.from_strings(QQ, ["x"])


@pytest.fixture
def rng():
    return random.Random(20261016)


# --- independent oracles: plain tuples and ints, no library arithmetic ---


def series_mul(a, b, p):
    n = len(a)
    return tuple(sum(a[i] * b[k - i] for i in range(k + 1)) % p for k in range(n))


def series_pow(a, e, p):
    out = (1,) + (0,) * (len(a) - 1)
    for _ in range(e):
        out = series_mul(out, a, p)
    return out


def brute_arcs(relation, nvars, p, m):
    """Count tuples of series (one per variable) killed by ``relation(series..., p)``."""
    all_series = list(itertools.product(range(p), repeat=m + 1))
    hits = []
    for combo in itertools.product(all_series, repeat=nvars):
        if all(c == 0 for c in relation(*combo, p=p)):
            hits.append(combo)
    return hits


def cusp_relation(x, y, p):
    lhs = series_pow(y, 2, p)
    rhs = series_pow(x, 3, p)
    return tuple((a - b) % p for a, b in zip(lhs, rhs))
