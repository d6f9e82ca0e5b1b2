"""Shared canonical transform instances and admissible sample points."""

from fractions import Fraction

import pytest

from zeromap.catalog import Family, make_transform

CANONICAL_PARAMS = {
    Family.LAGUERRE: {"alpha0": 0, "beta0": 1},
    Family.JACOBI: {"alpha0": "1/2", "gamma0": 3},
    Family.CHARLIER: {"alpha0": -2},
    Family.MEIXNER: {"beta0": "-3/2", "gamma0": -2},
    Family.KRAWTCHOUK: {"N": 10, "gamma0": 1},
    Family.WALL: {"beta0": "-1/2", "delta0": "1/2", "q": "1/2"},
    # N = 8 keeps the transformable degree at 8 and the moment rank at 9
    Family.QKRAWTCHOUK: {"beta0": 1, "N": 8, "q": "1/2"},
    Family.WALL0: {"delta0": 1, "q": "1/2"},
}

# three admissible mu samples per family, interior to the source interval
MU_SAMPLES = {
    Family.LAGUERRE: [Fraction(1, 2), Fraction(1), Fraction(5, 2)],
    Family.JACOBI: [Fraction(1, 2), Fraction(1), Fraction(5, 2)],
    Family.CHARLIER: [Fraction(1, 2), Fraction(1), Fraction(3)],
    Family.MEIXNER: [Fraction(1, 2), Fraction(1), Fraction(3, 2)],
    Family.KRAWTCHOUK: [Fraction(1, 2), Fraction(1), Fraction(3)],
    Family.WALL: [Fraction(1, 4), Fraction(1, 2), Fraction(1)],
    Family.QKRAWTCHOUK: [Fraction(1, 2), Fraction(1), Fraction(2)],
    Family.WALL0: [Fraction(1, 2), Fraction(1), Fraction(2)],
}


def canonical_spec(family):
    return make_transform(family, CANONICAL_PARAMS[family])


def random_admissible_params(family, rng):
    """A random parameter draw satisfying the family's constraints."""
    r = lambda lo, hi: Fraction(rng.randint(lo * 8, hi * 8), 8)
    if family is Family.LAGUERRE:
        return {"alpha0": r(0, 4), "beta0": r(1, 3)}
    if family is Family.JACOBI:
        a = r(1, 3)
        return {"alpha0": a, "gamma0": a + Fraction(rng.randint(1, 32), 8)}
    if family is Family.CHARLIER:
        return {"alpha0": -r(1, 5), "sigma1": r(0, 2)}
    if family is Family.MEIXNER:
        return {"beta0": -r(1, 4), "gamma0": -r(1, 4)}
    if family is Family.KRAWTCHOUK:
        return {"N": rng.randint(8, 14), "gamma0": r(1, 4)}
    if family is Family.WALL:
        b = -r(1, 3)
        return {
            "beta0": b,
            "delta0": b + Fraction(rng.randint(1, 32), 8),
            "q": Fraction(rng.randint(1, 7), 8),
        }
    if family is Family.QKRAWTCHOUK:
        return {
            "beta0": r(1, 3),
            "N": rng.randint(8, 10),
            "q": Fraction(rng.randint(1, 7), 8),
        }
    return {"delta0": r(1, 4), "q": Fraction(rng.randint(1, 7), 8)}


@pytest.fixture(params=list(Family), ids=lambda f: f.value)
def each_family_spec(request):
    return canonical_spec(request.param)
