import json
import pathlib

import pytest

from isodescent import linalg as la
from isodescent.descent import GroupRep
from isodescent.exactfield import make_descriptor
from isodescent.forms import GramForm

BUNDLE_DIR = pathlib.Path(__file__).resolve().parent.parent / "bundles"


@pytest.fixture(scope="session")
def gauss5():
    """Gaussian field, ell = 5 split."""
    return make_descriptor(4, 5)


@pytest.fixture(scope="session")
def gauss13():
    """Gaussian field, ell = 13 split."""
    return make_descriptor(4, 13)


@pytest.fixture(scope="session")
def gauss7():
    """Gaussian field with conjugation, ell = 7 inert: k = F_49."""
    return make_descriptor(4, 7, involution=3)


@pytest.fixture(scope="session")
def real5():
    """Real quintic subfield, ell = 5 totally ramified: 2e = ell - 1."""
    return make_descriptor(5, 5, subgroup=(1, 4))


@pytest.fixture(scope="session")
def quad7():
    """Ramified quadratic subfield of conductor 7 with its conjugation."""
    return make_descriptor(7, 7, subgroup=(1, 2, 4), involution=3)


@pytest.fixture(scope="session")
def rat5():
    """K = Q with ell = 5 (degenerate descriptor)."""
    return make_descriptor(1, 5)


def quaternion_rep(desc) -> GroupRep:
    """Quaternion group inside SL2 over the Gaussian field."""
    i = desc.zeta_power(1)
    z, o = desc.zero, desc.one
    form = GramForm(desc, [[z, o], [-o, z]], "alternating")
    gens = [[[z, -o], [o, z]], [[i, z], [z, -i]]]
    return GroupRep(desc, gens, form)


def rotation4_rep(desc) -> GroupRep:
    """Order-4 rotation on a hermitian line over the Gaussian field."""
    i = desc.zeta_power(1)
    form = GramForm(desc, [[desc.one]], "hermitian")
    return GroupRep(desc, [[[i]]], form)


def ramified_pair_rep(desc) -> GroupRep:
    """Two commuting order-4 rotations on a ramified hermitian 4-space.

    The second plane's gram entry is the anti-fixed square root carried by
    the quadratic field, so the form is hermitian of twist zero.
    """
    sq = desc.orbit_sum(1) - desc.orbit_sum(3)
    z, o = desc.zero, desc.one
    gram = [[o, z, z, z],
            [z, o, z, z],
            [z, z, z, sq],
            [z, z, -sq, z]]
    g1 = [[z, -o, z, z],
          [o, z, z, z],
          [z, z, o, z],
          [z, z, z, o]]
    g2 = [[o, z, z, z],
          [z, o, z, z],
          [z, z, z, -o],
          [z, z, o, z]]
    form = GramForm(desc, gram, "hermitian")
    return GroupRep(desc, [g1, g2], form)


@pytest.fixture(scope="session")
def q8_rep5(gauss5):
    return quaternion_rep(gauss5)


@pytest.fixture(scope="session")
def q8_rep13(gauss13):
    return quaternion_rep(gauss13)


@pytest.fixture(scope="session")
def z4_rep7(gauss7):
    return rotation4_rep(gauss7)


@pytest.fixture(scope="session")
def remark4_rep7(quad7):
    return ramified_pair_rep(quad7)


def bundle_path(name: str) -> pathlib.Path:
    return BUNDLE_DIR / f"{name}.json"


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def random_field_element(rng, desc, integral=False, max_pi_shift=2):
    """Small random element of K as a rational combination of orbit sums.

    With integral=True the denominators stay coprime to ell and no negative
    uniformizer powers are mixed in, so the valuation is nonnegative.
    """
    x = desc.zero
    for _ in range(rng.randrange(1, 4)):
        j = rng.randrange(desc.n)
        num = rng.randint(-9, 9)
        den = rng.choice([1, 2, 3, 7, 9])
        while den % desc.ell == 0:
            den += 1
        x = x + desc.rational(f"{num}/{den}") * desc.orbit_sum(j)
    lo = 0 if integral else -max_pi_shift
    return x * desc.pi_power(rng.randint(lo, max_pi_shift))


def random_invertible(rng, desc, n, entry_fn=None):
    """Random matrix over K with nonzero determinant (retried until one)."""
    while True:
        m = [[entry_fn(rng, desc) if entry_fn else
              random_field_element(rng, desc)
              for _ in range(n)] for _ in range(n)]
        if la.det(m, desc) != desc.zero:
            return m


def assert_matrix_equal(a, b):
    assert len(a) == len(b)
    for ra, rb in zip(a, b):
        assert list(ra) == list(rb)
