import random
from pathlib import Path

import pytest
from hypothesis import settings

from causalat.galois import close_relation
from causalat.lattice import adjoin_top, boolean, chain, mn, n5, subspace_lattice

settings.register_profile("ci", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("ci")

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures" / "workspace"


def small_lattices():
    """One lattice per isomorphism class with at most five elements."""
    b2 = boolean(2)
    return [
        chain(1),
        chain(2),
        chain(3),
        chain(4),
        chain(5),
        b2,
        mn(3),
        n5(),
        adjoin_top(b2, name="b2top"),
        adjoin_top(b2.dual(), name="b2bot").dual().renamed("b2bot"),
    ]


def family():
    """The generated lattices the acceptance criteria draw from."""
    return [chain(2), chain(3), chain(4), boolean(2), mn(3), n5(), subspace_lattice(2, 2)]


def random_relation(rng, L1, L2, seeds=3):
    """A valid relation with empty kernel: top ~> top plus a few random seeds."""
    pairs = [(L1.top, L2.top)]
    pairs += [(rng.randrange(L1.n), rng.randrange(L2.n)) for _ in range(rng.randrange(seeds + 1))]
    return close_relation(L1, L2, pairs)


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES
