import pytest

from cotilt.algebra import algebra_from_text
from cotilt.derived import Derived
from cotilt.duality import DualityContext
from cotilt.expr import evaluate_summands, parse
from cotilt.registry import REGISTRY

LINE4 = """[algebra]
field = Q
vertices = 1..4
arrow a: 1 -> 2
arrow b: 2 -> 3
arrow c: 3 -> 4
"""

LINE3_ZERO = """[algebra]
field = Q
vertices = 1..3
arrow a: 1 -> 2
arrow b: 2 -> 3
relation a*b
"""


class Ctx:
    """Algebra, duality context and derived helper bundled for tests."""

    def __init__(self, A, ctx):
        self.A, self.ctx, self.D = A, ctx, Derived(ctx)


def make(text, u, labels=None):
    A = algebra_from_text(text)
    return Ctx(A, DualityContext(A, evaluate_summands(parse(u), A), labels=labels))


def from_registry(ident):
    A, ctx = REGISTRY[ident].context()
    return Ctx(A, ctx)


@pytest.fixture(scope="session")
def a4_w():
    return from_registry("ex-2-2a")


@pytest.fixture(scope="session")
def a4_regular():
    return from_registry("ex-2-2b")


@pytest.fixture(scope="session")
def hereditary():
    """Path algebra of 1->2->3->4 with the regular bimodule; both dimensions 1."""
    return make(LINE4, "R")


@pytest.fixture(scope="session")
def small_one():
    """1->2->3 with ab=0 and U = P(1)+S(2): both dimensions 1, some modules not D-reflexive."""
    return make(LINE3_ZERO, "P(1)+S(2)")


@pytest.fixture(scope="session")
def a5():
    return from_registry("ex-a5")


@pytest.fixture(scope="session")
def a8():
    return from_registry("ex-a8")


@pytest.fixture(scope="session")
def diamond():
    return from_registry("ex-5-1")


_POOLS = {}


def indecomposable_pool(A, side="left"):
    """Radical quotients of projectives and socle quotients of injectives (cached per algebra)."""
    from cotilt.registry import _sample_indecomposables
    key = (id(A), side)
    if key not in _POOLS:
        _POOLS[key] = (A, _sample_indecomposables(A, side))
    return _POOLS[key][1]


def random_module(A, rng, side="left", max_summands=2):
    from cotilt.modules import direct_sum
    pool = indecomposable_pool(A, side)
    parts = [rng.choice(pool) for _ in range(rng.randint(1, max_summands))]
    return parts[0] if len(parts) == 1 else direct_sum(parts)[0]


def random_map(m, n, rng):
    """A random combination of a Hom basis with small integer coefficients."""
    from cotilt.modules import hom_basis, zero_map
    H = hom_basis(m, n)
    if not len(H):
        return zero_map(m, n)
    return H.combo([m.field(rng.randint(-2, 2)) for _ in range(len(H))])
