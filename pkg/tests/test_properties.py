"""Randomised invariants.  The ``check_*`` helpers are shared with the acceptance gate."""
import random

from hypothesis import HealthCheck, given, settings, strategies as st

from cotilt import theorems as th
from cotilt.derived import BoundedComplex
from cotilt.linalg import Matrix
from cotilt.modules import cokernel, image
from cotilt.spectral import check_e2_oracle, second_spectral

from conftest import random_map, random_module

SETTINGS = dict(deadline=None, derandomize=True,
                suppress_health_check=[HealthCheck.function_scoped_fixture,
                                       HealthCheck.too_slow])
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


def check_triangles(c, rng):
    """Both triangle identities and naturality of the unit on one random draw."""
    ctx = c.ctx
    a = random_module(c.A, rng)
    fa = ctx.phi(a)
    assert (ctx.phi.on_map(ctx.eta(a)) @ ctx.xi(fa)).matrix == Matrix.identity(fa.dim, a.field)
    b = random_module(ctx.S, rng, side="right")
    gb = ctx.psi(b)
    assert (ctx.psi.on_map(ctx.xi(b)) @ ctx.eta(gb)).matrix == Matrix.identity(gb.dim, b.field)
    n = random_module(c.A, rng)
    f = random_map(a, n, rng)
    round_trip = ctx.psi.on_map(ctx.phi.on_map(f))
    assert (round_trip @ ctx.eta(a)).matrix == (ctx.eta(n) @ f).matrix


def check_thickness(c, rng):
    """In 0 -> K -> M -> C -> 0, two D-reflexive terms force the third."""
    m, n = random_module(c.A, rng), random_module(c.A, rng)
    f = random_map(m, n, rng)
    sub = image(f)[0]
    quo = cokernel(f)[0]
    flags = [c.D.is_d_reflexive_object(x) for x in (sub, n, quo)]
    assert sum(flags) != 2
    return flags


def check_spectral(c, rng):
    sd = second_spectral(c.ctx, random_module(c.A, rng))
    assert check_e2_oracle(sd) == []
    assert all(x == y for x, y in sd.filtration_accounting().values())
    return sd


def random_complex(c, rng):
    """Two-term complexes, or three-term ones ending in a cokernel projection."""
    A = c.A
    m, n = random_module(A, rng), random_module(A, rng)
    f = random_map(m, n, rng)
    lo = rng.randint(-2, 1)
    if rng.random() < 0.5:
        return BoundedComplex(A, "left", lo, [m, n], [f])
    q, proj = cokernel(f)
    return BoundedComplex(A, "left", lo, [m, n, q], [f, proj])


def check_atmostone(c, rng):
    lhs, rhs = th.cohomology_criterion(c.D, random_complex(c, rng))
    assert lhs == rhs
    return lhs


def random_reflexive_pair(c, rng, tries=40):
    for _ in range(tries):
        a = random_module(c.A, rng)
        b = random_module(c.ctx.S, rng, side="right")
        if c.D.is_d_reflexive_object(a) and c.D.is_d_reflexive_object(b):
            return a, b
    raise AssertionError("no D-reflexive pair found")


def check_adjoint(c, rng):
    a, b = random_reflexive_pair(c, rng)
    assert th.verify_adjoint_r1(c.D, a, b)["holds"]


# --- hypothesis-driven runs -----------------------------------------------------------


@settings(max_examples=40, **SETTINGS)
@given(seed=seeds)
def test_triangles_a5(a5, seed):
    check_triangles(a5, random.Random(seed))


@settings(max_examples=35, **SETTINGS)
@given(seed=seeds)
def test_triangles_small(small_one, seed):
    check_triangles(small_one, random.Random(seed))


@settings(max_examples=35, **SETTINGS)
@given(seed=seeds)
def test_triangles_a8(a8, seed):
    check_triangles(a8, random.Random(seed))


@settings(max_examples=50, **SETTINGS)
@given(seed=seeds)
def test_thickness_a4_regular(a4_regular, seed):
    check_thickness(a4_regular, random.Random(seed))


@settings(max_examples=50, **SETTINGS)
@given(seed=seeds)
def test_thickness_small(small_one, seed):
    check_thickness(small_one, random.Random(seed))


@settings(max_examples=15, **SETTINGS)
@given(seed=seeds)
def test_spectral_a8(a8, seed):
    check_spectral(a8, random.Random(seed))


@settings(max_examples=15, **SETTINGS)
@given(seed=seeds)
def test_spectral_diamond(diamond, seed):
    check_spectral(diamond, random.Random(seed))


@settings(max_examples=25, **SETTINGS)
@given(seed=seeds)
def test_atmostone_small(small_one, seed):
    check_atmostone(small_one, random.Random(seed))


@settings(max_examples=25, **SETTINGS)
@given(seed=seeds)
def test_atmostone_hereditary(hereditary, seed):
    check_atmostone(hereditary, random.Random(seed))


@settings(max_examples=20, **SETTINGS)
@given(seed=seeds)
def test_adjoint_r1_hereditary(hereditary, seed):
    check_adjoint(hereditary, random.Random(seed))


@settings(max_examples=20, **SETTINGS)
@given(seed=seeds)
def test_adjoint_r1_small(small_one, seed):
    check_adjoint(small_one, random.Random(seed))


def test_thickness_sees_non_reflexive_terms(small_one):
    """The small context is a meaningful test bed: some sequences do contain bad terms."""
    rng = random.Random(97)
    seen = [check_thickness(small_one, rng) for _ in range(30)]
    assert any(not all(f) for f in seen)


def test_atmostone_sees_both_answers(small_one):
    rng = random.Random(101)
    answers = {check_atmostone(small_one, rng) for _ in range(30)}
    assert answers == {True, False}
