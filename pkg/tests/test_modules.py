import random

import pytest
from hypothesis import given, settings, strategies as st

from cotilt.errors import CapExceeded
from cotilt.expr import evaluate
from cotilt.linalg import rank
from cotilt.modules import (cokernel, describe, direct_sum, dual, ext_dim, find_isomorphism,
                            hom_basis, hom_dim, image, injective, injective_coresolution_ext_dim,
                            injective_dimension, is_isomorphic, kernel, lift_through,
                            loewy_layers, projective, projective_cover, projective_dimension,
                            projective_resolution, rad, radq, simple, soc, socq, top)

from conftest import make, LINE4


def test_projectives_of_a4(a4_regular):
    A = a4_regular.A
    assert [projective(A, j).dim for j in range(4)] == [2, 2, 2, 1]
    assert loewy_layers(projective(A, 0)) == [(1, 0, 0, 0), (0, 1, 0, 0)]
    assert describe(injective(A, 1)) == "[1,1,0,0]{1+2}"


def test_module_actions_are_representations(a8):
    for expr in ("P(1)", "I(5)", "radq(P(4),3)", "S(2)+P(6)"):
        evaluate(expr, a8.A).check()


def test_radical_socle_top(a5):
    p = projective(a5.A, 1)
    assert rad(p).dim == 2
    assert soc(p).dim == 1
    assert is_isomorphic(top(p), simple(a5.A, 1))
    # P(1) = 1/2/3 is uniserial, so m/rad^2 and m/soc agree
    assert is_isomorphic(radq(p, 2), socq(p, 1))


def test_resolution_of_simple_in_a4(a4_regular):
    # every syzygy is simple: 0 -> P(4) -> P(3) -> P(2) -> P(1) -> S(1) -> 0
    res = projective_resolution(simple(a4_regular.A, 0))
    assert res.complete and res.check_exact()
    assert [describe(t) for t in res.terms] == ["[1,1,0,0]{1+2}", "[0,1,1,0]{2+3}",
                                                "[0,0,1,1]{3+4}", "[0,0,0,1]{4}"]
    assert projective_dimension(simple(a4_regular.A, 0)) == 3


def test_resolution_cap():
    text = ("[algebra]\nvertices = 2\narrow a: 1 -> 2\narrow b: 2 -> 1\n"
            "relation a*b\nrelation b*a\n")
    c = make(text, "R")
    with pytest.raises(CapExceeded):
        projective_resolution(simple(c.A, 0), cap=5)


def test_kernel_image_cokernel_dimensions(hereditary):
    A = hereditary.A
    p1, p2 = projective(A, 0), projective(A, 1)
    f = hom_basis(p2, p1).basis[0]
    k, _ = kernel(f)
    i, _ = image(f)
    c, _ = cokernel(f)
    assert k.dim == 0 and i.dim == 3 and c.dim == 1
    assert is_isomorphic(c, simple(A, 0))


def test_hom_dimensions(hereditary):
    A = hereditary.A
    # Hom(P(i), M) = e_i M
    m = evaluate("I(3)", A)
    assert [hom_dim(projective(A, j), m) for j in range(4)] == list(m.dim_vector())
    assert hom_dim(simple(A, 0), projective(A, 0)) == 0


def test_ext_agrees_with_injective_route(a5):
    A = a5.A
    mods = [simple(A, j) for j in range(5)] + [evaluate("radq(P(1),2)", A)]
    for m in mods:
        for n in mods:
            for i in (1, 2):
                assert ext_dim(m, n, i) == injective_coresolution_ext_dim(m, n, i)


def test_injective_dimension_of_u(a5):
    U = direct_sum(a5.ctx.summands)[0]
    assert injective_dimension(U) == 2


def test_dual_of_projective_is_injective(diamond):
    A = diamond.A
    for j in range(4):
        d = dual(projective(A, j, "right"))
        assert is_isomorphic(d, injective(A, j))


def test_lift_through_cover(a8):
    m = evaluate("radq(P(4),2)+S(7)", a8.A)
    cover = projective_cover(m)
    p = projective(a8.A, 3)
    f = hom_basis(p, m).basis[0]
    h = lift_through(f, cover)
    assert (cover.matrix @ h.matrix) == f.matrix


def test_find_isomorphism_between_sum_orders(a8):
    A = a8.A
    x, y = evaluate("S(1)+P(4)", A), evaluate("P(4)+S(1)", A)
    f = find_isomorphism(x, y)
    assert f is not None and f.is_iso() and f.is_intertwiner()


def test_nonisomorphic_same_dimension_vector(diamond):
    A = diamond.A
    assert not is_isomorphic(evaluate("I(4)", A), evaluate("P(2)+S(3)", A))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_map_kernel_plus_image(seed):
    rng = random.Random(seed)
    A = _LINE.A
    exprs = ["P(1)", "P(2)", "I(3)", "S(2)", "radq(P(1),2)", "P(3)+S(1)"]
    m, n = (evaluate(rng.choice(exprs), A) for _ in range(2))
    H = hom_basis(m, n)
    if not H.basis:
        return
    f = H.combo([A.field(rng.randint(-3, 3)) for _ in H.basis])
    assert f.is_intertwiner()
    k, inc = kernel(f)
    i, _ = image(f)
    assert k.dim + i.dim == m.dim == k.dim + rank(f.matrix)
    assert inc.is_intertwiner()


_LINE = make(LINE4, "R")
