import random

import pytest

from cotilt import theorems as th
from cotilt.errors import HypothesisViolated
from cotilt.expr import evaluate
from cotilt.modules import is_isomorphic, projective, simple, zero_module
from cotilt.registry import nakayama_indecomposables

from conftest import random_module


# --- dimension one -----------------------------------------------------------------


def test_criterion_on_hereditary_simple(hereditary):
    rep = th.verify_driflessivi(hereditary.D, simple(hereditary.A, 1))
    assert rep["d_reflexive"] and rep["criterion"] and rep["agree"]


def test_criterion_on_zero(hereditary):
    rep = th.verify_driflessivi(hereditary.D, zero_module(hereditary.A))
    assert rep["d_reflexive"] and rep["agree"]


def test_criterion_witness_when_not_d_reflexive(small_one):
    m = evaluate("radq(P(2),2)", small_one.A)
    rep = th.verify_driflessivi(small_one.D, m)
    assert not rep["d_reflexive"]
    assert rep["agree"]


def test_criterion_needs_small_dimension(a4_regular):
    with pytest.raises(HypothesisViolated):
        th.verify_driflessivi(a4_regular.D, simple(a4_regular.A, 1))


def test_criterion_agrees_on_every_indecomposable(hereditary, small_one):
    for c in (hereditary, small_one):
        for m in nakayama_indecomposables(c.A):
            assert th.verify_driflessivi(c.D, m)["agree"]


def test_gamma_on_projective_is_zero_map(hereditary):
    g = th.gamma_map(hereditary.D, projective(hereditary.A, 0))
    assert g.source.dim == 0


def test_bb_sequence_on_simple(hereditary):
    s = simple(hereditary.A, 1)
    rep = th.bb_check(hereditary.D, s)
    assert rep["d_reflexive"] and rep["conditions"] and rep["agree"]
    assert rep["sequence"]["exact"]
    assert rep["gamma"].target is s


def test_bb_agrees_on_random_modules(hereditary, small_one):
    rng = random.Random(83)
    for c in (hereditary, small_one):
        for _ in range(10):
            rep = th.bb_check(c.D, random_module(c.A, rng))
            assert rep["agree"]
            if rep["d_reflexive"]:
                assert rep["cond1"] and rep["cond2"] and rep["cond3"]


def test_cotilting_classes_on_hereditary(hereditary):
    entries = th.cotilting_classes(hereditary.D, nakayama_indecomposables(hereditary.A))
    assert len(entries) == 10
    assert all(e.get("round_trip", True) for e in entries)
    kinds = {e["class"] for e in entries}
    assert "F" in kinds and "T" in kinds


def test_cotilting_classes_tags_non_reflexive(small_one):
    entries = th.cotilting_classes(small_one.D, [evaluate("radq(P(2),2)", small_one.A)])
    assert entries[0]["class"] == "not-d-reflexive"


def test_adjoint_r1_on_simple(hereditary):
    s = simple(hereditary.A, 1)
    r1 = hereditary.D.rmod(s, 1)
    assert hereditary.D.rmod(s, 1).dim
    assert th.verify_adjoint_r1(hereditary.D, s, r1)["holds"]


def test_adjoint_r1_vacuous_on_projective(hereditary):
    p = projective(hereditary.A, 0)
    rep = th.verify_adjoint_r1(hereditary.D, p, hereditary.D.rmod(p, 0))
    assert rep["first"]


def test_adjoint_r1_rejects_non_reflexive(small_one):
    m = evaluate("radq(P(2),2)", small_one.A)
    with pytest.raises(HypothesisViolated):
        th.verify_adjoint_r1(small_one.D, m, m)


# --- higher dimension ----------------------------------------------------------------


def test_last_check_on_a5(a5):
    rep = th.thm_last_check(a5.D, evaluate("radq(P(1),2)", a5.A))
    assert rep["d_reflexive"] and rep["conditions"] and rep["agree"] and rep["higher_vanish"]
    assert is_isomorphic(rep["kernel"], simple(a5.A, 2))
    assert is_isomorphic(rep["image"], simple(a5.A, 1))


def test_last_check_on_projective(a5):
    rep = th.thm_last_check(a5.D, projective(a5.A, 3))
    assert rep["conditions"] and rep["agree"]


def test_last_check_forward_direction(a5):
    rng = random.Random(89)
    checked = 0
    for _ in range(25):
        m = random_module(a5.A, rng)
        rep = th.thm_last_check(a5.D, m)
        assert rep["agree"]
        if rep["d_reflexive"]:
            assert a5.D.rmod(m, 2).dim == 0
            checked += 1
    assert checked >= 10


def test_lastt_filtration_on_a8(a8):
    rep = th.thm_lastt_filtration(a8.D, evaluate("radq(P(1),3)", a8.A), converse=True)
    assert rep.ok and rep.converse_agrees
    want = [simple(a8.A, 2), simple(a8.A, 1), simple(a8.A, 0)]
    got = rep.bottom_up()
    assert len(got) == 3
    assert all(is_isomorphic(g, w) for g, w in zip(got, want))


def test_lastt_filtration_on_projective(a8):
    p = projective(a8.A, 5)
    rep = th.thm_lastt_filtration(a8.D, p)
    assert rep.ok
    assert len(rep.bottom_up()) == 1


def test_lastt_hypothesis_witness(a8):
    with pytest.raises(HypothesisViolated) as info:
        th.thm_lastt_filtration(a8.D, simple(a8.A, 3))
    kinds = {w[0]: w[3] for w in info.value.witnesses}
    assert is_isomorphic(kinds["Ext2(Ext1(M,U),U)"], simple(a8.A, 2))
    assert is_isomorphic(info.value.round_trip, evaluate("radq(P(3),2)", a8.A))


def test_n2_sequences_on_projective(diamond):
    rep = th.n2_sequences(diamond.D, projective(diamond.A, 1))
    assert rep["first_exact"] and rep["second_exact"]
    assert rep["first"][0].dim == 0 and rep["first"][1].dim == 0


def test_lemma_check_on_stalk(hereditary):
    rep = th.lemma_lastt_check(hereditary.D, hereditary.D.stalk(simple(hereditary.A, 1)))
    assert rep["applicable"] and rep["agree"]


def test_concentrated_round_trip(a8):
    for m in nakayama_indecomposables(a8.A):
        rep = th.concentrated_round_trip(a8.D, m)
        if rep is not None:
            assert rep["iso"]
