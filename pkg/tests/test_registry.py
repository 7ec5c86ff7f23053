import pytest

from cotilt.errors import UnknownExample
from cotilt.registry import example_ids, run_example

# Worked examples whose stated values the computation does not reproduce.
KNOWN_FAILURES = {
    "ex-3-2": {"partial cotilting", "G(S(2)) cohomology degrees"},
}

_CACHE = {}


def result(ident):
    if ident not in _CACHE:
        _CACHE[ident] = run_example(ident)
    return _CACHE[ident]


def test_ids():
    assert example_ids() == ["ex-2-2a", "ex-2-2b", "ex-3-1", "ex-3-2", "ex-5-1", "ex-a5",
                             "ex-a8"]


@pytest.mark.parametrize("ident", [
    pytest.param(i, marks=pytest.mark.xfail(strict=True, reason="stated value not reproduced"))
    if i in KNOWN_FAILURES else i
    for i in example_ids()
])
def test_example_passes(ident):
    res = result(ident)
    assert res.checks
    assert res.passed, [c.name for c in res.failures()]


@pytest.mark.parametrize("ident", sorted(KNOWN_FAILURES))
def test_failures_are_exactly_the_known_ones(ident):
    assert {c.name for c in result(ident).failures()} == KNOWN_FAILURES[ident]


def test_unknown_example():
    with pytest.raises(UnknownExample):
        run_example("ex-9-9")
