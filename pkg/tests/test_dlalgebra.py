import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from dyerlashof.dlalgebra import (
    DLElement,
    OpWord,
    adem_expand,
    adem_expand_lower,
    cross_check_composite,
    excess,
    lower_from_upper,
    normalize,
    word_charge,
    word_degree,
)
from dyerlashof.errors import ContractError, ResourceError


def W(entries, twist=1):
    return OpWord(tuple(entries), twist)


# ---------------------------------------------------------------------------
# word bookkeeping


def test_word_degree_and_charge():
    # Q^2 Q^1 at p=3: each letter adds 2s(p-1) - eps
    assert word_degree(((0, 4), (0, 2)), 3) == 8 + 4
    assert word_degree(((1, 4), (0, 2)), 3) == 7 + 4
    assert word_degree((), 3) == 0
    assert word_charge(((0, 2), (0, 2)), 3) == 9
    assert word_charge((), 5) == 1


def test_excess():
    assert excess((), 3) == math.inf
    assert excess(((1, 3),), 3) == 2  # 2s - eps = 3 - 1
    # beta Q^{7/2} Q^{3/2} at p=3: 7 - 1 - 3*2 = 0
    assert excess(((1, 7), (0, 3)), 3) == 0
    assert excess(((0, 5), (1, 3)), 3) == 5 - (6 - 1)


def test_admissibility():
    # p s2 - 2 eps >= r2 required at each junction
    assert W([(0, 2), (0, 2)]).is_admissible(3)  # 6 >= 2
    assert not W([(0, 8), (0, 2)]).is_admissible(3)  # 6 < 8
    assert W([(0, 6), (0, 2)]).is_admissible(3)  # boundary 6 >= 6
    assert not W([(0, 6), (1, 2)]).is_admissible(3)  # 6 - 2 < 6
    # parity must match the twist class
    assert not W([(0, 3)], twist=1).is_admissible(3)
    assert W([(0, 3)], twist=-1).is_admissible(3)
    assert not W([(0, 3), (0, 2)], twist=-1).is_admissible(3)
    assert W([], twist=1).is_admissible(3)


# ---------------------------------------------------------------------------
# upper-indexed Adem relations: frozen examples


def test_adem_qq_basic():
    # Q^2 Q^0 = 2 Q^1 Q^1 at p = 3, untwisted
    assert adem_expand((0, 4), (0, 0), 1, 3) == ((((0, 2), (0, 2)), 2),)


def test_adem_twisted_zero():
    # Q^{5/2} Q^{1/2} = 0 at p = 3: every binomial vanishes
    assert adem_expand((0, 5), (0, 1), -1, 3) == ()


def test_adem_mixed_parity_is_zero():
    assert adem_expand((0, 4), (0, 1), -1, 3) == ()
    assert adem_expand((0, 8), (0, 2), -1, 3) == ()  # wrong class for twist -1


def test_adem_admissible_rejected():
    with pytest.raises(ContractError):
        adem_expand((0, 2), (0, 2), 1, 3)
    with pytest.raises(ContractError):
        adem_expand((0, 6), (0, 2), 1, 3)  # boundary pair is admissible


def test_adem_q_betaq_boundary_untwisted():
    # Q^3 bQ^1 = bQ^3 Q^1 at p = 3
    assert adem_expand((0, 6), (1, 2), 1, 3) == ((((1, 6), (0, 2)), 1),)


def test_adem_q_betaq_boundary_twisted_p3():
    # Q^{3/2} bQ^{1/2} = -bQ^{3/2} Q^{1/2} at p = 3
    assert adem_expand((0, 3), (1, 1), -1, 3) == ((((1, 3), (0, 1)), 2),)


def test_adem_q_betaq_boundary_twisted_p5():
    # Q^{5/2} bQ^{1/2} = +bQ^{5/2} Q^{1/2} at p = 5
    assert adem_expand((0, 5), (1, 1), -1, 5) == ((((1, 5), (0, 1)), 1),)


def test_adem_q_betaq_general_twisted():
    # Q^{9/2} bQ^{1/2} at p = 3
    got = dict(adem_expand((0, 9), (1, 1), -1, 3))
    assert got == {
        ((1, 7), (0, 3)): 2,
        ((1, 5), (0, 5)): 1,
        ((1, 3), (0, 7)): 2,
        ((0, 3), (1, 7)): 2,
    }
    # Q^{13/2} bQ^{3/2} at p = 3
    got = dict(adem_expand((0, 13), (1, 3), -1, 3))
    assert got == {
        ((1, 11), (0, 5)): 2,
        ((1, 9), (0, 7)): 2,
        ((0, 11), (1, 5)): 1,
        ((0, 9), (1, 7)): 2,
    }


def test_adem_betaq_betaq():
    # bQ^{13/2} bQ^{3/2} = bQ^{11/2} bQ^{5/2} - bQ^{9/2} bQ^{7/2} at p = 3
    got = dict(adem_expand((1, 13), (1, 3), -1, 3))
    assert got == {((1, 11), (1, 5)): 1, ((1, 9), (1, 7)): 2}


def test_adem_outputs_admissible():
    rng = random.Random(7)
    for _ in range(400):
        p = rng.choice((3, 5, 7))
        tw = rng.choice((1, -1))
        par = 0 if tw == 1 else 1
        e1, e2 = rng.randint(0, 1), rng.randint(0, 1)
        s2 = 2 * rng.randint(-20, 20) + par
        # choose r2 strictly past the admissibility bound, same parity class
        r2 = p * s2 - 2 * e2 + 2 * rng.randint(1, 20)
        for w, c in adem_expand((e1, r2), (e2, s2), tw, p):
            assert 1 <= c < p
            assert W(w, tw).is_admissible(p), (p, tw, (e1, r2), (e2, s2), w)
            assert word_degree(w, p) == word_degree(((e1, r2), (e2, s2)), p)


# ---------------------------------------------------------------------------
# normalization


def test_normalize_simple():
    e = DLElement(3, 1, {((0, 4), (0, 0)): 1})
    nf = normalize(e)
    assert nf.terms == {((0, 2), (0, 2)): 2}


def test_normalize_drops_mixed_parity():
    e = DLElement(3, 1, {((0, 3), (0, 2)): 1, ((0, 1),): 2})
    assert normalize(e).is_zero


def test_normalize_idempotent_and_strategies_agree():
    rng = random.Random(11)
    for _ in range(150):
        p = rng.choice((3, 5))
        tw = rng.choice((1, -1))
        par = 0 if tw == 1 else 1
        k = rng.randint(1, 4)
        w = tuple(
            (rng.randint(0, 1), 2 * rng.randint(-4, 10) + par) for _ in range(k)
        )
        e = DLElement(p, tw, {w: 1})
        left = normalize(e, "leftmost")
        right = normalize(e, "rightmost")
        assert left == right
        assert normalize(left) == left
        for word in left.terms:
            assert W(word, tw).is_admissible(p)
            assert word_degree(word, p) == word_degree(w, p)
            assert len(word) == len(w)


def test_normalize_deep_negative_indices():
    # words with strongly negative indices have large but finite normal
    # forms; pin one as a regression marker
    e = DLElement(5, 1, {((1, -34), (0, -22), (0, -36)): 1})
    a = normalize(e, "leftmost")
    assert len(a.terms) == 4164
    assert normalize(e, "rightmost") == a
    deg = word_degree(((1, -34), (0, -22), (0, -36)), 5)
    assert all(word_degree(w, 5) == deg for w in a.terms)


def test_normalize_budget():
    e = DLElement(3, 1, {((0, 4), (0, 0)): 1})
    with pytest.raises(ResourceError):
        normalize(e, budget=0)


def test_normalize_bad_strategy():
    with pytest.raises(ContractError):
        normalize(DLElement(3, 1, {}), strategy="middle")


# ---------------------------------------------------------------------------
# lower indexing


def test_lower_from_upper_examples():
    # Q^1 on degree 0 at p=3: Q^1 = -Q_4, so (index 4, coeff 2)
    assert lower_from_upper(0, 2, 0, 3) == (4, 2, False)
    # Q^{1/2} on degree 0 at p=3: Q^{1/2} = Q_2
    assert lower_from_upper(0, 1, 0, 3) == (2, 1, False)
    # beta flavors share constants
    assert lower_from_upper(1, 1, 0, 3) == (2, 1, False)
    # zero flags: multiplier < 0, or <= 0 with beta
    assert lower_from_upper(0, 2, 3, 3)[2] is True
    assert lower_from_upper(0, 2, 2, 3)[2] is False  # Q_0 is the p-th power op
    assert lower_from_upper(1, 2, 2, 3)[2] is True
    assert lower_from_upper(1, 3, 1, 5)[2] is False
    # p = 5 twisted: Q^{1/2} = hf^3 Q_4 = 3 Q_4
    assert lower_from_upper(0, 1, 0, 5) == (4, 3, False)


def test_lower_adem_contract():
    with pytest.raises(ContractError):
        adem_expand_lower(2, 2, 0, 1, 3, "QQ")
    with pytest.raises(ContractError):
        adem_expand_lower(1, 2, 0, 1, 3, "QbQ")
    with pytest.raises(ContractError):
        adem_expand_lower(2, 0, 0, 1, 3, "QbQ")  # inner beta Q_0 undefined
    with pytest.raises(ContractError):
        adem_expand_lower(2, 1, 0, 1, 3, "Qq")


def test_lower_adem_frozen_examples():
    # Q_16 bQ_2 on degree 0, chi = -1, p = 3 (multipliers r=8, s=1):
    # the singular first-family term survives as bQ_2 Q_6
    got = adem_expand_lower(8, 1, 0, -1, 3, "QbQ")
    assert got == {((1, 1), (0, 3)): 1}
    # Q_16 bQ_6 (r=8, s=3): one regular first-family term and one second-family term
    got = adem_expand_lower(8, 3, 0, -1, 3, "QbQ")
    assert got == {((1, 1), (0, 5)): 1, ((0, 2), (1, 5)): 1}
    # Q_14 Q_6 (r=7, s=3) twisted: single term -Q_2 Q_10
    got = adem_expand_lower(7, 3, 0, -1, 3, "QQ")
    assert got == {((0, 1), (0, 5)): 2}
    # beta twin carries the same coefficients
    got = adem_expand_lower(7, 3, 0, -1, 3, "bQQ")
    assert got == {((1, 1), (0, 5)): 2}
    # bQ_16 bQ_6 (r=8, s=3): +bQ_4 bQ_10
    got = adem_expand_lower(8, 3, 0, -1, 3, "bQbQ")
    assert got == {((1, 2), (1, 5)): 1}


# ---------------------------------------------------------------------------
# the two expansion routes agree (frozen spot checks; the full grid is an
# acceptance test)

CROSS_ORACLES = [
    # (r, s, case, n, p, chi, expected dict over upper words)
    (2, 1, "QbQ", 0, 3, -1, {((1, 3), (0, 1)): 1}),
    (4, 1, "QbQ", 0, 3, -1, {}),
    (6, 1, "QbQ", 0, 3, -1, {((0, 5), (1, 3)): 2}),
    (8, 1, "QbQ", 0, 3, -1, {((1, 7), (0, 3)): 2}),
    (8, 3, "QbQ", 0, 3, -1, {((1, 11), (0, 5)): 1, ((0, 11), (1, 5)): 2}),
    (3, 2, "QbQ", 0, 3, 1, {((1, 6), (0, 2)): 2}),
    (9, 2, "QbQ", 0, 3, 1, {((1, 10), (0, 4)): 1}),
    (2, 1, "QbQ", 0, 5, -1, {((1, 5), (0, 1)): 3}),
    (12, 1, "QbQ", 0, 5, -1, {((1, 13), (0, 3)): 2}),
    (7, 3, "QQ", 0, 3, -1, {((0, 11), (0, 5)): 2}),
    (7, 3, "bQQ", 0, 3, -1, {((1, 11), (0, 5)): 2}),
    (8, 3, "bQbQ", 0, 3, -1, {((1, 11), (1, 5)): 2}),
]


@pytest.mark.parametrize("r,s,case,n,p,chi,want", CROSS_ORACLES)
def test_cross_check_frozen(r, s, case, n, p, chi, want):
    route_a, route_b = cross_check_composite(r, s, case, n, p, chi)
    assert route_a == want
    assert route_b == want


def test_cross_check_small_grid():
    for p in (3, 5):
        for case in ("QQ", "bQQ", "QbQ", "bQbQ"):
            for s in range(0, 5):
                for r in range(s + 1, 7):
                    for n in (0, 1, 2):
                        for chi in (1, -1):
                            a, b = cross_check_composite(r, s, case, n, p, chi)
                            assert a == b, (r, s, case, n, p, chi, a, b)


# ---------------------------------------------------------------------------
# property tests


@settings(max_examples=120, deadline=None)
@given(
    st.sampled_from([3, 5, 7]),
    st.sampled_from([1, -1]),
    st.lists(
        st.tuples(st.integers(0, 1), st.integers(-3, 8)), min_size=1, max_size=3
    ),
)
def test_normalize_properties(p, tw, raw):
    par = 0 if tw == 1 else 1
    w = tuple((e, 2 * h + par) for e, h in raw)
    e = DLElement(p, tw, {w: 1})
    nf = normalize(e)
    assert normalize(nf) == nf
    assert normalize(e, "rightmost") == nf
    for word in nf.terms:
        assert OpWord(word, tw).is_admissible(p)
        assert word_degree(word, p) == word_degree(w, p)
