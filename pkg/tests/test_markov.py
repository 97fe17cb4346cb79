import math
import random

import pytest

from braidforge.braid import (
    BraidWord,
    ascending_block,
    big_pi,
    closure_components,
    descending_block,
    one_bridge_braid,
    pi_power,
)
from braidforge.errors import DomainError, MoveError, TraceError, UnsupportedCase
from braidforge.invariants import same_closure_evidence
from braidforge.markov import (
    BraidRelationAt,
    CoarseEquality,
    ConjugateBy,
    Destabilize,
    FarCommuteAt,
    FreeCancelAt,
    FreeInsertAt,
    MoveTrace,
    StabilizePos,
    apply_move,
    coprime_inverses,
    garside_normal_form,
    reverse_trace,
    ttk_to_one_bridge,
    verify_trace,
    word_equal,
)


def B(n, *letters):
    return BraidWord(n, tuple(letters))


# ---------------------------------------------------------------------------
# word problem
# ---------------------------------------------------------------------------


def test_word_equal_basics():
    assert word_equal(B(3, 1, 2, 1), B(3, 2, 1, 2))
    assert not word_equal(B(3, 1), B(3, 2))
    assert word_equal(B(3, 1, -1), B(3))
    with pytest.raises(DomainError):
        word_equal(B(3, 1), B(4, 1))


def test_pi_big_pi_identity():
    # pi_3^4 = Pi_3^2 in B_4
    lhs = pi_power(3, 4, 4)
    rhs = BraidWord(4, big_pi(3, 4).letters * 2)
    assert word_equal(lhs, rhs)


def word_eq(n, u, v):
    return word_equal(BraidWord(n, tuple(u)), BraidWord(n, tuple(v)))


def test_identity_suite_small():
    # sigma_i pi_m = pi_m sigma_{i+1}; the two tower decompositions; the
    # half-twist intertwiner; full-twist centrality.
    for m in range(2, 6):
        n = m + 1
        pi = descending_block(m)
        for i in range(1, m):
            assert word_eq(n, (i,) + pi, pi + (i + 1,))
        for s in range(2, m + 1):
            assert word_eq(n, pi * s, descending_block(m - 1) + pi * (s - 1) + (s - 1,))
            assert word_eq(
                n, pi * s, descending_block(m - 1) * (s - 1) + pi + ascending_block(s - 1)
            )
        assert word_eq(n, (m,) + pi * 2, pi * 2 + (1,))
        full = pi * (m + 1)
        for i in range(1, m + 1):
            assert word_eq(n, (i,) + full, full + (i,))
        Pi = big_pi(m, n).letters
        for i in range(1, m + 1):
            assert word_eq(n, (i,) + Pi, Pi + (m + 1 - i,))


def test_word_equal_equivalence_and_move_invariance():
    rng = random.Random(23)
    moves_applied = 0
    for _ in range(120):
        n = rng.randint(2, 6)
        letters = tuple(
            rng.choice([1, -1]) * rng.randint(1, n - 1)
            for _ in range(rng.randint(0, 24))
        )
        w = BraidWord(n, letters)
        assert word_equal(w, w)  # reflexivity
        v = w
        for _ in range(4):
            v2 = _random_relation_move(v, rng)
            if v2 is not None:
                v = v2
                moves_applied += 1
        assert word_equal(w, v)
        assert word_equal(v, w)  # symmetry
    assert moves_applied > 150


def _random_relation_move(w, rng):
    options = []
    letters = w.letters
    for p in range(len(letters) - 2):
        a, b, c = letters[p : p + 3]
        if a == c and abs(abs(a) - abs(b)) == 1 and (a > 0) == (b > 0):
            options.append(BraidRelationAt(p))
    for p in range(len(letters) - 1):
        if abs(abs(letters[p]) - abs(letters[p + 1])) >= 2:
            options.append(FarCommuteAt(p))
        if letters[p] == -letters[p + 1]:
            options.append(FreeCancelAt(p))
    if len(letters) < 30:
        options.append(
            FreeInsertAt(rng.randint(0, len(letters)), rng.choice([1, -1]) * rng.randint(1, w.strands - 1))
        )
    if not options:
        return None
    return apply_move(w, rng.choice(options))


def test_normal_form_strips_trivial_factors():
    n, delta, factors = garside_normal_form(B(3, 1, 2, 1, -1, -2, -1))
    assert (n, delta, factors) == (3, 0, ())


# ---------------------------------------------------------------------------
# moves and traces
# ---------------------------------------------------------------------------


def test_apply_move_examples():
    assert apply_move(B(3, 1, 2, 1), BraidRelationAt(0)).letters == (2, 1, 2)
    stab = apply_move(B(2, 1), StabilizePos())
    assert stab.strands == 3 and stab.letters == (1, 2)
    dest = apply_move(B(3, 1, 2), Destabilize())
    assert dest.strands == 2 and dest.letters == (1,)
    assert apply_move(B(3, 1, 3 - 2), FreeInsertAt(0, 2)).letters == (2, -2, 1, 1)
    assert apply_move(B(3, 2, -2), FreeCancelAt(0)).letters == ()
    conj = apply_move(B(3, 1), ConjugateBy((2,)))
    assert conj.letters == (2, 1, -2)


def test_apply_move_errors():
    with pytest.raises(MoveError):
        apply_move(B(3, 1, 2), BraidRelationAt(0))
    with pytest.raises(MoveError):
        apply_move(B(3, 1, 2), FarCommuteAt(0))
    with pytest.raises(MoveError):
        apply_move(B(3, 2, 1, 2), Destabilize())  # sigma_2 occurs twice
    with pytest.raises(MoveError):
        apply_move(B(3, 2, 1), Destabilize())  # sigma_2 not last
    with pytest.raises(MoveError):
        apply_move(B(3, 1), CoarseEquality(B(3, 2)))
    with pytest.raises(MoveError):
        apply_move(B(3, 1), CoarseEquality(B(4, 1)))


def test_verify_trace_empty_and_coarse():
    w = B(3, 1, 2)
    verify_trace(MoveTrace(w, (), w))
    tr = MoveTrace(w, (CoarseEquality(B(3, 1, 2, 1, -1)),), B(3, 1, 2, 1, -1))
    verify_trace(tr)
    bad = MoveTrace(w, (), B(3, 2, 1))
    with pytest.raises(TraceError):
        verify_trace(bad)


def test_verify_trace_rejects_bad_destabilization():
    # The coarse rewrite is fine, but sigma_2 occurs twice afterwards, so the
    # destabilization must be rejected at step 1.
    start = B(3, 1, 2, 1)
    steps = (CoarseEquality(B(3, 2, 1, 2)), Destabilize())
    tr = MoveTrace(start, steps, B(2, 1, 1))
    with pytest.raises(TraceError) as err:
        verify_trace(tr)
    assert err.value.step == 1

    # [2,1,2,1] vs [1,2,1,2]: conjugate but not equal, so a coarse step
    # claiming equality is itself rejected.
    tr = MoveTrace(B(3, 2, 1, 2, 1), (CoarseEquality(B(3, 1, 2, 1, 2)),), B(3, 1, 2, 1, 2))
    with pytest.raises(TraceError) as err:
        verify_trace(tr)
    assert err.value.step == 0


def test_trace_json_roundtrip():
    res = ttk_to_one_bridge(3, 4, 2, 2)
    again = MoveTrace.from_json(res.trace.to_json())
    assert again == res.trace
    verify_trace(again)


def test_reverse_trace_roundtrip():
    res = ttk_to_one_bridge(3, 5, 2, 2)
    rev = reverse_trace(res.trace)
    verify_trace(rev)
    assert rev.start == res.trace.end
    assert rev.end == res.trace.start
    assert reverse_trace(rev) == res.trace


# ---------------------------------------------------------------------------
# number-theoretic lemma
# ---------------------------------------------------------------------------


def test_coprime_inverses_examples():
    assert coprime_inverses(3, 5) == (2, 2)
    assert coprime_inverses(3, 4) == (3, 1)
    with pytest.raises(DomainError):
        coprime_inverses(4, 6)
    with pytest.raises(DomainError):
        coprime_inverses(2, 5)


def test_coprime_inverses_exhaustive():
    for p in range(3, 51):
        for q in range(3, 51):
            if math.gcd(p, q) != 1:
                continue
            x, y = coprime_inverses(p, q)
            assert (p * x) % q == 1 and (q * y) % p == 1
            assert 2 * x < q or 2 * y < p


# ---------------------------------------------------------------------------
# the converter
# ---------------------------------------------------------------------------


CASES = [
    # (p, q, l, n) -> expected (omega, t, b) where pinned by the derivation
    ((2, 3, 2, 2), (2, 5, 0)),
    ((2, 5, 2, 2), (2, 7, 0)),
    ((3, 4, 2, 2), (6, 2, 3)),
    ((3, 5, 2, 2), (7, 2, 4)),
    ((5, 4, 4, 4), (4, 9, 0)),
    ((5, 3, 2, 2), (5, 3, 2)),
    ((5, 4, 2, 2), (4, 5, 2)),
    ((4, 7, 2, 2), (7, 4, 2)),
    ((7, 5, 5, 5), (5, 12, 0)),
    ((5, 6, 4, 4), (10, 4, 5)),
    ((5, 4, 3, 3), (4, 7, 0)),
    ((5, 9, 3, 3), (12, 4, 5)),
    ((5, 11, 3, 3), (13, 4, 10)),
    ((7, 8, 5, 5), (12, 6, 7)),
]


@pytest.mark.parametrize("params,expected", CASES)
def test_conversions(params, expected):
    res = ttk_to_one_bridge(*params)
    assert (res.omega, res.t, res.b) == expected
    assert 0 <= res.b <= res.omega - 2 and res.t >= 1
    verify_trace(res.trace)
    assert res.trace.end.letters == one_bridge_braid(*expected).letters
    start, end = res.trace.start, res.trace.end
    assert closure_components(start) == closure_components(end)
    if closure_components(start) == 1:
        assert same_closure_evidence(start, end).consistent()


def test_conversion_condition_labels():
    assert ttk_to_one_bridge(3, 4, 2, 2).condition == "a"
    assert ttk_to_one_bridge(5, 4, 4, 4).condition == "b"
    assert ttk_to_one_bridge(5, 3, 2, 2).condition == "c"
    assert ttk_to_one_bridge(5, 9, 3, 3).condition == "d"
    assert ttk_to_one_bridge(4, 3, 1, 5).condition == "torus"


def test_conversion_rejections():
    with pytest.raises(DomainError):
        ttk_to_one_bridge(3, 4, 3, 1)  # l = p
    with pytest.raises(UnsupportedCase):
        ttk_to_one_bridge(5, 7, 3, 4)  # matches no condition
    with pytest.raises(DomainError):
        ttk_to_one_bridge(4, 2, 2, 2)  # condition (b)/(c) shape but gcd = 2
    with pytest.raises(DomainError):
        ttk_to_one_bridge(6, 3, 3, 3)  # (b) shape, gcd = 3


def test_condition_c_small_q():
    # q = 1 and q = 2 torus identifications
    res = ttk_to_one_bridge(5, 1, 2, 2)
    assert (res.omega, res.t, res.b) == (2, 3, 0)
    verify_trace(res.trace)
    res = ttk_to_one_bridge(5, 2, 2, 2)
    assert (res.omega, res.t, res.b) == (2, 7, 0)
    verify_trace(res.trace)


def test_conversion_traces_change_strands_only_at_markov_moves():
    res = ttk_to_one_bridge(5, 6, 4, 4)
    current = res.trace.start
    for mv in res.trace.steps:
        nxt = apply_move(current, mv)
        if nxt.strands != current.strands:
            assert isinstance(mv, (StabilizePos, Destabilize)) or mv.__class__.__name__ == "StabilizeNeg"
        current = nxt
