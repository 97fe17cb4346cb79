"""Braid word problem, Markov/relation moves with checkable traces, and the
constructive twisted-torus-to-1-bridge converter.

Word problem
------------
Equality in B_n is decided through the left Garside normal form
Delta^d . x_1 ... x_m: a power of the half twist followed by a left-weighted
sequence of permutation braids.  Two words are equal iff their normal forms
coincide.  Canonical factors are stored as permutations (tuples of images);
no tables are precomputed, so the routine works for any strand count.

Traces
------
A MoveTrace records how one braid word is carried to another.  Elementary
relation moves (braid relation, far commutation, free cancellation/insertion)
are available, but traces may also take coarse steps: a CoarseEquality step
replaces the current word by any word equal to it in the braid group, checked
by the word-problem routine.  Conjugation and (de)stabilization, the moves
that actually change the closure presentation, always remain explicit.  This
matches the granularity of the derivations being certified, which freely
interleave in-group identities with Markov moves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .braid import (
    BraidWord,
    ascending_block,
    big_pi,
    descending_block,
    free_reduce,
    one_bridge_braid,
)
from .errors import (
    DomainError,
    InternalInvariantViolation,
    MoveError,
    TraceError,
    UnsupportedCase,
)

# ---------------------------------------------------------------------------
# Garside normal form
# ---------------------------------------------------------------------------


def _perm_id(n):
    return tuple(range(1, n + 1))


def _perm_w0(n):
    return tuple(range(n, 0, -1))


def _perm_transposition(i, n):
    images = list(range(1, n + 1))
    images[i - 1], images[i] = images[i], images[i - 1]
    return tuple(images)


def _compose(f, g):
    """(f o g)(x) = f(g(x)); matches the braid permutation convention."""
    return tuple(f[g[i] - 1] for i in range(len(g)))


def _right_descents(x):
    return {i for i in range(1, len(x)) if x[i - 1] > x[i]}


def _left_descents(x):
    pos = [0] * (len(x) + 1)
    for idx, val in enumerate(x):
        pos[val] = idx
    return {i for i in range(1, len(x)) if pos[i] > pos[i + 1]}


def garside_normal_form(w: BraidWord):
    """Left Garside normal form of a braid word.

    Returns (strands, delta_power, factors) where factors is a tuple of
    permutations (image tuples), none equal to the identity or the half
    twist, and each adjacent pair is left-weighted.
    """
    n = w.strands
    w0 = _perm_w0(n)
    ident = _perm_id(n)
    if n == 1:
        return (1, 0, ())

    factors = []
    dpows = []
    for letter in w.letters:
        tau = _perm_transposition(abs(letter), n)
        if letter > 0:
            factors.append(tau)
            dpows.append(0)
        else:
            # sigma_i^{-1} = Delta^{-1} (Delta sigma_i^{-1}); the bracketed
            # braid is simple with permutation w0 . tau.
            factors.append(_compose(w0, tau))
            dpows.append(-1)

    # Move all Delta powers to the front; conjugation by Delta acts on a
    # simple factor as x -> w0 x w0 (an involution on permutations).
    dp = 0
    for idx in range(len(factors) - 1, -1, -1):
        if dp % 2:
            factors[idx] = _compose(w0, _compose(factors[idx], w0))
        dp += dpows[idx]
    delta = dp

    factors = [f for f in factors if f != ident]

    # Left-weight the sequence: slide generators across adjacent pairs until
    # every pair (x, y) satisfies L(y) subset-of R(x).  Each slide moves one
    # crossing leftward, so the sweep terminates.
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            x, y = factors[i], factors[i + 1]
            moved = False
            while True:
                candidates = _left_descents(y) - _right_descents(x)
                if not candidates:
                    break
                s = candidates.pop()
                tau = _perm_transposition(s, n)
                x = _compose(x, tau)
                y = _compose(tau, y)
                moved = True
            if moved:
                factors[i], factors[i + 1] = x, y
                changed = True

    while factors and factors[0] == w0:
        delta += 1
        factors.pop(0)
    while factors and factors[-1] == ident:
        factors.pop()
    if ident in factors or w0 in factors:
        raise InternalInvariantViolation("normal form retained a trivial factor")
    return (n, delta, tuple(factors))


def word_equal(u: BraidWord, v: BraidWord) -> bool:
    """Decide whether two words represent the same element of B_n."""
    if u.strands != v.strands:
        raise DomainError(
            f"strand counts differ: {u.strands} vs {v.strands}"
        )
    if sum(1 if x > 0 else -1 for x in u.letters) != sum(
        1 if x > 0 else -1 for x in v.letters
    ):
        return False  # exponent sum is a braid invariant
    return garside_normal_form(u) == garside_normal_form(v)


# ---------------------------------------------------------------------------
# Moves and traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BraidRelationAt:
    """Swap sigma_i sigma_{i+1} sigma_i <-> sigma_{i+1} sigma_i sigma_{i+1} at pos."""

    pos: int


@dataclass(frozen=True)
class FarCommuteAt:
    """Swap adjacent letters with |i - j| >= 2 at pos."""

    pos: int


@dataclass(frozen=True)
class FreeCancelAt:
    """Delete an adjacent inverse pair at pos."""

    pos: int


@dataclass(frozen=True)
class FreeInsertAt:
    """Insert the pair (letter, -letter) at pos."""

    pos: int
    letter: int


@dataclass(frozen=True)
class ConjugateBy:
    """Replace w by g w g^{-1}, then freely reduce."""

    word: tuple[int, ...]


@dataclass(frozen=True)
class StabilizePos:
    """Append sigma_n, moving from n to n+1 strands."""


@dataclass(frozen=True)
class StabilizeNeg:
    """Append sigma_n^{-1}, moving from n to n+1 strands."""


@dataclass(frozen=True)
class Destabilize:
    """Remove a final sigma_{n-1}^{+-1} occurring exactly once; n -> n-1 strands."""


@dataclass(frozen=True)
class CoarseEquality:
    """Replace the word by target, justified by the word problem (same strands)."""

    target: BraidWord


Move = Union[
    BraidRelationAt,
    FarCommuteAt,
    FreeCancelAt,
    FreeInsertAt,
    ConjugateBy,
    StabilizePos,
    StabilizeNeg,
    Destabilize,
    CoarseEquality,
]


def apply_move(w: BraidWord, mv: Move) -> BraidWord:
    """Apply one move, raising MoveError when it is not applicable."""
    letters = w.letters
    n = w.strands

    if isinstance(mv, BraidRelationAt):
        p = mv.pos
        if not 0 <= p <= len(letters) - 3:
            raise MoveError("braid relation needs three letters", p)
        a, b, c = letters[p : p + 3]
        if a != c or abs(abs(a) - abs(b)) != 1 or (a > 0) != (b > 0):
            raise MoveError(f"no braid relation at ({a},{b},{c})", p)
        return BraidWord(n, letters[:p] + (b, a, b) + letters[p + 3 :])

    if isinstance(mv, FarCommuteAt):
        p = mv.pos
        if not 0 <= p <= len(letters) - 2:
            raise MoveError("far commutation needs two letters", p)
        a, b = letters[p : p + 2]
        if abs(abs(a) - abs(b)) < 2:
            raise MoveError(f"letters {a},{b} are not far commuting", p)
        return BraidWord(n, letters[:p] + (b, a) + letters[p + 2 :])

    if isinstance(mv, FreeCancelAt):
        p = mv.pos
        if not 0 <= p <= len(letters) - 2 or letters[p] != -letters[p + 1]:
            raise MoveError("no inverse pair to cancel", p)
        return BraidWord(n, letters[:p] + letters[p + 2 :])

    if isinstance(mv, FreeInsertAt):
        p = mv.pos
        if not 0 <= p <= len(letters):
            raise MoveError("insert position out of range", p)
        if not 1 <= abs(mv.letter) <= n - 1:
            raise MoveError(f"letter {mv.letter} out of range", p)
        return BraidWord(n, letters[:p] + (mv.letter, -mv.letter) + letters[p:])

    if isinstance(mv, ConjugateBy):
        for g in mv.word:
            if not 1 <= abs(g) <= n - 1:
                raise MoveError(f"conjugator letter {g} out of range")
        inv = tuple(-g for g in reversed(mv.word))
        return BraidWord(n, free_reduce(mv.word + letters + inv))

    if isinstance(mv, StabilizePos):
        return BraidWord(n + 1, letters + (n,))

    if isinstance(mv, StabilizeNeg):
        return BraidWord(n + 1, letters + (-n,))

    if isinstance(mv, Destabilize):
        if n < 2:
            raise MoveError("cannot destabilize below one strand")
        if not letters or abs(letters[-1]) != n - 1:
            raise MoveError(f"last letter is not sigma_{n - 1}")
        if sum(1 for x in letters if abs(x) == n - 1) != 1:
            raise MoveError(f"sigma_{n - 1} does not occur exactly once")
        return BraidWord(n - 1, letters[:-1])

    if isinstance(mv, CoarseEquality):
        if mv.target.strands != n:
            raise MoveError("coarse step must preserve the strand count")
        if not word_equal(w, mv.target):
            raise MoveError("coarse step target is not equal in the braid group")
        return mv.target

    raise MoveError(f"unknown move {mv!r}")


@dataclass(frozen=True)
class MoveTrace:
    """A checkable path of moves from one braid word to another."""

    start: BraidWord
    steps: tuple[Move, ...]
    end: BraidWord

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "steps": [_move_to_json(mv) for mv in self.steps],
            "end": self.end.to_json(),
        }

    @staticmethod
    def from_json(data: dict) -> MoveTrace:
        try:
            start = BraidWord.from_json(data["start"])
            end = BraidWord.from_json(data["end"])
            steps = tuple(_move_from_json(item) for item in data["steps"])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed trace JSON: {exc}") from exc
        return MoveTrace(start, steps, end)


def _move_to_json(mv: Move) -> dict:
    if isinstance(mv, BraidRelationAt):
        return {"kind": "braid_relation", "pos": mv.pos}
    if isinstance(mv, FarCommuteAt):
        return {"kind": "far_commute", "pos": mv.pos}
    if isinstance(mv, FreeCancelAt):
        return {"kind": "free_cancel", "pos": mv.pos}
    if isinstance(mv, FreeInsertAt):
        return {"kind": "free_insert", "pos": mv.pos, "letter": mv.letter}
    if isinstance(mv, ConjugateBy):
        return {"kind": "conjugate", "word": list(mv.word)}
    if isinstance(mv, StabilizePos):
        return {"kind": "stabilize_pos"}
    if isinstance(mv, StabilizeNeg):
        return {"kind": "stabilize_neg"}
    if isinstance(mv, Destabilize):
        return {"kind": "destabilize"}
    if isinstance(mv, CoarseEquality):
        return {"kind": "coarse_equality", "target": mv.target.to_json()}
    raise DomainError(f"unknown move {mv!r}")


def _move_from_json(data: dict) -> Move:
    try:
        kind = data["kind"]
        if kind == "braid_relation":
            return BraidRelationAt(int(data["pos"]))
        if kind == "far_commute":
            return FarCommuteAt(int(data["pos"]))
        if kind == "free_cancel":
            return FreeCancelAt(int(data["pos"]))
        if kind == "free_insert":
            return FreeInsertAt(int(data["pos"]), int(data["letter"]))
        if kind == "conjugate":
            return ConjugateBy(tuple(int(x) for x in data["word"]))
        if kind == "stabilize_pos":
            return StabilizePos()
        if kind == "stabilize_neg":
            return StabilizeNeg()
        if kind == "destabilize":
            return Destabilize()
        if kind == "coarse_equality":
            return CoarseEquality(BraidWord.from_json(data["target"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed move JSON: {exc}") from exc
    raise DomainError(f"unknown move kind {data.get('kind')!r}")


def verify_trace(tr: MoveTrace) -> None:
    """Replay a trace; raises TraceError at the first failing step.

    Acceptance requires every step to apply and the final word to match
    tr.end letter for letter (same strand count).
    """
    current = tr.start
    for idx, mv in enumerate(tr.steps):
        try:
            current = apply_move(current, mv)
        except MoveError as exc:
            raise TraceError(idx, str(exc)) from exc
    if current.strands != tr.end.strands or current.letters != tr.end.letters:
        raise TraceError(
            len(tr.steps),
            f"replay ended at {current.letters} on {current.strands} strands, "
            f"expected {tr.end.letters} on {tr.end.strands}",
        )


def reverse_trace(tr: MoveTrace) -> MoveTrace:
    """The step-by-step reversal of a trace (replays the original to build it)."""
    current = tr.start
    reversed_steps: list[Move] = []
    for mv in tr.steps:
        nxt = apply_move(current, mv)
        if isinstance(mv, (BraidRelationAt, FarCommuteAt)):
            inverse: Move = mv
        elif isinstance(mv, FreeCancelAt):
            inverse = FreeInsertAt(mv.pos, current.letters[mv.pos])
        elif isinstance(mv, FreeInsertAt):
            inverse = FreeCancelAt(mv.pos)
        elif isinstance(mv, ConjugateBy):
            inverse = ConjugateBy(tuple(-g for g in reversed(mv.word)))
        elif isinstance(mv, (StabilizePos, StabilizeNeg)):
            inverse = Destabilize()
        elif isinstance(mv, Destabilize):
            inverse = (
                StabilizePos() if current.letters[-1] > 0 else StabilizeNeg()
            )
        elif isinstance(mv, CoarseEquality):
            inverse = CoarseEquality(current)
        else:  # pragma: no cover
            raise InternalInvariantViolation(f"unknown move {mv!r}")
        if apply_move(nxt, inverse).letters != current.letters:
            raise InternalInvariantViolation(
                f"move {mv!r} is not cleanly reversible here"
            )
        reversed_steps.append(inverse)
        current = nxt
    if current.letters != tr.end.letters or current.strands != tr.end.strands:
        raise InternalInvariantViolation("trace does not reach its own end word")
    return MoveTrace(tr.end, tuple(reversed(reversed_steps)), tr.start)


def concat_traces(first: MoveTrace, second: MoveTrace) -> MoveTrace:
    if (
        first.end.strands != second.start.strands
        or first.end.letters != second.start.letters
    ):
        raise InternalInvariantViolation("traces do not concatenate")
    return MoveTrace(first.start, first.steps + second.steps, second.end)


# ---------------------------------------------------------------------------
# Number-theoretic lemma
# ---------------------------------------------------------------------------


def coprime_inverses(p: int, q: int) -> tuple[int, int]:
    """x = p^{-1} mod q and y = q^{-1} mod p, for coprime p, q >= 3.

    The returned pair always satisfies x < q/2 or y < p/2.
    """
    if p < 3 or q < 3:
        raise DomainError(f"need p, q >= 3, got p={p}, q={q}")
    if math.gcd(p, q) != 1:
        raise DomainError(f"p={p} and q={q} are not coprime")
    x = pow(p, -1, q)
    y = pow(q, -1, p)
    if not (2 * x < q or 2 * y < p):
        raise InternalInvariantViolation(
            f"inverse bound failed for p={p}, q={q}: x={x}, y={y}"
        )
    return x, y


# ---------------------------------------------------------------------------
# Trace builder (internal)
# ---------------------------------------------------------------------------


class _TraceBuilder:
    """Accumulates moves while tracking the current word.

    Every coarse step is checked with the word problem at generation time, so
    converter bugs surface immediately instead of producing bad traces.
    """

    def __init__(self, start: BraidWord):
        self.start = start
        self.word = start
        self.steps: list[Move] = []

    def _push(self, mv: Move):
        self.word = apply_move(self.word, mv)
        self.steps.append(mv)

    def coarse(self, target_letters):
        target = BraidWord(self.word.strands, tuple(target_letters))
        if target.letters == self.word.letters:
            return
        self._push(CoarseEquality(target))

    def rotate(self, cut: int):
        """Cyclically move the first `cut` letters to the back (a conjugation)."""
        if cut == 0 or cut == len(self.word.letters):
            return
        expected = self.word.letters[cut:] + self.word.letters[:cut]
        prefix = self.word.letters[:cut]
        self._push(ConjugateBy(tuple(-g for g in reversed(prefix))))
        if self.word.letters != expected:
            raise InternalInvariantViolation("rotation produced unexpected word")

    def conj(self, g_letters):
        self._push(ConjugateBy(tuple(g_letters)))

    def destab(self):
        self._push(Destabilize())

    def trace(self) -> MoveTrace:
        return MoveTrace(self.start, tuple(self.steps), self.word)


def _tower_round(builder: _TraceBuilder, u_len: int, m: int, s: int, tail):
    """One destabilization round: u pi_m^s tail  ~>  u pi_{m-1}^s asc(s-1) tail.

    Uses pi_m^s = pi_{m-1}^{s-1} . (sigma_m pi_{m-1}) . (sigma_1..sigma_{s-1}),
    rotates sigma_m to the end, destabilizes, and rotates back.
    """
    head = builder.word.letters[:u_len]
    builder.coarse(
        head
        + descending_block(m - 1) * (s - 1)
        + (m,)
        + descending_block(m - 1)
        + ascending_block(s - 1)
        + tail
    )
    builder.rotate(u_len + (s - 1) * (m - 1) + 1)
    builder.destab()
    cut = len(builder.word.letters) - (u_len + (s - 1) * (m - 1))
    builder.rotate(cut)


def _transpose_descend(builder: _TraceBuilder, u_letters, l: int, big: int, small: int):
    """Destabilize u pi_{big-1}^{small} on big strands down to small strands.

    Ends at flip_l(u) pi_{small-1}^{big} (for small >= 3), where flip_l sends
    sigma_i to sigma_{l-i}; for small <= 2 the word collapses to sigma_1 powers.
    The closure is unchanged throughout: this is the braid-level form of the
    torus-knot transposition symmetry.
    """
    u_len = len(u_letters)
    s = small
    for m in range(big - 1, max(s, 2) - 1, -1):
        k = big - 1 - m
        _tower_round(builder, u_len, m, s, ascending_block(s - 1) * k)
    if s < 3:
        return
    # u pi_{s-1}^s asc^{big-s} -> u asc^{big} (full twist), then flip and shift.
    builder.coarse(u_letters + ascending_block(s - 1) * big)
    builder.conj(big_pi(s - 1, s).letters)
    flipped = tuple(s - i for i in u_letters)
    builder.coarse(flipped + descending_block(s - 1) * big)
    if l < s:
        builder.conj(descending_block(s - 1) * (s - l))
        shifted = tuple(i - (s - l) for i in flipped)
        builder.coarse(shifted + descending_block(s - 1) * big)


def chain_t_le_b(omega: int, t: int, b: int) -> MoveTrace:
    """Markov chain from B(omega,t,b) with t <= b down to the twisted-torus
    word pi_{t-1}^{omega-b-1} pi_t^{b+1} on t+1 strands."""
    if not (1 <= t <= b <= omega - 2):
        raise DomainError(f"chain needs 1 <= t <= b <= omega-2, got {(omega, t, b)}")
    builder = _TraceBuilder(one_bridge_braid(omega, t, b))
    # Phase 1: melt the twist tower from omega-1 down to b.
    for m in range(omega - 1, b, -1):
        k = omega - 1 - m
        _tower_round(builder, b, m, t, ascending_block(t - 1) * k)
    # Now pi_b^{t+1} asc(t)^0 asc(t-1)^{omega-b-1} on b+1 strands.
    # Phase 2: melt the bridge tower from b down to t.
    for j in range(b, t, -1):
        tail = ascending_block(t) * (b - j) + ascending_block(t - 1) * (omega - b - 1)
        _tower_round(builder, 0, j, t + 1, tail)
    if t >= 2:
        # Phase 3: conjugate by the half twist and regroup.
        builder.conj(big_pi(t, t + 1).letters)
        mid_block = tuple(range(t, 1, -1))
        builder.coarse(
            descending_block(t) * (b + 1) + mid_block * (omega - b - 1)
        )
        builder.coarse(
            descending_block(t) * b
            + descending_block(t - 1) * (omega - b - 1)
            + descending_block(t)
        )
        builder.rotate(t * b)
    final = descending_block(t - 1) * (omega - b - 1) + descending_block(t) * (b + 1)
    if builder.word.letters != final:
        raise InternalInvariantViolation("t<=b chain ended off target")
    return builder.trace()


def _y_chain(builder: _TraceBuilder, p: int, q: int, y: int):
    """Carry sigma_1^2 pi_{p-1}^q to pi_2 pi_{p-1}^q on p strands.

    Walks sigma_1 sigma_{i_s} through the torus tower along the index sequence
    i_s = 1 + s q (mod p), which stays in {3..p-1} until it lands on 2; this
    needs y = q^{-1} mod p < p/2.
    """
    tower = descending_block(p - 1) * q
    for s in range(y):
        i_next = (s + 1) * q % p + 1
        if s + 1 < y and not 3 <= i_next <= p - 1:
            raise InternalInvariantViolation(
                f"index chain left the safe range at step {s + 1}: {i_next}"
            )
        builder.coarse((1,) + tower + (i_next,))
        builder.rotate(1 + len(tower))
        if s + 1 < y:
            builder.coarse((1, i_next) + tower)
    if builder.word.letters != (2, 1) + tower:
        raise InternalInvariantViolation("index chain ended off target")


def _wrap_dance(builder: _TraceBuilder, p: int, strands: int, tower):
    """Carry pi_{p-3}^{p-2} X to pi_{p-2}^{p-3} X by pushing blocks around X.

    X is a torus tower on `strands` strands; pushing a letter through it
    shifts its index by the tower exponent modulo the strand count.
    """
    n = strands
    shift = (len(tower) // (n - 1)) % n
    for i in range(p - 3):
        prefix = descending_block(p - 2) * i + descending_block(p - 3) * (p - 3 - i)
        block = list(range(p - 3 - i, 0, -1))
        target = list(range(p - 2 - i, 1, -1))
        while True:
            block = [(j - 1 + shift) % n + 1 for j in block]
            if any(not 1 <= j <= n - 1 for j in block):
                raise InternalInvariantViolation("pushed block left generator range")
            builder.coarse(prefix + tower + tuple(block))
            builder.rotate(len(prefix) + len(tower))
            if block == target:
                break
            builder.coarse(prefix + tuple(block) + tower)
        nxt = (
            descending_block(p - 2) * (i + 1)
            + descending_block(p - 3) * (p - 4 - i)
            + descending_block(p - 4 - i)
            + tower
        )
        builder.coarse(nxt)
    if builder.word.letters != descending_block(p - 2) * (p - 3) + tower:
        raise InternalInvariantViolation("wrap dance ended off target")


# ---------------------------------------------------------------------------
# The Theorem 1.1 converter
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConversionResult:
    """Output of the twisted-torus-to-1-bridge conversion."""

    omega: int
    t: int
    b: int
    trace: MoveTrace
    condition: str

    def __post_init__(self):
        if not (self.t >= 1 and 0 <= self.b <= self.omega - 2):
            raise InternalInvariantViolation(
                f"invalid target parameters ({self.omega}, {self.t}, {self.b})"
            )


def _ttk_input_word(p: int, q: int, l: int, n: int) -> BraidWord:
    return BraidWord(p, descending_block(l - 1) * n + descending_block(p - 1) * q)


def _finish(input_word, builder_or_trace, omega, t, b, condition) -> ConversionResult:
    trace = (
        builder_or_trace.trace()
        if isinstance(builder_or_trace, _TraceBuilder)
        else builder_or_trace
    )
    target = one_bridge_braid(omega, t, b)
    if trace.end.letters != target.letters or trace.end.strands != target.strands:
        raise InternalInvariantViolation(
            f"conversion ended at {trace.end.letters}, expected B({omega},{t},{b})"
        )
    if trace.start.letters != input_word.letters:
        raise InternalInvariantViolation("conversion trace starts off the input")
    return ConversionResult(omega, t, b, trace, condition)


def ttk_to_one_bridge(p: int, q: int, l: int, n: int) -> ConversionResult:
    """Convert the twisted torus braid pi_{l-1}^n pi_{p-1}^q to 1-bridge form.

    Supported parameter families (checked in this order):

    * l = 1 (or p = 2): degenerate torus words, returned as-is;
    * l = p-1 and q >= p: stabilization chain up to B(n+q, p-1, q-1);
    * q = l dividing n, gcd(p, q) = 1: torus knot B(q, p+n, 0);
    * l = n = 2, gcd(p, q) = 1: the modular-inverse chain, routing through
      the transposed q-strand word when the inverse bound requires it;
    * l = n = p-2 and q = kp+-1: the block-pushing chains, ending in a
      stabilization chain (or directly in a torus word when q = p-1).

    Anything else raises UnsupportedCase; gcd failures raise DomainError.
    """
    if p < 2 or q < 1 or n < 1 or l < 1:
        raise DomainError(f"need p >= 2 and q, l, n >= 1, got {(p, q, l, n)}")
    if l > p or (l == p and p != 2):
        raise DomainError(f"need l < p (or l = p = 2), got l={l}, p={p}")

    if l == 1 or p == 2:
        # pi_0 is empty / both blocks are sigma_1 powers: already 1-bridge.
        if p == 2:
            start = BraidWord(2, (1,) * (n + q)) if l == 2 else _ttk_input_word(p, q, l, n)
            omega, t = 2, (n + q if l == 2 else q)
        else:
            start = _ttk_input_word(p, q, l, n)
            omega, t = p, q
        return _finish(start, MoveTrace(start, (), start), omega, t, 0, "torus")

    start = _ttk_input_word(p, q, l, n)

    if l == p - 1 and q >= p:
        chain = reverse_trace(chain_t_le_b(n + q, p - 1, q - 1))
        return _finish(start, chain, n + q, p - 1, q - 1, "a")

    if l == q and n % q == 0:
        if math.gcd(p, q) != 1:
            raise DomainError(f"condition (b) needs gcd(p,q)=1, got gcd={math.gcd(p, q)}")
        builder = _TraceBuilder(start)
        _transpose_descend(builder, descending_block(q - 1) * n, q, p, q)
        builder.coarse(descending_block(q - 1) * (n + p))
        return _finish(start, builder, q, p + n, 0, "b")

    if l == 2 and n == 2:
        if math.gcd(p, q) != 1:
            raise DomainError(f"condition (c) needs gcd(p,q)=1, got gcd={math.gcd(p, q)}")
        if q == 1:
            builder = _TraceBuilder(start)
            _transpose_descend(builder, (1, 1), 2, p, 1)
            return _finish(start, builder, 2, 3, 0, "c")
        if q == 2:
            builder = _TraceBuilder(start)
            _transpose_descend(builder, (1, 1), 2, p, 2)
            return _finish(start, builder, 2, p + 2, 0, "c")
        x, y = coprime_inverses(p, q)
        if 2 * y < p:
            builder = _TraceBuilder(start)
            _y_chain(builder, p, q, y)
            if p == 3:
                return _finish(start, builder, 3, q + 1, 0, "c")
            return _finish(start, builder, p, q, 2, "c")
        # Transpose to the q-strand word, where the inverse bound holds.
        if p > q:
            builder = _TraceBuilder(start)
            _transpose_descend(builder, (1, 1), 2, p, q)
        else:
            down = _TraceBuilder(BraidWord(q, (1, 1) + descending_block(q - 1) * p))
            _transpose_descend(down, (1, 1), 2, q, p)
            builder = _TraceBuilder(start)
            for mv in reverse_trace(down.trace()).steps:
                builder._push(mv)
        _y_chain(builder, q, p, x)
        if q == 3:
            return _finish(start, builder, 3, p + 1, 0, "c")
        return _finish(start, builder, q, p, 2, "c")

    if l == n == p - 2 and (q % p == 1 or q % p == p - 1) and q > 1:
        if q % p == 1:
            builder = _TraceBuilder(start)
            _wrap_dance(builder, p, p, descending_block(p - 1) * q)
            chain = reverse_trace(chain_t_le_b(p - 3 + q, p - 1, q - 1))
            trace = concat_traces(builder.trace(), chain)
            return _finish(start, trace, p - 3 + q, p - 1, q - 1, "d")
        k = (q + 1) // p
        big = k * p - 1
        u_flipped = ascending_block(p - 3) * (p - 2)
        if k == 1:
            builder = _TraceBuilder(start)
            _transpose_descend(builder, descending_block(p - 3) * (p - 2), p - 2, p, p - 1)
        else:
            down = _TraceBuilder(BraidWord(big, u_flipped + descending_block(big - 1) * p))
            _transpose_descend(down, u_flipped, p - 2, big, p)
            builder = _TraceBuilder(start)
            for mv in reverse_trace(down.trace()).steps:
                builder._push(mv)
        tower = descending_block(builder.word.strands - 1) * p
        builder.coarse(descending_block(p - 3) * (p - 2) + tower)
        _wrap_dance(builder, p, builder.word.strands, tower)
        if k == 1:
            # pi_{p-2}^{p-3} pi_{p-2}^p is already the torus word B(p-1, 2p-3, 0).
            return _finish(start, builder, p - 1, 2 * p - 3, 0, "d")
        u = descending_block(p - 2) * (p - 3)
        for m in range(big - 1, p - 1, -1):
            _tower_round(builder, len(u), m, p, ascending_block(p - 1) * (big - 1 - m))
        builder.coarse(
            descending_block(p - 2) * (2 * p - 4)
            + descending_block(p - 1) * ((k - 1) * p + 1)
        )
        chain = reverse_trace(
            chain_t_le_b((k + 1) * p - 3, p - 1, (k - 1) * p)
        )
        trace = concat_traces(builder.trace(), chain)
        return _finish(start, trace, (k + 1) * p - 3, p - 1, (k - 1) * p, "d")

    raise UnsupportedCase(
        f"(p,q,l,n)=({p},{q},{l},{n}) matches no supported conversion condition"
    )
