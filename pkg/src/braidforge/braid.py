"""Braid words, canonical word builders, and positive-braid genus formulas.

A braid on n strands is a word in the Artin generators sigma_1 .. sigma_{n-1}.
We store a word as a sequence of nonzero integers: letter +i is sigma_i,
letter -i is sigma_i^{-1}.

Permutation convention (used everywhere in this package):

* sigma_i induces the transposition (i, i+1);
* the permutation of a word u.v is perm(u) o perm(v), where (f o g)(x) = f(g(x)).

Under this convention the descending block pi_m = sigma_m sigma_{m-1} ... sigma_1
maps 1 -> m+1 and k -> k-1 for 2 <= k <= m+1.  Any self-consistent convention
would do; this one is pinned here and assumed by every other module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, InternalInvariantViolation, NotAKnot, NotPositiveBraid


@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group B_n: strand count plus signed letter sequence."""

    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise DomainError(f"strand count must be >= 1, got {self.strands}")
        object.__setattr__(self, "letters", tuple(self.letters))
        for pos, letter in enumerate(self.letters):
            if letter == 0 or not 1 <= abs(letter) <= self.strands - 1:
                raise DomainError(
                    f"letter {letter} at position {pos} out of range for "
                    f"{self.strands} strands"
                )

    def __len__(self):
        return len(self.letters)

    def is_positive(self) -> bool:
        return all(letter > 0 for letter in self.letters)

    def inverse_letters(self) -> tuple[int, ...]:
        """Letters of the inverse word (reversed, signs flipped)."""
        return tuple(-letter for letter in reversed(self.letters))

    def concat(self, other: BraidWord) -> BraidWord:
        if self.strands != other.strands:
            raise DomainError("cannot concatenate words on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def permutation(self) -> Permutation:
        """The underlying permutation of the braid (see module docstring)."""
        images = list(range(1, self.strands + 1))
        for letter in self.letters:
            i = abs(letter)
            images[i - 1], images[i] = images[i], images[i - 1]
        return Permutation(tuple(images))

    def to_json(self) -> dict:
        return {"strands": self.strands, "word": list(self.letters)}

    @staticmethod
    def from_json(data: dict) -> BraidWord:
        try:
            strands = int(data["strands"])
            word = [int(x) for x in data["word"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed braid JSON: {exc}") from exc
        return BraidWord(strands, tuple(word))


@dataclass(frozen=True)
class Permutation:
    """A bijection on {1..n}, stored as the tuple of images of 1..n."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise DomainError(f"images {self.images} are not a bijection on 1..{n}")

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def cycle_count(self) -> int:
        seen = [False] * len(self.images)
        cycles = 0
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cycles += 1
            x = start
            while not seen[x]:
                seen[x] = True
                x = self.images[x] - 1
        return cycles

    def is_cycle(self) -> bool:
        return self.cycle_count() == 1


def descending_block(top: int) -> tuple[int, ...]:
    """Letters of pi_top = sigma_top sigma_{top-1} ... sigma_1 (empty for top = 0)."""
    return tuple(range(top, 0, -1))


def ascending_block(top: int) -> tuple[int, ...]:
    """Letters of sigma_1 sigma_2 ... sigma_top (empty for top = 0)."""
    return tuple(range(1, top + 1))


def pi_power(m: int, s: int, n: int) -> BraidWord:
    """The word pi_m^s = (sigma_m ... sigma_1)^s on n strands."""
    if not 1 <= m <= n - 1:
        raise DomainError(f"pi_{m} needs 1 <= m <= n-1 = {n - 1}")
    if s < 0:
        raise DomainError(f"exponent must be >= 0, got {s}")
    return BraidWord(n, descending_block(m) * s)


def big_pi(m: int, n: int) -> BraidWord:
    """The half-twist word Pi_m = pi_1 pi_2 ... pi_m on n strands."""
    if not 1 <= m <= n - 1:
        raise DomainError(f"Pi_{m} needs 1 <= m <= n-1 = {n - 1}")
    letters: list[int] = []
    for k in range(1, m + 1):
        letters.extend(descending_block(k))
    return BraidWord(n, tuple(letters))


def one_bridge_braid(omega: int, t: int, b: int) -> BraidWord:
    """The 1-bridge braid word (sigma_b ... sigma_1)(sigma_{omega-1} ... sigma_1)^t.

    Lives on omega strands; b = 0 degenerates to the pure torus word.
    """
    if omega < 2:
        raise DomainError(f"need omega >= 2, got omega={omega}")
    if t < 1:
        raise DomainError(f"need t >= 1, got t={t}")
    if not 0 <= b <= omega - 2:
        raise DomainError(f"need 0 <= b <= omega-2 = {omega - 2}, got b={b}")
    return BraidWord(omega, descending_block(b) + descending_block(omega - 1) * t)


def twisted_torus_braid(p: int, q: int, l: int, m: int) -> BraidWord:
    """The twisted torus braid pi_{l-1}^{lm} pi_{p-1}^q, built on p strands.

    The p-strand form is used (rather than a q-strand form) since l < p always
    holds; the closures agree by the T(p,q) = T(q,p) symmetry.  The two-strand
    case l = p = 2 is additionally allowed: there the twist block degenerates
    to a power of sigma_1 and the formula stays meaningful.
    """
    if q < 1 or m < 1 or l < 1:
        raise DomainError(f"need q, l, m >= 1, got q={q}, l={l}, m={m}")
    if l >= p and not (l == 2 and p == 2):
        raise DomainError(f"need 0 < l < p, got l={l}, p={p}")
    return BraidWord(p, descending_block(l - 1) * (l * m) + descending_block(p - 1) * q)


def closure_components(w: BraidWord) -> int:
    """Number of link components of the braid closure (cycles of the permutation)."""
    return w.permutation().cycle_count()


@dataclass(frozen=True)
class GenusResult:
    genus: int
    slope_threshold: int


def positive_closure_genus(w: BraidWord) -> GenusResult:
    """Seifert genus of a positive braid knot closure, and the slope 2g - 1.

    Seifert's algorithm on a positive diagram gives a minimal surface, so
    genus = (#crossings - #strands + 1)/2.  For the 1-bridge braid B(w,t,b)
    the threshold 2g - 1 equals wt + b - t - w.
    """
    if not w.is_positive():
        raise NotPositiveBraid("genus formula requires a positive braid word")
    if closure_components(w) != 1:
        raise NotAKnot(
            f"closure has {closure_components(w)} components; genus requires a knot"
        )
    numerator = len(w.letters) - w.strands + 1
    if numerator % 2 != 0:
        raise InternalInvariantViolation(
            f"odd crossing/strand parity {numerator} for a knot closure"
        )
    genus = numerator // 2
    return GenusResult(genus=genus, slope_threshold=2 * genus - 1)


def lspace_ttk_condition(p: int, k: int, l: int, m: int) -> bool:
    """Whether T(p, kp+-1) twisted on l strands m full times is an L-space knot.

    True iff l = p-1, or m = 1 and l = 2, or m = 1 and l = p-2.
    """
    if min(p, k, l, m) < 1:
        raise DomainError("parameters must be positive")
    if not 0 < l < p:
        raise DomainError(f"need 0 < l < p, got l={l}, p={p}")
    return l == p - 1 or (m == 1 and l == 2) or (m == 1 and l == p - 2)


def free_reduce(letters) -> tuple[int, ...]:
    """Freely reduce a letter sequence: cancel adjacent sigma_i sigma_i^{-1} pairs."""
    out: list[int] = []
    for letter in letters:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)
