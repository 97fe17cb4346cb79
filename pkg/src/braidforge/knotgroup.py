"""Knot group presentations of 1-bridge braid closures and their satellites.

The closure of the 1-bridge braid B(omega, t, b) decomposes as a boundary arc
(winding around the solid torus) plus a bridge inside one meridian disk.  The
knot group is generated by two loops x, y dual to the two halves of that disk,
with a single relator obtained by reading the boundary arc.

The arc traversal is simulated combinatorially (`gamma_word`).  The geometric
conventions the construction depends on (traversal direction, disk sides, and
the indexing of the longitude/meridian crossings) are not forced by any one
formula; the concrete choices below are pinned by an oracle battery: letter
counts, suffix coherence, the congruence between longitude and meridian words,
abelianization, and agreement of the Fox-calculus Alexander polynomial with
the reduced-Burau one computed from the braid.  `one_bridge_presentation`
re-runs the cheap oracles on every call and raises rather than returning an
unvalidated presentation.

Traversal rules used by the simulation (one full circuit of the solid torus
per step, entering just after the bridge):

* each of the t twist blocks advances the strand position by one, cyclically;
* arriving at a position in {1..b} crosses the x-side of the disk: record x
  and shift the position up by one;
* arriving in {b+2..omega} crosses the y-side: record y, position unchanged;
* arriving at b+1 is the far end of the bridge: the arc ends.

The meridian word h_j is the tail recorded after the circuit arriving at disk
position j; the longitude words are g_i = h_{(i-1 mod omega)+1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .braid import closure_components, one_bridge_braid
from .errors import (
    DomainError,
    InternalInvariantViolation,
    NotAKnot,
    UnsupportedPresentation,
)
from .invariants import LaurentPoly, laurent_det

Letter = tuple[str, int]


def _reduce_letters(letters) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for gen, exp in letters:
        if exp not in (1, -1):
            raise DomainError(f"letter exponent must be +-1, got {exp}")
        if out and out[-1][0] == gen and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class GroupWord:
    """A freely reduced word in named generators."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "letters", tuple((str(g), int(e)) for g, e in self.letters)
        )
        if self.letters != _reduce_letters(self.letters):
            raise DomainError("GroupWord letters must be freely reduced")

    @staticmethod
    def reduced(letters) -> GroupWord:
        return GroupWord(_reduce_letters(letters))

    @staticmethod
    def identity() -> GroupWord:
        return GroupWord(())

    @staticmethod
    def gen(name: str, exp: int = 1) -> GroupWord:
        return GroupWord(((name, exp),))

    def __mul__(self, other: GroupWord) -> GroupWord:
        return GroupWord.reduced(self.letters + other.letters)

    def inverse(self) -> GroupWord:
        return GroupWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def conjugated_by(self, g: GroupWord) -> GroupWord:
        """g . self . g^{-1}."""
        return g * self * g.inverse()

    def power(self, n: int) -> GroupWord:
        base = self if n >= 0 else self.inverse()
        out = GroupWord.identity()
        for _ in range(abs(n)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def generators_used(self) -> set[str]:
        return {g for g, _ in self.letters}

    def exponent_sum(self, gen: str) -> int:
        return sum(e for g, e in self.letters if g == gen)

    def rename(self, mapping: dict[str, str]) -> GroupWord:
        return GroupWord(tuple((mapping.get(g, g), e) for g, e in self.letters))

    def __len__(self):
        return len(self.letters)

    def to_json(self) -> list:
        return [[g, e] for g, e in self.letters]

    @staticmethod
    def from_json(data) -> GroupWord:
        try:
            return GroupWord.reduced(tuple((str(g), int(e)) for g, e in data))
        except (TypeError, ValueError) as exc:
            raise DomainError(f"malformed group word JSON: {exc}") from exc


@dataclass(frozen=True)
class Presentation:
    """A finitely presented group with distinguished peripheral words."""

    generators: tuple[str, ...]
    relators: tuple[GroupWord, ...]
    peripherals: tuple[tuple[str, GroupWord], ...]

    def __post_init__(self):
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise DomainError("duplicate generator names")
        for rel in self.relators:
            if not rel.generators_used() <= gens:
                raise DomainError(f"relator {rel} uses undeclared generators")
        for _, word in self.peripherals:
            if not word.generators_used() <= gens:
                raise DomainError(f"peripheral {word} uses undeclared generators")

    def peripheral(self, name: str) -> GroupWord:
        for key, word in self.peripherals:
            if key == name:
                return word
        raise DomainError(f"presentation has no peripheral {name!r}")

    def has_peripheral(self, name: str) -> bool:
        return any(key == name for key, _ in self.peripherals)

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [r.to_json() for r in self.relators],
            "peripherals": {k: w.to_json() for k, w in self.peripherals},
        }

    @staticmethod
    def from_json(data: dict) -> Presentation:
        try:
            gens = tuple(str(g) for g in data["generators"])
            rels = tuple(GroupWord.from_json(r) for r in data["relators"])
            periph = tuple(
                (str(k), GroupWord.from_json(w))
                for k, w in data.get("peripherals", {}).items()
            )
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed presentation JSON: {exc}") from exc
        return Presentation(gens, rels, periph)


# ---------------------------------------------------------------------------
# The boundary-arc simulation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaData:
    """Combinatorial record of the boundary arc of B(omega, t, b).

    g0 is the full arc word (b letters x, omega-b-1 letters y); the marks give
    the suffix start offsets of the longitude words g_1..g_t and the meridian
    words h_1..h_omega inside g0.
    """

    omega: int
    t: int
    b: int
    g0: GroupWord
    longitude_marks: tuple[int, ...]
    meridian_marks: tuple[int, ...]
    gs: tuple[GroupWord, ...]
    hs: tuple[GroupWord, ...]


def _suffix(g0: GroupWord, start: int) -> GroupWord:
    return GroupWord(g0.letters[start:])


def gamma_word(omega: int, t: int, b: int) -> GammaData:
    """Simulate the boundary arc of B(omega, t, b); requires a knot closure."""
    braid = one_bridge_braid(omega, t, b)
    if closure_components(braid) != 1:
        raise NotAKnot(
            f"B({omega},{t},{b}) closes to a "
            f"{closure_components(braid)}-component link"
        )

    letters: list[Letter] = []
    arrivals: list[tuple[int, int]] = []  # (disk position, letters recorded so far)
    pos = 1
    for _ in range(omega):
        pos = (pos - 1 + t) % omega + 1
        arrivals.append((pos, len(letters)))
        if pos == b + 1:
            break
        if pos <= b:
            letters.append(("x", 1))
            pos += 1
        else:
            letters.append(("y", 1))
    else:
        raise InternalInvariantViolation("arc failed to close in omega circuits")

    g0 = GroupWord(tuple(letters))
    if len(g0) != omega - 1:
        raise InternalInvariantViolation(
            f"arc recorded {len(g0)} letters, expected {omega - 1}"
        )
    if g0.exponent_sum("x") != b or g0.exponent_sum("y") != omega - b - 1:
        raise InternalInvariantViolation("arc letter counts disagree with (omega, b)")
    positions = [a for a, _ in arrivals]
    if sorted(positions) != list(range(1, omega + 1)):
        raise InternalInvariantViolation("disk arrivals are not a bijection")

    meridian_marks = [0] * omega
    for position, recorded in arrivals:
        meridian_marks[position - 1] = recorded
    hs = tuple(_suffix(g0, mark) for mark in meridian_marks)
    longitude_marks = tuple(meridian_marks[(i - 1) % omega] for i in range(1, t + 1))
    gs = tuple(_suffix(g0, mark) for mark in longitude_marks)

    for i in range(1, t + 1):
        if gs[i - 1] != hs[(i - 1) % omega]:
            raise InternalInvariantViolation("longitude/meridian congruence failed")
    return GammaData(
        omega, t, b, g0, longitude_marks, tuple(meridian_marks), gs, hs
    )


def meridian_word() -> GroupWord:
    return GroupWord((("x", 1), ("y", -1)))


def _r_mu(data: GammaData, mu: GroupWord) -> GroupWord:
    out = GroupWord.identity()
    for h in data.hs:
        out = out * mu.conjugated_by(h)
    return out


def _r_lambda(data: GammaData, mu: GroupWord) -> GroupWord:
    out = GroupWord.gen("y")
    for g in reversed(data.gs):
        out = out * mu.inverse().conjugated_by(g)
    return out


def _longitude(data: GammaData, mu: GroupWord) -> GroupWord:
    k = data.omega * data.t + data.b
    return GroupWord.gen("y") * data.g0 * mu.power(-k)


@lru_cache(maxsize=None)
def one_bridge_presentation(omega: int, t: int, b: int) -> Presentation:
    """Two-generator, one-relator presentation of the knot group of B(omega,t,b).

    Generators x, y; single relator r_lambda; peripherals mu = x y^{-1},
    lambda = y g0 mu^{-omega t - b}, plus r_mu and r_lambda as words.
    The abelianization oracle runs on every call.
    """
    data = gamma_word(omega, t, b)
    mu = meridian_word()
    r_lam = _r_lambda(data, mu)
    pres = Presentation(
        generators=("x", "y"),
        relators=(r_lam,),
        peripherals=(
            ("mu", mu),
            ("lambda", _longitude(data, mu)),
            ("r_mu", _r_mu(data, mu)),
            ("r_lambda", r_lam),
        ),
    )
    factors, images = abelianization(
        pres, [pres.peripheral("lambda"), pres.peripheral("mu")]
    )
    if factors != (0,) or images[0] != (0,) or images[1] not in ((1,), (-1,)):
        raise InternalInvariantViolation(
            f"homology oracle failed for B({omega},{t},{b}): "
            f"factors={factors}, images={images}"
        )
    return pres


def satellite_renaming(companion: Presentation) -> dict[str, str]:
    """How companion generators are renamed inside a satellite presentation.

    Generators colliding with the pattern generators x, y get a _K suffix,
    repeated until free; everything else keeps its name.
    """
    taken = set(companion.generators) | {"x", "y"}
    mapping: dict[str, str] = {}
    for gen in companion.generators:
        if gen in ("x", "y"):
            fresh = gen + "_K"
            while fresh in taken:
                fresh += "_K"
            mapping[gen] = fresh
            taken.add(fresh)
    return mapping


def satellite_presentation(
    companion: Presentation, omega: int, t: int, b: int
) -> Presentation:
    """Knot group of the satellite with pattern B(omega, t, b) around companion.

    Free product of the companion group with <x, y>, modulo identifying the
    companion's peripheral pair with the pattern's r_mu and r_lambda.
    Companion generators colliding with x or y are renamed by appending _K.
    """
    if not (companion.has_peripheral("mu") and companion.has_peripheral("lambda")):
        raise DomainError("companion presentation must carry mu and lambda")
    data = gamma_word(omega, t, b)

    mapping = satellite_renaming(companion)
    renamed_gens = tuple(mapping.get(g, g) for g in companion.generators)
    renamed_relators = tuple(r.rename(mapping) for r in companion.relators)
    mu_k = companion.peripheral("mu").rename(mapping)
    lambda_k = companion.peripheral("lambda").rename(mapping)

    mu = meridian_word()
    r_mu = _r_mu(data, mu)
    r_lam = _r_lambda(data, mu)
    return Presentation(
        generators=renamed_gens + ("x", "y"),
        relators=renamed_relators
        + (mu_k.inverse() * r_mu, lambda_k.inverse() * r_lam),
        peripherals=(
            ("mu", mu),
            ("lambda", _longitude(data, mu)),
            ("r_mu", r_mu),
            ("r_lambda", r_lam),
            ("mu_K", mu_k),
            ("lambda_K", lambda_k),
        ),
    )


def dehn_fill(pres: Presentation, p: int, q: int) -> Presentation:
    """Add the surgery relator mu^p lambda^q for a slope p/q."""
    if not (pres.has_peripheral("mu") and pres.has_peripheral("lambda")):
        raise DomainError("presentation must carry mu and lambda peripherals")
    if math.gcd(p, q) != 1:
        raise DomainError(f"slope ({p},{q}) is not primitive")
    relator = pres.peripheral("mu").power(p) * pres.peripheral("lambda").power(q)
    return Presentation(
        generators=pres.generators,
        relators=pres.relators + (relator,),
        peripherals=pres.peripherals,
    )


# ---------------------------------------------------------------------------
# Abelianization via Smith normal form
# ---------------------------------------------------------------------------


def abelianization(pres: Presentation, probe=()):
    """Smith-normal-form abelianization and probe images.

    Returns (invariant_factors, probe_images): the factors drop trivial 1s and
    use 0 for free summands; each probe image is the tuple of its coordinates
    in the corresponding cyclic factors (reduced modulo the torsion).
    """
    gens = pres.generators
    rows = [[rel.exponent_sum(g) for g in gens] for rel in pres.relators]
    diag, v = _smith_diagonalize(rows, len(gens))
    full = diag + [0] * (len(gens) - len(diag))
    keep = [idx for idx, d in enumerate(full) if d != 1]
    factors = tuple(full[idx] for idx in keep)
    images = []
    for word in probe:
        w = [word.exponent_sum(g) for g in gens]
        coords = [sum(w[i] * v[i][j] for i in range(len(gens))) for j in range(len(gens))]
        reduced = tuple(
            coords[idx] % full[idx] if full[idx] != 0 else coords[idx] for idx in keep
        )
        images.append(reduced)
    return factors, tuple(images)


def _smith_diagonalize(rows: list[list[int]], cols: int):
    """Integer diagonalization tracking column ops; returns (diagonal, V)."""
    a = [row[:] for row in rows]
    r = len(a)
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_op(src, dst, factor):
        for row in a:
            row[dst] += factor * row[src]
        for row in v:
            row[dst] += factor * row[src]

    def col_swap(j1, j2):
        for row in a:
            row[j1], row[j2] = row[j2], row[j1]
        for row in v:
            row[j1], row[j2] = row[j2], row[j1]

    def col_negate(j):
        for row in a:
            row[j] = -row[j]
        for row in v:
            row[j] = -row[j]

    top = 0
    while top < r and top < cols:
        pivot = None
        best = None
        for i in range(top, r):
            for j in range(top, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        while True:
            i0, j0 = pivot
            a[top], a[i0] = a[i0], a[top]
            col_swap(top, j0)
            dirty = False
            for i in range(top + 1, r):
                f = a[i][top] // a[top][top]
                for j in range(cols):
                    a[i][j] -= f * a[top][j]
                if a[i][top] != 0:
                    dirty = True
            for j in range(top + 1, cols):
                f = a[top][j] // a[top][top]
                if f:
                    col_op(top, j, -f)
                if a[top][j] != 0:
                    dirty = True
            if not dirty:
                break
            pivot = None
            best = None
            for i in range(top, r):
                for j in range(top, cols):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < best):
                        best = abs(a[i][j])
                        pivot = (i, j)
        if a[top][top] < 0:
            col_negate(top)
        top += 1

    diag = [a[i][i] for i in range(top)]
    # Enforce the divisibility chain d_i | d_{i+1}.  For a violating pair,
    # work on the 2x2 block diag(d1, d2): the row op r1 += r2 (invisible to V)
    # makes it [d1 d2; 0 d2]; a Euclidean sequence of column ops (tracked in
    # V) turns the first row into (g, 0), and one final row op clears the
    # leftover below the pivot, leaving diag(g, +-lcm).
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            d1, d2 = diag[i], diag[i + 1]
            if d2 % d1 == 0:
                continue
            block = [[d1, d2], [0, d2]]

            def block_col_op(src, dst, factor):
                block[0][dst] += factor * block[0][src]
                block[1][dst] += factor * block[1][src]
                for row in v:
                    row[i + dst] += factor * row[i + src]

            def block_col_swap():
                block[0][0], block[0][1] = block[0][1], block[0][0]
                block[1][0], block[1][1] = block[1][1], block[1][0]
                for row in v:
                    row[i], row[i + 1] = row[i + 1], row[i]

            while block[0][1] != 0:
                if abs(block[0][1]) < abs(block[0][0]) or block[0][0] == 0:
                    block_col_swap()
                if block[0][0] != 0 and block[0][1] != 0:
                    block_col_op(0, 1, -(block[0][1] // block[0][0]))
            if block[0][0] < 0:
                block[0][0] = -block[0][0]
                block[1][0] = -block[1][0]
                for row in v:
                    row[i] = -row[i]
            g = block[0][0]
            if block[1][0] % g != 0:
                raise InternalInvariantViolation("Smith block reduction failed")
            block[1][1] -= (block[1][0] // g) * block[0][1]
            block[1][0] = 0
            if block[1][1] < 0:
                block[1][1] = -block[1][1]
                for row in v:
                    row[i + 1] = -row[i + 1]
            diag[i], diag[i + 1] = g, block[1][1]
            if diag[i] * diag[i + 1] != d1 * d2:
                raise InternalInvariantViolation("Smith block changed the determinant")
            changed = True
    return diag, v


def fox_alexander(pres: Presentation) -> LaurentPoly:
    """Alexander polynomial via Fox calculus on a deficiency-1 presentation.

    Requires infinite cyclic abelianization.  The polynomial is the minor of
    the abelianized Jacobian with one column removed, corrected by
    (t - 1)/(t^{e} - 1) for the removed generator's homology exponent e, then
    normalized like the Burau-side polynomial.
    """
    gens = pres.generators
    rels = pres.relators
    if len(gens) - len(rels) != 1:
        raise UnsupportedPresentation(
            f"need deficiency 1, got {len(gens)} generators / {len(rels)} relators"
        )
    factors, images = abelianization(pres, [GroupWord.gen(g) for g in gens])
    if factors != (0,):
        raise UnsupportedPresentation(
            f"need infinite cyclic abelianization, got factors {factors}"
        )
    expmap = {g: images[idx][0] for idx, g in enumerate(gens)}
    drop = None
    for idx, g in enumerate(gens):
        if expmap[g] != 0:
            drop = idx
            break
    if drop is None:
        raise UnsupportedPresentation("all generators map to 0 in homology")

    matrix = []
    for rel in rels:
        row = []
        for j, g in enumerate(gens):
            if j == drop:
                continue
            row.append(_fox_image(rel, g, expmap))
        matrix.append(row)
    minor = laurent_det(matrix)
    e = expmap[gens[drop]]
    t_pow = LaurentPoly({abs(e): 1, 0: -1})
    t_minus_1 = LaurentPoly({1: 1, 0: -1})
    delta = (minor * t_minus_1).divide_exact(t_pow)
    return delta.normalized()


def _fox_image(word: GroupWord, gen: str, expmap: dict[str, int]) -> LaurentPoly:
    """Abelianized Fox derivative d(word)/d(gen) as a Laurent polynomial."""
    coeffs: dict[int, int] = {}
    prefix = 0
    for g, e in word.letters:
        if e == 1:
            if g == gen:
                coeffs[prefix] = coeffs.get(prefix, 0) + 1
            prefix += expmap[g]
        else:
            prefix -= expmap[g]
            if g == gen:
                coeffs[prefix] = coeffs.get(prefix, 0) - 1
    return LaurentPoly(coeffs)
