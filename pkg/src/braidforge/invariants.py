"""Laurent polynomials, the reduced Burau representation, and Alexander polynomials.

This module is the independent oracle backing every closure-equivalence claim
elsewhere in the package: two braids whose closures are claimed equal must at
least have equal normalized Alexander polynomials.

Burau convention (pinned):

* on 2 strands, sigma_1 maps to the 1x1 matrix [-t];
* on n >= 3 strands, sigma_i acts as the identity outside the rows/columns
  i-1, i, i+1, with block rows (1 0 0), (t -t 1), (0 0 1) centred so that the
  (i, i) entry is -t (boundary generators use the obvious 2x2 truncation).

The trefoil value t^2 - t + 1 for sigma_1^3 on 2 strands pins the convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .braid import BraidWord, closure_components
from .errors import DomainError, InternalInvariantViolation, NotAKnot


class LaurentPoly:
    """Integer-coefficient Laurent polynomial in one variable t.

    Immutable by convention; the coefficient map never stores zeros, and the
    empty map is the zero polynomial.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        if coeffs:
            for exp, c in dict(coeffs).items():
                if c != 0:
                    clean[int(exp)] = int(c)
        self._coeffs = clean

    @staticmethod
    def zero() -> LaurentPoly:
        return LaurentPoly()

    @staticmethod
    def one() -> LaurentPoly:
        return LaurentPoly({0: 1})

    @staticmethod
    def term(coeff: int, exp: int = 0) -> LaurentPoly:
        return LaurentPoly({exp: coeff})

    @staticmethod
    def t(exp: int = 1) -> LaurentPoly:
        return LaurentPoly({exp: 1})

    def coeffs(self) -> dict[int, int]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        out = dict(self._coeffs)
        for exp, c in other._coeffs.items():
            out[exp] = out.get(exp, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        out: dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by t^k."""
        return LaurentPoly({e + k: c for e, c in self._coeffs.items()})

    def min_exp(self) -> int:
        if self.is_zero():
            raise DomainError("zero polynomial has no minimum exponent")
        return min(self._coeffs)

    def max_exp(self) -> int:
        if self.is_zero():
            raise DomainError("zero polynomial has no maximum exponent")
        return max(self._coeffs)

    def degree_span(self) -> int:
        return self.max_exp() - self.min_exp()

    def evaluate(self, value: int) -> int:
        """Evaluate at an integer (negative exponents only clear at +-1)."""
        total = 0
        for e, c in self._coeffs.items():
            if e >= 0:
                total += c * value**e
            elif value in (1, -1):
                total += c * value ** (-e)
            else:
                raise DomainError("negative exponents only evaluable at +-1")
        return total

    def divide_exact(self, divisor: LaurentPoly) -> LaurentPoly:
        """Exact division; raises InternalInvariantViolation on any remainder."""
        if divisor.is_zero():
            raise DomainError("division by zero polynomial")
        if self.is_zero():
            return LaurentPoly.zero()
        rem = dict(self._coeffs)
        d_lo = divisor.min_exp()
        d_lead = divisor._coeffs[d_lo]
        # Any exact quotient tops out at this exponent; passing it means the
        # low-exponent elimination is running off into a power series.
        shift_bound = self.max_exp() - divisor.max_exp()
        out: dict[int, int] = {}
        while rem:
            r_lo = min(rem)
            c, leftover = divmod(rem[r_lo], d_lead)
            shift = r_lo - d_lo
            if leftover != 0 or shift > shift_bound:
                raise InternalInvariantViolation("inexact polynomial division")
            out[shift] = c
            for e, dc in divisor._coeffs.items():
                e2 = e + shift
                rem[e2] = rem.get(e2, 0) - c * dc
                if rem[e2] == 0:
                    del rem[e2]
        return LaurentPoly(out)

    def normalized(self) -> LaurentPoly:
        """Multiply by +-t^k so min exponent is 0 and the top coefficient is positive."""
        if self.is_zero():
            return self
        shifted = self.shift(-self.min_exp())
        if shifted._coeffs[shifted.max_exp()] < 0:
            shifted = -shifted
        return shifted

    def __repr__(self):
        return f"LaurentPoly({self._coeffs!r})"

    def __str__(self):
        return format_poly(self)

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in sorted(self._coeffs.items())}

    @staticmethod
    def from_json(data: dict) -> LaurentPoly:
        try:
            return LaurentPoly({int(e): int(c) for e, c in data.items()})
        except (TypeError, ValueError) as exc:
            raise DomainError(f"malformed polynomial JSON: {exc}") from exc


def format_poly(p: LaurentPoly) -> str:
    """Render ascending-exponent text like '1 - t + t^2'."""
    if p.is_zero():
        return "0"
    pieces = []
    for e in sorted(p.coeffs()):
        c = p.coeffs()[e]
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            power = "t" if e == 1 else f"t^{e}"
            body = power if mag == 1 else f"{mag}*{power}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces)


def _identity_matrix(dim: int) -> list[list[LaurentPoly]]:
    one, zero = LaurentPoly.one(), LaurentPoly.zero()
    return [[one if i == j else zero for j in range(dim)] for i in range(dim)]


def _burau_generator(i: int, n: int, inverse: bool) -> list[list[LaurentPoly]]:
    """Reduced Burau matrix of sigma_i^{+-1} in B_n (dimension n-1)."""
    dim = n - 1
    m = _identity_matrix(dim)
    t = LaurentPoly.t(1)
    tinv = LaurentPoly.t(-1)
    one = LaurentPoly.one()
    r = i - 1  # 0-based row of the -t entry
    if not inverse:
        m[r][r] = -t
        if r > 0:
            m[r][r - 1] = t
        if r < dim - 1:
            m[r][r + 1] = one
    else:
        m[r][r] = -tinv
        if r > 0:
            m[r][r - 1] = one
        if r < dim - 1:
            m[r][r + 1] = tinv
    return m


def _mat_mul(a, b):
    dim = len(a)
    out = []
    for i in range(dim):
        row = []
        for j in range(dim):
            acc = LaurentPoly.zero()
            for k in range(dim):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


@dataclass(frozen=True)
class BurauMatrix:
    """Square matrix of Laurent polynomials of dimension strands - 1."""

    strands: int
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def __post_init__(self):
        dim = self.strands - 1
        if len(self.entries) != dim or any(len(row) != dim for row in self.entries):
            raise DomainError("Burau matrix dimension must be strands - 1")

    def __mul__(self, other: BurauMatrix) -> BurauMatrix:
        if self.strands != other.strands:
            raise DomainError("Burau matrices on different strand counts")
        prod = _mat_mul([list(r) for r in self.entries], [list(r) for r in other.entries])
        return BurauMatrix(self.strands, tuple(tuple(r) for r in prod))


def burau_reduced(w: BraidWord) -> BurauMatrix:
    """Product of reduced Burau generator matrices over the word's letters."""
    if w.strands < 2:
        raise DomainError("reduced Burau needs at least 2 strands")
    acc = _identity_matrix(w.strands - 1)
    for letter in w.letters:
        gen = _burau_generator(abs(letter), w.strands, inverse=letter < 0)
        acc = _mat_mul(acc, gen)
    return BurauMatrix(w.strands, tuple(tuple(r) for r in acc))


def laurent_det(matrix: list[list[LaurentPoly]]) -> LaurentPoly:
    """Determinant by fraction-free (Bareiss) elimination; all divisions exact."""
    dim = len(matrix)
    if dim == 0:
        return LaurentPoly.one()
    m = [[matrix[i][j] for j in range(dim)] for i in range(dim)]
    sign = 1
    prev = LaurentPoly.one()
    for k in range(dim - 1):
        if m[k][k].is_zero():
            for swap in range(k + 1, dim):
                if not m[swap][k].is_zero():
                    m[k], m[swap] = m[swap], m[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly.zero()
        for i in range(k + 1, dim):
            for j in range(k + 1, dim):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.divide_exact(prev)
        prev = m[k][k]
    det = m[dim - 1][dim - 1]
    return det if sign == 1 else -det


def alexander_from_braid(w: BraidWord) -> LaurentPoly:
    """Normalized Alexander polynomial of a knot closure via reduced Burau.

    Computes det(I - Burau(w)) and divides exactly by 1 + t + ... + t^{n-1};
    an inexact division is an internal defect and raises.
    """
    if closure_components(w) != 1:
        raise NotAKnot(
            f"closure has {closure_components(w)} components; "
            "one-variable Alexander polynomial requires a knot"
        )
    if w.strands == 1:
        return LaurentPoly.one()
    dim = w.strands - 1
    bur = burau_reduced(w)
    ident = _identity_matrix(dim)
    diff = [
        [ident[i][j] - bur.entries[i][j] for j in range(dim)] for i in range(dim)
    ]
    det = laurent_det(diff)
    cyclotomic_like = LaurentPoly({e: 1 for e in range(w.strands)})
    delta = det.divide_exact(cyclotomic_like).normalized()
    if abs(delta.evaluate(1)) != 1:
        raise InternalInvariantViolation(
            f"Alexander value at t=1 is {delta.evaluate(1)}, expected +-1"
        )
    return delta


@dataclass(frozen=True)
class EvidenceReport:
    """Invariant evidence that two braid closures may coincide.

    A 'consistent' verdict is necessary, not sufficient, for the closures to
    be the same link; the report records that caveat explicitly.
    """

    components: tuple[int, int]
    alexander: tuple[LaurentPoly | None, LaurentPoly | None]
    verdict: str
    note: str = field(
        default="invariant agreement is necessary, not sufficient, for closure equivalence"
    )

    def consistent(self) -> bool:
        return self.verdict == "consistent"

    def to_json(self) -> dict:
        first, second = self.alexander
        return {
            "components": list(self.components),
            "alexander": [
                None if first is None else first.to_json(),
                None if second is None else second.to_json(),
            ],
            "verdict": self.verdict,
            "note": self.note,
        }


def same_closure_evidence(u: BraidWord, v: BraidWord) -> EvidenceReport:
    """Compare component counts and (for knots) normalized Alexander polynomials."""
    cu, cv = closure_components(u), closure_components(v)
    if cu != cv:
        return EvidenceReport((cu, cv), (None, None), "inconsistent")
    if cu != 1:
        return EvidenceReport((cu, cv), (None, None), "consistent")
    du, dv = alexander_from_braid(u), alexander_from_braid(v)
    verdict = "consistent" if du == dv else "inconsistent"
    return EvidenceReport((cu, cv), (du, dv), verdict)
