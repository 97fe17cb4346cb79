"""Bundled data and checks for the one-cusped manifold v2503.

The fundamental group presentation and peripheral words ship as data:

    < a, b | a^2 b^-2 a b^-2 a^2 b a^2 b a b a^2 b >
    mu     = b^-2 a b^-2 a b^-1
    lambda = a^-2 b^-1 a^-2 b

The bundle replays four machine-checkable facts about this group:

1. an equality witness writing mu^{-1} as the positive word b a b a^2 b a b
   a^2 b a^2 (the relator rearranged);
2. both instantiations of the fixed-point hypothesis check on that word;
3. a certificate that lambda lies in the root-closed, conjugacy-closed
   submonoid generated by lambda^{-1}, routed through the intermediate
   inequalities a^2 b a^2 <= b and a^2 >= 1;
4. for the slope-(0,1) filling: equality witnesses for a^2 b a^2 = b and
   a^2 = 1 in the quotient, exhibiting the order-2 torsion element a (the
   quotient abelianizes to Z + Z/2).

Any replay failure raises; the bundle never returns unverified data.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InternalInvariantViolation
from ..knotgroup import GroupWord, Presentation, abelianization, dehn_fill
from .certificate import Certificate, check_certificate
from .hypotheses import fixed_point_hypotheses
from .propd import DerivationContext, Toolkit
from .witness import RelatorInsert, WitnessBuilder, check_equality_witness


def _word(spec: str) -> GroupWord:
    """Parse words like 'a a B B' with capitals meaning inverses."""
    letters = []
    for ch in spec.split():
        if ch.isupper():
            letters.append((ch.lower(), -1))
        else:
            letters.append((ch, 1))
    return GroupWord.reduced(letters)


RELATOR = _word("a a B B a B B a a b a a b a b a a b")
MU = _word("B B a B B a B")
LAMBDA = _word("A A B A A b")
MU_INV_POSITIVE = _word("b a b a a b a b a a b a a")  # X a^2, X = baba^2baba^2b


def v2503_presentation() -> Presentation:
    return Presentation(
        generators=("a", "b"),
        relators=(RELATOR,),
        peripherals=(("mu", MU), ("lambda", LAMBDA)),
    )


def _mu_inverse_witness(pres: Presentation):
    """Witness that the direct inverse word of mu equals b a b a^2 b a b a^2 b a^2."""
    x_word = _word("b a b a a b a b a a b")
    wb = WitnessBuilder(pres, MU.inverse().letters)
    wb.insert_pair_word(0, x_word)
    wb.insert_pair_word(len(wb.state), _word("A A"))
    # X^{-1} ends with b^{-1} against the leading b of mu^{-1}: cancel, then
    # the relator inverse sits as one contiguous segment after X.
    wb.cancel_at(2 * len(x_word) - 1)
    wb.delete_relator(len(x_word), 0, inverse=True)
    if tuple(wb.state) != MU_INV_POSITIVE.letters:
        raise InternalInvariantViolation("mu^{-1} witness missed its target")
    return wb.result()


def _lambda_certificate(pres: Presentation):
    """Certificate: lambda in M({lambda^{-1}}), following the a^2-extraction."""
    S = [LAMBDA.inverse()]
    ctx = DerivationContext(pres, S)
    tk = Toolkit(ctx)
    a2ba2 = _word("a a b a a")
    b_w = _word("b")
    # lambda^{-1} = b^{-1} a^2 b a^2 verbatim: the axiom says a^2 b a^2 <= b.
    iq_bridge = tk.iq(b_w, a2ba2, ctx.axiom(0))
    u1 = _word("a a B B a B B")
    u2 = _word("b a b")
    u3 = _word("A A")
    sub = tk.product(
        [tk.refl(u1), iq_bridge, tk.refl(u2), iq_bridge, tk.refl(u3)]
    )
    if sub.b != RELATOR:
        raise InternalInvariantViolation("substituted product is not the relator")
    node_rel = ctx.rewrite(
        ctx.identity(), RELATOR.inverse(), [RelatorInsert(0, True, 0)]
    )
    r_ge_1 = tk.iq(RELATOR, GroupWord.identity(), node_rel)
    w2_ge_1 = tk.trans(sub, r_ge_1)
    a2_ge_1 = tk.conj(w2_ge_1, _word("b b A A"))
    if a2_ge_1.a != _word("a a") or not a2_ge_1.b.is_identity():
        raise InternalInvariantViolation("a^2 extraction has an unexpected shape")
    final = ctx.mul(a2_ge_1.node, ctx.conj(a2_ge_1.node, _word("B")))
    if ctx.words[final] != LAMBDA:
        raise InternalInvariantViolation("lambda derivation missed its target")
    cert = ctx.certificate(final)
    check_certificate(pres, S, LAMBDA, cert)
    a2_cert = ctx.certificate(a2_ge_1.node)
    check_certificate(pres, S, _word("A A"), a2_cert)
    return S, cert, a2_cert


def _filled_torsion_witnesses(filled: Presentation):
    """In the (0,1)-filled group: lambda = 1, a^2 b a^2 = b, and a^2 = 1."""
    lam_idx = len(filled.relators) - 1  # the surgery relator mu^0 lambda^1
    if filled.relators[lam_idx] != LAMBDA:
        raise InternalInvariantViolation("filling relator is not lambda")

    wb = WitnessBuilder(filled, LAMBDA.letters)
    wb.delete_relator(0, lam_idx)
    lambda_trivial = wb.result()
    check_equality_witness(filled, LAMBDA, GroupWord.identity(), lambda_trivial)

    a2ba2 = _word("a a b a a")
    wb = WitnessBuilder(filled, a2ba2.letters)
    wb.insert_pair_word(0, _word("b"))
    wb.delete_relator(1, lam_idx, inverse=True)
    bridge = wb.result()
    check_equality_witness(filled, a2ba2, _word("b"), bridge)

    # a^2 = 1: wrap a^2 so the relator appears after substituting b -> a^2 b a^2
    # twice (each substitution inserts a lambda relator), then delete it.
    wb = WitnessBuilder(filled, _word("a a").letters)
    wb.insert_pair_word(0, _word("b b"))
    wb.insert_pair_word(6, _word("b b"))
    wb.insert_pair_word(2, _word("A A"))
    wb.insert_pair_word(12, _word("A A"))
    # state: b^2 a^-2 [a^2 b^-2 a^2 b^2 a^-2] a^2 b^-2, the bracket being the
    # relator-equivalent word; expand it to U1 b U2 b U3 and substitute.
    raw = (
        _word("a a B B a B B").letters
        + _word("b").letters
        + _word("b a b").letters
        + _word("b").letters
        + _word("A A").letters
    )
    wb.unreduce_segment(4, 10, raw)
    for pos in (15, 11):  # substituted b letters, rightmost first
        wb.insert_pair_word(pos, _word("a a b a a"))
        wb.delete_relator(pos + 5, lam_idx)
    wb.cancel_at(23)
    wb.cancel_at(22)
    wb.delete_relator(4, 0)
    wb.reduce_fully()
    if wb.state:
        raise InternalInvariantViolation("a^2 witness did not reach the identity")
    torsion = wb.result()
    check_equality_witness(filled, _word("a a"), GroupWord.identity(), torsion)
    return lambda_trivial, bridge, torsion


@dataclass(frozen=True)
class V2503Bundle:
    presentation: Presentation
    checks: tuple[tuple[str, str], ...]
    certificate_S: tuple[GroupWord, ...]
    certificate_target: GroupWord
    certificate: Certificate


def v2503_bundle() -> V2503Bundle:
    """Run all bundled v2503 checks; raises on any failure."""
    pres = v2503_presentation()
    checks = []

    witness = _mu_inverse_witness(pres)
    check_equality_witness(pres, MU.inverse(), MU_INV_POSITIVE, witness)
    checks.append(
        ("mu_inverse_word", "mu^{-1} = b a b a^2 b a b a^2 b a^2 via the relator")
    )

    if not fixed_point_hypotheses(MU_INV_POSITIVE, MU, "b", "a"):
        raise InternalInvariantViolation("fixed-point hypothesis (g1=b) failed")
    checks.append(("fixed_point_b", "g1=b, g2=a, g3=mu^{-1} word, g4=mu word"))
    if not fixed_point_hypotheses(MU_INV_POSITIVE, MU.inverse(), "a", "b"):
        raise InternalInvariantViolation("fixed-point hypothesis (g1=a) failed")
    checks.append(("fixed_point_a", "g1=a, g2=b, g3=mu^{-1} word, g4=mu^{-1} word"))

    S, cert, a2_cert = _lambda_certificate(pres)
    checks.append(
        ("lambda_certificate", "lambda in M({lambda^{-1}}) via a^2 b a^2 <= b, a^2 >= 1")
    )

    filled = dehn_fill(pres, 0, 1)
    _filled_torsion_witnesses(filled)
    factors, _ = abelianization(filled)
    if factors != (2, 0):
        raise InternalInvariantViolation(
            f"filled homology is {factors}, expected Z/2 + Z"
        )
    checks.append(
        ("p0_torsion", "slope (0,1): lambda = 1, a^2 b a^2 = b, a^2 = 1; H1 = Z/2 + Z")
    )

    return V2503Bundle(
        presentation=pres,
        checks=tuple(checks),
        certificate_S=tuple(S),
        certificate_target=LAMBDA,
        certificate=cert,
    )
