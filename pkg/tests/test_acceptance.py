"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with  pytest tests/test_acceptance.py -v -s  to see the per-criterion
lines and timings.  Criteria with sub-cases that are mathematically
unattainable are split out as strict xfail tests with the analysis in the
decisions ledger; everything attainable must pass at the stated tolerance.
"""

import json
import math
import random
import time

import pytest

from braidforge.braid import (
    BraidWord,
    ascending_block,
    big_pi,
    closure_components,
    descending_block,
    one_bridge_braid,
    positive_closure_genus,
)
from braidforge.errors import DomainError, NotAKnot
from braidforge.invariants import alexander_from_braid, same_closure_evidence
from braidforge.knotgroup import (
    GroupWord,
    abelianization,
    fox_alexander,
    gamma_word,
    one_bridge_presentation,
    satellite_presentation,
)
from braidforge.markov import (
    ConjugateBy,
    MoveTrace,
    StabilizeNeg,
    StabilizePos,
    apply_move,
    coprime_inverses,
    ttk_to_one_bridge,
    verify_trace,
    word_equal,
)
from braidforge.ordercert import (
    certificate_from_json,
    certificate_to_json,
    check_certificate,
    property_d_certificate,
    property_d_inputs,
    satellite_certificate,
    satellite_inputs,
    v2503_bundle,
)
from braidforge.ordercert.propd import _OneBridgeDerivation

from fuzz_utils import mutate_cert_json, mutate_trace_json


def _report(number, label, started, detail=""):
    elapsed = time.time() - started
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number}: PASS {label} [{elapsed:.1f}s]{suffix}")


def _knot_grid(omega_max, t_max):
    for omega in range(2, omega_max + 1):
        for t in range(1, t_max + 1):
            for b in range(0, omega - 1):
                w = one_bridge_braid(omega, t, b)
                if closure_components(w) == 1:
                    yield omega, t, b, w


def test_criterion_1_identity_suite():
    started = time.time()
    checked = 0
    for m in range(1, 7):
        n = m + 1
        pi = descending_block(m)

        def eq(u, v):
            return word_equal(BraidWord(n, tuple(u)), BraidWord(n, tuple(v)))

        for i in range(1, m):
            assert eq((i,) + pi, pi + (i + 1,))
            checked += 1
        assert eq(pi * (m + 1), big_pi(m, n).letters * 2)
        checked += 1
        if m >= 1:
            assert eq((m,) + pi * 2, pi * 2 + (1,))
            checked += 1
        for s in range(2, m + 1):
            assert eq(pi * s, descending_block(m - 1) + pi * (s - 1) + (s - 1,))
            assert eq(
                pi * s,
                descending_block(m - 1) * (s - 1) + pi + ascending_block(s - 1),
            )
            checked += 2
    assert time.time() - started < 10.0
    _report(1, "identity suite m <= 6", started, f"{checked} identities")


CONVERSION_CASES = [
    ((2, 3, 2, 2), (2, 5, 0)),  # T_{2,3}^{2,1} -> T(2,5)
    ((2, 5, 2, 2), (2, 7, 0)),  # T_{2,5}^{2,1} -> T(2,7)
    ((3, 4, 2, 2), None),  # T_{3,4}^{2,1}
    ((3, 5, 2, 2), None),  # T_{3,5}^{2,1}
    ((5, 4, 4, 4), None),  # T_{5,4}^{4,1} (n = 4)
]


def test_criterion_2_conversions():
    started = time.time()
    for params, pinned in CONVERSION_CASES:
        case_start = time.time()
        res = ttk_to_one_bridge(*params)
        assert res.t >= 1 and 0 <= res.b <= res.omega - 2
        if pinned is not None:
            assert (res.omega, res.t, res.b) == pinned
        verify_trace(res.trace)
        assert res.trace.end.letters == one_bridge_braid(res.omega, res.t, res.b).letters
        evidence = same_closure_evidence(res.trace.start, res.trace.end)
        assert evidence.consistent()
        assert time.time() - case_start < 5.0
    _report(2, "Theorem 1.1 conversions", started, f"{len(CONVERSION_CASES)} cases")


def test_criterion_3_oracle_identity():
    started = time.time()
    count = 0
    for omega, t, b, w in _knot_grid(6, 6):
        assert fox_alexander(one_bridge_presentation(omega, t, b)) == (
            alexander_from_braid(w)
        )
        count += 1
    assert time.time() - started < 60.0
    _report(3, "Fox = Burau oracle identity", started, f"{count} knot cases")


def test_criterion_4_structural_invariants():
    started = time.time()
    count = 0
    for omega, t, b, _ in _knot_grid(6, 6):
        data = gamma_word(omega, t, b)
        assert len(data.g0) == omega - 1
        assert data.g0.exponent_sum("x") == b
        assert data.g0.exponent_sum("y") == omega - b - 1
        suffixes = {data.g0.letters[k:] for k in range(omega)}
        assert all(g.letters in suffixes for g in data.gs)
        assert all(h.letters in suffixes for h in data.hs)
        for i in range(1, t + 1):
            for j in range(1, omega + 1):
                if (i - j) % omega == 0:
                    assert data.gs[i - 1] == data.hs[j - 1]
        pres = one_bridge_presentation(omega, t, b)
        factors, images = abelianization(
            pres, [pres.peripheral("lambda"), pres.peripheral("mu")]
        )
        assert factors == (0,)
        assert images[0] == (0,) and abs(images[1][0]) == 1
        count += 1
    _report(4, "structural invariants", started, f"{count} knot cases")


def test_criterion_5_genus_identity():
    started = time.time()
    threshold_checked = 0
    for omega in range(2, 9):
        for t in range(1, 9):
            for b in range(0, omega - 1):
                w = one_bridge_braid(omega, t, b)
                if closure_components(w) != 1:
                    continue
                res = positive_closure_genus(w)
                assert res.slope_threshold == omega * t + b - t - omega
                threshold_checked += 1
    span_checked = 0
    for omega, t, b, w in _knot_grid(6, 6):
        delta = alexander_from_braid(w)
        assert delta.degree_span() == 2 * positive_closure_genus(w).genus
        span_checked += 1
    _report(
        5,
        "genus and fibredness identities",
        started,
        f"{threshold_checked} thresholds, {span_checked} spans",
    )


def test_criterion_6_property_d_certificates():
    started = time.time()
    branch_counts = {"t_gt_bl": 0, "t_eq_1": 0, "t_eq_bl_gt_1": 0}
    count = 0
    for omega, t, b, w in _knot_grid(5, 5):
        if positive_closure_genus(w).genus == 0:
            continue
        cert = property_d_certificate(omega, t, b)
        pres, S, target = property_d_inputs(omega, t, b)
        check_certificate(pres, S, target, cert)
        deriv = _OneBridgeDerivation(omega, t, b)
        b_l = deriv.b_count[deriv.l]
        if t > b_l:
            branch_counts["t_gt_bl"] += 1
        elif t == 1:
            branch_counts["t_eq_1"] += 1
        else:
            branch_counts["t_eq_bl_gt_1"] += 1
        count += 1
    assert branch_counts["t_gt_bl"] >= 1
    assert branch_counts["t_eq_1"] >= 1
    assert time.time() - started < 120.0
    _report(
        6,
        "property-(D) certificates",
        started,
        f"{count} certificates, branches {branch_counts}",
    )


@pytest.mark.xfail(
    strict=True,
    reason="t = b_l > 1 cannot occur: longitude words repeat exactly on "
    "residues mod omega and the omega meridian words are suffixes of "
    "pairwise distinct lengths, so b_l = ceil(t/omega) = t forces t = 1; "
    "verified exhaustively for omega, t <= 7 (see decisions ledger)",
)
def test_criterion_6_branch_t_eq_bl_gt_1_exists():
    for omega, t, b, _ in _knot_grid(5, 5):
        deriv = _OneBridgeDerivation(omega, t, b)
        if t == deriv.b_count[deriv.l] and t > 1:
            return
    raise AssertionError("no t = b_l > 1 instance exists on the grid")


SATELLITE_PATTERNS = [(3, 4, 1), (3, 5, 0), (4, 7, 2)]


def test_criterion_7_satellite_certificates():
    started = time.time()
    tref_cert = property_d_certificate(2, 3, 0)
    tref_pres = one_bridge_presentation(2, 3, 0)
    accepted = []
    for omega, t, b in SATELLITE_PATTERNS:
        if closure_components(one_bridge_braid(omega, t, b)) != 1:
            continue  # impossible sub-cases covered by the xfail test below
        cert = satellite_certificate(tref_cert, tref_pres, 1, omega, t, b)
        spres, S, target = satellite_inputs(tref_pres, 1, omega, t, b)
        check_certificate(spres, S, target, cert)
        accepted.append((omega, t, b))
    assert (3, 5, 0) in accepted
    # comparable valid patterns at the sizes of the two non-knot entries
    for omega, t, b in [(4, 5, 2), (4, 7, 0)]:
        cert = satellite_certificate(tref_cert, tref_pres, 1, omega, t, b)
        spres, S, target = satellite_inputs(tref_pres, 1, omega, t, b)
        check_certificate(spres, S, target, cert)
        accepted.append((omega, t, b))
    # doubly iterated satellite
    sat_pres = satellite_presentation(tref_pres, 3, 5, 0)
    sat_cert = satellite_certificate(tref_cert, tref_pres, 1, 3, 5, 0)
    genus_param = 4 + 3 * 1  # g(P) + omega g(K)
    cert2 = satellite_certificate(sat_cert, sat_pres, genus_param, 2, 27, 0)
    spres2, S2, target2 = satellite_inputs(sat_pres, genus_param, 2, 27, 0)
    check_certificate(spres2, S2, target2, cert2)
    # slope-violating pattern rejected with DomainError
    with pytest.raises(DomainError):
        satellite_certificate(tref_cert, tref_pres, 1, 3, 2, 1)
    _report(
        7,
        "satellite certificates",
        started,
        f"accepted {accepted} + doubly iterated (2,27,0)",
    )


@pytest.mark.parametrize("pattern", [(3, 4, 1), (4, 7, 2)])
@pytest.mark.xfail(
    strict=True,
    reason="listed pattern braids close to 2- and 3-component links, not "
    "knots in the solid torus, so no 1-bridge pattern (hence no satellite "
    "certificate) exists for them; see decisions ledger",
)
def test_criterion_7_listed_nonknot_patterns(pattern):
    tref_cert = property_d_certificate(2, 3, 0)
    tref_pres = one_bridge_presentation(2, 3, 0)
    omega, t, b = pattern
    cert = satellite_certificate(tref_cert, tref_pres, 1, omega, t, b)
    spres, S, target = satellite_inputs(tref_pres, 1, omega, t, b)
    check_certificate(spres, S, target, cert)


def test_criterion_8_v2503_bundle():
    started = time.time()
    bundle = v2503_bundle()
    names = {name for name, _ in bundle.checks}
    assert {
        "mu_inverse_word",
        "fixed_point_b",
        "fixed_point_a",
        "lambda_certificate",
        "p0_torsion",
    } <= names
    check_certificate(
        bundle.presentation,
        list(bundle.certificate_S),
        bundle.certificate_target,
        bundle.certificate,
    )
    assert time.time() - started < 5.0
    _report(8, "v2503 bundle", started, f"{len(bundle.checks)} named checks")


def test_criterion_9_robustness(tmp_path, data_dir):
    started = time.time()
    from braidforge.cli import main

    rng = random.Random(20260809)
    rejected = 0

    trace_payloads = [
        json.loads((data_dir / "trace_ttk_3_4_2_2.json").read_text()),
        json.loads((data_dir / "trace_ttk_5_9_3_3.json").read_text()),
    ]
    mutated_path = tmp_path / "mutated_trace.json"
    for k in range(520):
        payload = mutate_trace_json(trace_payloads[k % 2], rng)
        mutated_path.write_text(json.dumps(payload))
        code = main(["verify", str(mutated_path)])
        assert code != 0
        if code == 1:
            rejected += 1

    cert_sets = []
    for name in ["propd_cert_B_3_2_0", "propd_cert_B_5_3_2"]:
        cert_sets.append(
            (
                json.loads((data_dir / f"{name}.json").read_text()),
                str(data_dir / f"{name.replace('cert', 'pres')}.json"),
            )
        )
    mutated_cert = tmp_path / "mutated_cert.json"
    for k in range(520):
        payload, pres_path = cert_sets[k % 2]
        mutated = mutate_cert_json(payload, rng)
        mutated_cert.write_text(json.dumps(mutated))
        code = main(["verify", str(mutated_cert), "--pres", pres_path])
        assert code != 0
        if code == 1:
            rejected += 1
    assert rejected >= 1000  # schema-valid mutations: genuine rejections

    # >= 10^3 random Markov moves leave the Alexander polynomial unchanged
    moves = 0
    seeds = [w for _, _, _, w in _knot_grid(5, 5)]
    while moves < 1000:
        for base in seeds:
            w = base
            delta = alexander_from_braid(base)
            for _ in range(10):
                kind = rng.randrange(4)
                if kind in (0, 1):
                    g = tuple(
                        rng.choice([1, -1]) * rng.randint(1, w.strands - 1)
                        for _ in range(rng.randint(1, 3))
                    )
                    w = apply_move(w, ConjugateBy(g))
                elif kind == 2 and w.strands < 7:
                    w = apply_move(w, StabilizePos())
                elif w.strands < 7:
                    w = apply_move(w, StabilizeNeg())
                else:
                    continue
                assert alexander_from_braid(w) == delta
                moves += 1
            if moves >= 1000:
                break
    _report(
        9,
        "robustness",
        started,
        f"{rejected} mutations rejected, {moves} invariant moves",
    )


def test_criterion_10_number_theoretic_lemma():
    started = time.time()
    count = 0
    for p in range(3, 51):
        for q in range(3, 51):
            if math.gcd(p, q) != 1:
                continue
            x, y = coprime_inverses(p, q)
            assert (p * x) % q == 1 and (q * y) % p == 1
            assert 2 * x < q or 2 * y < p
            count += 1
    assert time.time() - started < 1.0
    _report(10, "coprime inverse bound", started, f"{count} coprime pairs")
