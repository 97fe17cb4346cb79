"""Certificate composition for satellites with 1-bridge braid patterns.

Given a membership certificate for the companion knot's meridian and a
pattern B(omega, t, b) whose twist rate satisfies t/omega >= 2 g_K - 1, this
builds the analogous certificate for the satellite knot over the glued
presentation.  The construction mirrors the pattern-side derivation of the
plain case, then grafts the companion certificate with its axioms replaced by
derived nodes:

1. derive (r_lambda r_mu^{2g_K-1})^omega <= 1 on the pattern side, take the
   root, and rewrite through the gluing relators into mu_K^{2g_K-1} lambda_K;
2. expand mu_K^{-1} as the inverse product of meridian conjugates;
3. replay the companion certificate on these two nodes, yielding mu_K;
4. rewrite mu_K back to r_mu and peel off omega - 1 conjugate factors,
   leaving a single conjugate of mu, hence mu itself.
"""

from __future__ import annotations

from ..errors import CertError, CertGenError, DomainError, InternalInvariantViolation
from ..knotgroup import (
    GroupWord,
    Presentation,
    gamma_word,
    meridian_word,
    satellite_presentation,
    satellite_renaming,
)
from .certificate import (
    Axiom,
    Certificate,
    Conj,
    Identity,
    Mul,
    Rewrite,
    Root,
    check_certificate,
)
from .propd import DerivationContext, SuffixMachine, Toolkit
from .witness import (
    FreeCancel,
    FreeInsert,
    RelatorDelete,
    RelatorInsert,
    WitnessBuilder,
)


def satellite_inputs(companion: Presentation, companion_genus: int, omega, t, b):
    """Presentation, generating set, and target for the satellite certificate."""
    spres = satellite_presentation(companion, omega, t, b)
    g_pattern, parity = divmod((omega - 1) * (t - 1) + b, 2)
    if parity:
        raise InternalInvariantViolation("pattern genus is not an integer")
    exponent = 2 * g_pattern + 2 * omega * companion_genus - 1
    mu = meridian_word()
    S = [mu.inverse(), mu.power(exponent) * spres.peripheral("lambda")]
    return spres, S, mu


def satellite_certificate(
    companion_cert: Certificate,
    companion: Presentation,
    companion_genus: int,
    omega: int,
    t: int,
    b: int,
) -> Certificate:
    """Membership certificate for the satellite's meridian.

    Preconditions: t/omega >= 2*companion_genus - 1, pattern closes to a knot,
    and companion_cert proves mu_K in M({mu_K^{-1}, mu_K^{2g_K-1} lambda_K})
    over the companion presentation (revalidated here).
    """
    if companion_genus < 1:
        raise DomainError("companion genus must be >= 1 (nontrivial companion)")
    g_prime = 2 * companion_genus - 1
    if t < omega * g_prime:
        raise DomainError(
            f"slope hypothesis fails: t/omega = {t}/{omega} < 2 g_K - 1 = {g_prime}"
        )
    mu_k_word = companion.peripheral("mu")
    lambda_k_word = companion.peripheral("lambda")
    S_companion = [
        mu_k_word.inverse(),
        mu_k_word.power(g_prime) * lambda_k_word,
    ]
    check_certificate(companion, S_companion, mu_k_word, companion_cert)

    data = gamma_word(omega, t, b)
    spres, S, mu = satellite_inputs(companion, companion_genus, omega, t, b)
    mapping = satellite_renaming(companion)
    mu_k = mu_k_word.rename(mapping)
    lambda_k = lambda_k_word.rename(mapping)
    r_mu = spres.peripheral("r_mu")
    r_lambda = spres.peripheral("r_lambda")
    rel_mu_idx = len(companion.relators)
    rel_lambda_idx = len(companion.relators) + 1

    ctx = DerivationContext(spres, S)
    tk = Toolkit(ctx)
    sm = SuffixMachine(ctx, tk, data)
    y = sm.y
    m_cut = omega * g_prime

    # W = y (g_t mu^{-1} g_t^{-1}) ... (g_{m_cut+1} mu^{-1} g_{m_cut+1}^{-1}),
    # the free reduction of r_lambda r_mu^{g'}.
    g_words = [None] + [sm.gtilde[omega - 1 - mark] for mark in data.longitude_marks]
    W = GroupWord.gen("y")
    for m in range(t, m_cut, -1):
        W = W * sm.mu.inverse().conjugated_by(g_words[m])
    if W != r_lambda * r_mu.power(g_prime):
        raise InternalInvariantViolation(
            "reduced tail word disagrees with r_lambda r_mu^{2g_K-1}"
        )

    def tail_product(ms):
        out = GroupWord.identity()
        for m in ms:
            out = out * sm.mu.inverse().conjugated_by(g_words[m])
        return out

    def iq_kept_ge_W(index: int):
        """y (gt_i mu^{-1} gt_i^{-1})^{b'_i} >= W by re-inserting dropped factors."""
        kept = [
            m
            for m in range(t, m_cut, -1)
            if omega - 1 - data.longitude_marks[m - 1] == index
        ]
        present = list(kept)
        cur = tk.refl(y * tail_product(present))
        for m in range(m_cut + 1, t + 1):
            if m in kept:
                continue
            tail = tail_product([mm for mm in present if mm < m])
            node = ctx.conj(
                ctx.conj(sm.ax_mu_inv, g_words[m]), tail.inverse()
            )
            position = sorted(present + [m], reverse=True)
            before = y * tail_product(present)
            after = y * tail_product(position)
            cur = tk.trans(cur, tk.iq(before, after, node))
            present = position
        return cur

    def ineq_sat(i: int):
        b_i = sum(
            1
            for m in range(m_cut + 1, t + 1)
            if omega - 1 - data.longitude_marks[m - 1] == i
        )
        lifted = tk.rmul(iq_kept_ge_W(i), sm.gtilde[i] * sm.mu.power(b_i))
        return tk.trans(sm.step(i), lifted), b_i

    cur = tk.refl(sm.gtilde[omega])
    prefix = GroupWord.identity()
    suffix = GroupWord.identity()
    for i in range(omega - 1, -1, -1):
        iq_i, b_i = ineq_sat(i)
        cur = tk.trans(cur, tk.lmul(prefix, tk.rmul(iq_i, suffix)))
        prefix = prefix * W
        suffix = sm.mu.power(b_i) * suffix
    # cur: y g0 >= W^omega mu^{t - m_cut}
    drop = t - m_cut
    slope = sm.slope_iq(drop)
    folded = tk.rmul(tk.trans(slope, cur), sm.mu.power(-drop))
    if folded.a != GroupWord.identity() or folded.b != W.power(omega):
        raise CertGenError("pattern-side fold has an unexpected shape")
    node_w = ctx.root_power(folded.node, omega, W)

    # Rewrite W -> lambda_K mu_K^{g'} through the gluing relators, then
    # conjugate by lambda_K^{-1} to put the slope word in axiom order.
    wb = WitnessBuilder(spres, W.letters)
    wb.unreduce_to(r_lambda.letters + r_mu.letters * g_prime)
    wb.insert_pair_word(0, lambda_k)
    wb.delete_relator(len(lambda_k), rel_lambda_idx)
    for c in range(g_prime):
        pos = len(lambda_k) + c * len(mu_k)
        wb.insert_pair_word(pos, mu_k)
        wb.delete_relator(pos + len(mu_k), rel_mu_idx)
    reduced = wb.reduce_fully()
    target_lm = GroupWord(reduced)
    if target_lm != lambda_k * mu_k.power(g_prime):
        raise InternalInvariantViolation("gluing rewrite missed its target")
    node_lm = ctx.rewrite(node_w, target_lm, wb.result())
    node_slope_k = ctx.conj(node_lm, lambda_k.inverse())
    if ctx.words[node_slope_k] != S_companion[1].rename(mapping):
        raise InternalInvariantViolation("companion slope axiom word mismatch")

    # mu_K^{-1} as the inverse product of the omega meridian conjugates.
    node_rmu_inv = None
    for j in range(omega - 1, -1, -1):
        piece = ctx.conj(sm.ax_mu_inv, sm.gtilde[omega - 1 - data.meridian_marks[j]])
        node_rmu_inv = (
            piece if node_rmu_inv is None else ctx.mul(node_rmu_inv, piece)
        )
    if ctx.words[node_rmu_inv] != r_mu.inverse():
        raise InternalInvariantViolation("meridian product word mismatch")
    wb = WitnessBuilder(spres, r_mu.inverse().letters)
    wb.insert_pair_word(len(wb.state), mu_k)
    wb.delete_relator(0, rel_mu_idx, inverse=True)
    if tuple(wb.state) != mu_k.inverse().letters:
        raise InternalInvariantViolation("mu_K^{-1} rewrite missed its target")
    node_mu_k_inv = ctx.rewrite(node_rmu_inv, mu_k.inverse(), wb.result())

    # Graft the companion certificate, replacing its axioms by the two nodes.
    node_map: dict[int, int] = {}
    for idx, node in enumerate(companion_cert.nodes):
        if isinstance(node, Axiom):
            node_map[idx] = node_mu_k_inv if node.index == 0 else node_slope_k
        elif isinstance(node, Identity):
            node_map[idx] = ctx.identity()
        elif isinstance(node, Mul):
            node_map[idx] = ctx.mul(node_map[node.left], node_map[node.right])
        elif isinstance(node, Conj):
            node_map[idx] = ctx.conj(node_map[node.child], node.by.rename(mapping))
        elif isinstance(node, Root):
            witness = tuple(_rename_step(s, mapping) for s in node.witness)
            claimed = node.claimed.rename(mapping)
            node_map[idx] = ctx._add(
                Root(node_map[node.child], node.n, claimed, witness), claimed
            )
        elif isinstance(node, Rewrite):
            witness = tuple(_rename_step(s, mapping) for s in node.witness)
            target = node.target.rename(mapping)
            node_map[idx] = ctx._add(
                Rewrite(node_map[node.child], target, witness), target
            )
        else:  # pragma: no cover
            raise CertError(idx, f"unknown companion node {node!r}")
    node_mu_k = node_map[companion_cert.root]
    if ctx.words[node_mu_k] != mu_k:
        raise InternalInvariantViolation("grafted companion root is not mu_K")

    # mu_K -> r_mu, then peel conjugates down to a single conjugate of mu.
    wb = WitnessBuilder(spres, mu_k.letters)
    wb.insert_pair_word(0, r_mu)
    wb.delete_relator(len(r_mu), rel_mu_idx, inverse=True)
    if tuple(wb.state) != r_mu.letters:
        raise InternalInvariantViolation("r_mu rewrite missed its target")
    node_rmu = ctx.rewrite(node_mu_k, r_mu, wb.result())

    peeled = node_rmu
    for j in range(omega - 1, 0, -1):
        piece = ctx.conj(sm.ax_mu_inv, sm.gtilde[omega - 1 - data.meridian_marks[j]])
        peeled = ctx.mul(peeled, piece)
    h1 = sm.gtilde[omega - 1 - data.meridian_marks[0]]
    if ctx.words[peeled] != mu.conjugated_by(h1):
        raise InternalInvariantViolation("peeling did not isolate one conjugate")
    final = ctx.conj(peeled, h1.inverse())

    cert = ctx.certificate(final)
    try:
        check_certificate(spres, S, mu, cert)
    except Exception as exc:  # noqa: BLE001
        raise CertGenError(f"generated satellite certificate failed: {exc}") from exc
    return cert


def _rename_step(step, mapping):
    if isinstance(step, FreeInsert):
        return FreeInsert(step.pos, mapping.get(step.gen, step.gen), step.sign)
    if isinstance(step, (FreeCancel, RelatorInsert, RelatorDelete)):
        return step
    raise InternalInvariantViolation(f"unknown witness step {step!r}")
