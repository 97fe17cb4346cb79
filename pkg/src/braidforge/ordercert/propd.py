"""Generator for the property-(D) membership certificates.

For the closure of B(omega, t, b), a nontrivial knot of genus g, the generated
certificate proves that the meridian mu lies in the root-closed,
conjugacy-closed submonoid generated by mu^{-1} and mu^{2g-1} lambda, over the
two-generator knot group presentation.

The derivation manipulates one-sided inequalities.  Internally an inequality
A >= B stands for the membership reduce(A^{-1} B) in M(S); the combinators
below mirror the usual preorder reasoning:

* transitivity        -> Mul of the two membership nodes;
* left multiplication -> free (the membership word is unchanged);
* right multiplication / conjugation -> Conj nodes;
* products of inequalities -> a Conj plus a Mul;
* roots of mu-powers  -> Root nodes.

Relator uses enter through Rewrite nodes whose witnesses insert the single
relator, after which everything reduces freely.  Every combinator asserts
that the tracked node word matches the inequality it claims to witness, so a
generation bug fails fast instead of emitting an invalid certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..braid import one_bridge_braid, positive_closure_genus
from ..errors import CertGenError, DomainError, InternalInvariantViolation
from ..knotgroup import (
    GammaData,
    GroupWord,
    Presentation,
    gamma_word,
    meridian_word,
    one_bridge_presentation,
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
from .witness import RelatorInsert, reduction_cancels


class DerivationContext:
    """Node accumulator that tracks every node's word for self-checking."""

    def __init__(self, pres: Presentation, S):
        self.pres = pres
        self.S = list(S)
        self.nodes = []
        self.words = []
        self._identity_idx = None

    def _add(self, node, word: GroupWord) -> int:
        self.nodes.append(node)
        self.words.append(word)
        return len(self.nodes) - 1

    def identity(self) -> int:
        if self._identity_idx is None:
            self._identity_idx = self._add(Identity(), GroupWord.identity())
        return self._identity_idx

    def axiom(self, index: int) -> int:
        return self._add(Axiom(index), self.S[index])

    def mul(self, left: int, right: int) -> int:
        return self._add(Mul(left, right), self.words[left] * self.words[right])

    def conj(self, child: int, by: GroupWord) -> int:
        if by.is_identity():
            return child
        return self._add(Conj(child, by), self.words[child].conjugated_by(by))

    def rewrite(self, child: int, target: GroupWord, witness) -> int:
        return self._add(Rewrite(child, target, tuple(witness)), target)

    def root_power(self, child: int, n: int, claimed: GroupWord) -> int:
        """Root node for claimed^n = child's word, with a free-reduction witness."""
        steps, reduced = reduction_cancels(claimed.letters * n)
        if reduced != self.words[child].letters:
            raise InternalInvariantViolation(
                "root claim does not freely reduce to the child word"
            )
        return self._add(Root(child, n, claimed, tuple(steps)), claimed)

    def certificate(self, root: int) -> Certificate:
        """Assemble the certificate, pruning nodes unreachable from the root."""
        reachable = set()
        stack = [root]
        while stack:
            idx = stack.pop()
            if idx in reachable:
                continue
            reachable.add(idx)
            node = self.nodes[idx]
            if isinstance(node, Mul):
                stack.extend((node.left, node.right))
            elif isinstance(node, (Conj, Root, Rewrite)):
                stack.append(node.child)
        keep = sorted(reachable)
        remap = {old: new for new, old in enumerate(keep)}
        pruned = []
        for old in keep:
            node = self.nodes[old]
            if isinstance(node, Mul):
                node = Mul(remap[node.left], remap[node.right])
            elif isinstance(node, Conj):
                node = Conj(remap[node.child], node.by)
            elif isinstance(node, Root):
                node = Root(remap[node.child], node.n, node.claimed, node.witness)
            elif isinstance(node, Rewrite):
                node = Rewrite(remap[node.child], node.target, node.witness)
            pruned.append(node)
        return Certificate(tuple(pruned), remap[root])


@dataclass(frozen=True)
class IQ:
    """The inequality a >= b, witnessed by node (whose word is a^{-1} b)."""

    a: GroupWord
    b: GroupWord
    node: int


class Toolkit:
    """Inequality combinators over a derivation context."""

    def __init__(self, ctx: DerivationContext):
        self.ctx = ctx

    def iq(self, a: GroupWord, b: GroupWord, node: int) -> IQ:
        if self.ctx.words[node] != a.inverse() * b:
            raise InternalInvariantViolation(
                f"node word {self.ctx.words[node].letters} does not witness "
                f"{a.letters} >= {b.letters}"
            )
        return IQ(a, b, node)

    def refl(self, w: GroupWord) -> IQ:
        return IQ(w, w, self.ctx.identity())

    def trans(self, i1: IQ, i2: IQ) -> IQ:
        if i1.b != i2.a:
            raise InternalInvariantViolation(
                f"cannot chain: {i1.b.letters} != {i2.a.letters}"
            )
        if i1.a == i1.b:
            return IQ(i1.a, i2.b, i2.node)
        if i2.a == i2.b:
            return IQ(i1.a, i2.b, i1.node)
        return self.iq(i1.a, i2.b, self.ctx.mul(i1.node, i2.node))

    def chain(self, *iqs: IQ) -> IQ:
        out = iqs[0]
        for nxt in iqs[1:]:
            out = self.trans(out, nxt)
        return out

    def mul(self, i1: IQ, i2: IQ) -> IQ:
        a, b = i1.a * i2.a, i1.b * i2.b
        if i1.a == i1.b:
            return self.iq(a, b, i2.node) if i2.a != i2.b else self.refl(a)
        if i2.a == i2.b:
            return self.iq(a, b, self.ctx.conj(i1.node, i2.a.inverse()))
        shifted = self.ctx.conj(i1.node, i2.a.inverse())
        return self.iq(a, b, self.ctx.mul(shifted, i2.node))

    def product(self, iqs) -> IQ:
        out = None
        for item in iqs:
            out = item if out is None else self.mul(out, item)
        if out is None:
            return self.refl(GroupWord.identity())
        return out

    def lmul(self, u: GroupWord, i1: IQ) -> IQ:
        return self.iq(u * i1.a, u * i1.b, i1.node)

    def rmul(self, i1: IQ, u: GroupWord) -> IQ:
        if i1.a == i1.b:
            return self.refl(i1.a * u)
        return self.iq(i1.a * u, i1.b * u, self.ctx.conj(i1.node, u.inverse()))

    def conj(self, i1: IQ, c: GroupWord) -> IQ:
        if i1.a == i1.b:
            return self.refl(i1.a.conjugated_by(c))
        return self.iq(
            i1.a.conjugated_by(c), i1.b.conjugated_by(c), self.ctx.conj(i1.node, c)
        )


class SuffixMachine:
    """The suffix-tower inequalities shared by the plain and satellite cases.

    Works over any context whose S contains mu^{-1} at index 0 and a slope
    word mu^E lambda at index 1, for the pattern braid B(omega, t, b).
    """

    def __init__(self, ctx: DerivationContext, tk: Toolkit, data: GammaData):
        self.ctx = ctx
        self.tk = tk
        self.data = data
        self.mu = meridian_word()
        self.x = GroupWord.gen("x")
        self.y = GroupWord.gen("y")
        yg0 = self.y * data.g0
        omega = data.omega
        self.yg0 = yg0
        # gtilde[i] = suffix of y g0 of length i (gtilde[omega] is all of it).
        self.gtilde = [GroupWord(yg0.letters[omega - i :]) for i in range(omega + 1)]
        self.F = [None] + [self.mu.conjugated_by(g) for g in data.gs]
        self.ax_mu_inv = ctx.axiom(0)
        self.ax_slope = ctx.axiom(1)
        # x >= y, i.e. x^{-1} y in M: conjugate of the mu^{-1} axiom.
        self.node_x_ge_y = ctx.conj(self.ax_mu_inv, self.x.inverse())
        self.iq_x_ge_y = tk.iq(self.x, self.y, self.node_x_ge_y)

    def step(self, i: int) -> IQ:
        """gtilde_{i+1} >= y gtilde_i (equality when the leading letter is y)."""
        lead = self.gtilde[i + 1].letters[0]
        if lead == ("y", 1):
            return IQ(self.gtilde[i + 1], self.y * self.gtilde[i], self.ctx.identity())
        return self.tk.rmul(self.iq_x_ge_y, self.gtilde[i])

    def fold_steps(self, hi: int, lo: int) -> IQ:
        """gtilde_hi >= y^{hi-lo} gtilde_lo."""
        cur = self.tk.refl(self.gtilde[hi])
        for i in range(hi - 1, lo - 1, -1):
            cur = self.tk.trans(
                cur, self.tk.lmul(self.y.power(hi - 1 - i), self.step(i))
            )
        return cur

    def slope_iq(self, drop: int) -> IQ:
        """mu^{drop} >= y g0, from the slope axiom conjugated by mu^{-N}.

        Requires S[1] = mu^{N - drop} lambda with lambda = y g0 mu^{-N},
        N = omega t + b; then mu^{-N} S[1] mu^{N} reduces to mu^{-drop} y g0.
        """
        n_lk = self.data.omega * self.data.t + self.data.b
        node = self.ctx.conj(self.ax_slope, self.mu.power(-n_lk))
        return self.tk.iq(self.mu.power(drop), self.yg0, node)

    def expand_keep_one(self, word: GroupWord, keep_idx: int) -> IQ:
        """word >= y^j x y^{k-1-j}: weaken every letter to y except one kept x."""
        letters = word.letters
        cur = self.tk.refl(GroupWord.identity())
        for i in range(len(letters) - 1, -1, -1):
            gen, exp = letters[i]
            if exp != 1:
                raise InternalInvariantViolation("expansion needs a positive word")
            cw = GroupWord.gen(gen)
            if i == keep_idx:
                cur = self.tk.lmul(cw, cur)
            elif gen == "y":
                cur = self.tk.lmul(self.y, cur)
            else:
                weaken = self.tk.rmul(self.iq_x_ge_y, cur.a)
                cur = self.tk.trans(weaken, self.tk.lmul(self.y, cur))
        return cur


class _OneBridgeDerivation:
    """Builds the membership certificate for one B(omega, t, b) knot."""

    def __init__(self, omega: int, t: int, b: int):
        braid = one_bridge_braid(omega, t, b)
        genus = positive_closure_genus(braid).genus
        if genus == 0:
            raise DomainError(
                f"B({omega},{t},{b}) closes to the unknot; property (D) "
                "certificates need a nontrivial knot"
            )
        self.omega, self.t, self.b = omega, t, b
        self.genus = genus
        self.pres = one_bridge_presentation(omega, t, b)
        self.data = gamma_word(omega, t, b)
        mu = meridian_word()
        lam = self.pres.peripheral("lambda")
        self.S = [mu.inverse(), mu.power(2 * genus - 1) * lam]
        self.ctx = DerivationContext(self.pres, self.S)
        self.tk = Toolkit(self.ctx)
        self.sm = SuffixMachine(self.ctx, self.tk, self.data)
        self.mu = mu
        self.y = self.sm.y
        # Suffix bookkeeping: which tower index each longitude word has, and
        # how often each suffix occurs among g_1..g_t.
        self.g_index = [
            omega - 1 - self.data.longitude_marks[i] for i in range(t)
        ]  # g_{m} = gtilde[g_index[m-1]]
        self.b_count = [0] * omega
        for idx in self.g_index:
            self.b_count[idx] += 1
        self.l = self.g_index[0]
        # P_full = F_1 ... F_t and the relator bridge to y.
        self.P_full = GroupWord.identity()
        for m in range(1, t + 1):
            self.P_full = self.P_full * self.sm.F[m]
        self._rw_cache = {}

    # -- relator plumbing ---------------------------------------------------

    def _relator_node(self, inverse: bool) -> int:
        if inverse not in self._rw_cache:
            rel = self.pres.relators[0]
            target = rel.inverse() if inverse else rel
            node = self.ctx.rewrite(
                self.ctx.identity(), target, [RelatorInsert(0, inverse, 0)]
            )
            self._rw_cache[inverse] = node
        return self._rw_cache[inverse]

    def iq_y_ge_P(self) -> IQ:
        """y >= F_1 ... F_t (the relator read as a product of conjugates)."""
        node = self.ctx.conj(self._relator_node(inverse=True), self.y.inverse())
        return self.tk.iq(self.y, self.P_full, node)

    def iq_y_ge_kept(self, kept) -> IQ:
        """y >= prod_{m in kept} F_m, dropping the other conjugate factors."""
        tk, ctx = self.tk, self.ctx
        cur = self.iq_y_ge_P()
        current = list(range(1, self.t + 1))
        for d in [m for m in current if m not in kept]:
            tail = GroupWord.identity()
            for m in current:
                if m > d:
                    tail = tail * self.sm.F[m]
            dropped = ctx.conj(
                ctx.conj(self.sm.ax_mu_inv, self._g(d)), tail.inverse()
            )
            before = self._product(current)
            current.remove(d)
            after = self._product(current)
            cur = tk.trans(cur, tk.iq(before, after, dropped))
        return cur

    def _g(self, m: int) -> GroupWord:
        return self.sm.gtilde[self.g_index[m - 1]]

    def _product(self, positions) -> GroupWord:
        out = GroupWord.identity()
        for m in positions:
            out = out * self.sm.F[m]
        return out

    # -- shared chains -------------------------------------------------------

    def ineq_one(self, i: int) -> IQ:
        """gtilde_{i+1} >= (g_1 mu g_1^{-1}) gtilde_i mu^{b_i}, for i != l."""
        kept = [1] + [m for m in range(2, self.t + 1) if self.g_index[m - 1] == i]
        lifted = self.tk.rmul(self.iq_y_ge_kept(kept), self.sm.gtilde[i])
        return self.tk.trans(self.sm.step(i), lifted)

    def fold_ineq(self, hi: int, lo: int) -> IQ:
        """gtilde_hi >= F_1^{hi-lo} gtilde_lo mu^{sum b_i}, folding ineq_one."""
        F1 = self.sm.F[1]
        cur = self.tk.refl(self.sm.gtilde[hi])
        prefix = GroupWord.identity()
        suffix = GroupWord.identity()
        for i in range(hi - 1, lo - 1, -1):
            step = self.tk.lmul(prefix, self.tk.rmul(self.ineq_one(i), suffix))
            cur = self.tk.trans(cur, step)
            prefix = prefix * F1
            suffix = self.mu.power(self.b_count[i]) * suffix
        return cur

    # -- branches ------------------------------------------------------------

    def derive(self) -> int:
        """Returns the index of the final node, whose word is mu."""
        t, b_l = self.t, self.b_count[self.l]
        if t > b_l:
            final = self._branch_main()
        else:
            final = self._branch_t_eq_bl()
        if self.ctx.words[final] != self.mu:
            raise CertGenError("derivation did not end at the meridian")
        return final

    def _root_mu(self, iq_one_ge_muk: IQ, k: int) -> int:
        if k < 1:
            raise CertGenError(f"final exponent {k} admits no root step")
        if iq_one_ge_muk.a != GroupWord.identity() or iq_one_ge_muk.b != self.mu.power(k):
            raise CertGenError("final inequality has an unexpected shape")
        return self.ctx.root_power(iq_one_ge_muk.node, k, self.mu)

    def _branch_main(self) -> int:
        tk, sm = self.tk, self.sm
        omega, t, l = self.omega, self.t, self.l
        mu, y = self.mu, self.y
        b_l = self.b_count[l]
        B_l = sum(self.b_count[i] for i in range(l))
        C_l = sum(self.b_count[i] for i in range(l + 1, omega))
        g1 = sm.gtilde[l]
        F1 = sm.F[1]

        chain_a = self.fold_ineq(l, 0)
        node_a2 = self.ctx.conj(chain_a.node, mu.power(-l))
        chain_a2 = tk.iq(g1, mu.power(l + B_l), node_a2)

        chain_b = self.fold_ineq(omega, l + 1)
        part1 = tk.rmul(chain_a2, mu.power(omega - l - 1))
        part2 = tk.lmul(
            g1.inverse(), tk.rmul(sm.step(l), mu.power(C_l))
        )
        step6 = tk.chain(sm.slope_iq(t + omega), chain_b, tk.mul(part1, part2))
        # mu^{t+omega} >= mu^{omega-1+B} g1^{-1} y g1 mu^{C}
        key = tk.lmul(
            g1,
            tk.rmul(tk.lmul(mu.power(-(omega - 1 + B_l)), step6), mu.power(-C_l)),
        )
        # key: g1 mu^{b_l + 1} >= y g1
        if key.a != g1 * mu.power(b_l + 1) or key.b != y * g1:
            raise CertGenError("key inequality has an unexpected shape")

        # Choose l' (smallest admissible index) and extract F_1-to-l' comparison.
        lp = None
        for cand in range(omega):
            if cand != l and (omega - 1) * self.b_count[cand] >= t - b_l > 0:
                lp = cand
                break
        if lp is None:
            raise CertGenError("no admissible companion index l'")
        glp = sm.gtilde[lp]
        Gp = mu.conjugated_by(glp)
        m0 = next(
            m for m in range(1, t + 1) if self.g_index[m - 1] == lp
        )
        kept2 = sorted(
            [m for m in range(1, t + 1) if self.g_index[m - 1] == l] + [m0]
        )
        j = sum(1 for m in kept2 if m < m0 and self.g_index[m - 1] == l)
        mid = tk.trans(key, tk.rmul(self.iq_y_ge_kept(kept2), g1))
        ex = tk.rmul(
            tk.lmul(mu.power(-j) * g1.inverse(), mid), mu.power(j - b_l)
        )
        extract = tk.conj(ex, g1)
        if extract.a != F1 or extract.b != Gp:
            raise CertGenError("extraction did not isolate the conjugate pair")

        kept3 = sorted(
            m
            for m in range(1, t + 1)
            if self.g_index[m - 1] in (l, lp)
        )
        factors = [
            extract if self.g_index[m - 1] == l else tk.refl(Gp) for m in kept3
        ]
        prod = self.tk.product(factors)
        y_to_gp = tk.trans(self.iq_y_ge_kept(kept3), prod)
        yglp = tk.rmul(y_to_gp, glp)

        D = b_l + self.b_count[lp]
        alpha = tk.lmul(glp, sm.slope_iq(t + omega))
        beta = tk.mul(sm.fold_steps(lp, 0), sm.fold_steps(omega, lp))
        cur = None
        for k in range(omega - 1, -1, -1):
            step = tk.lmul(
                y.power(k), tk.rmul(yglp, mu.power((omega - 1 - k) * D))
            )
            cur = step if cur is None else tk.trans(cur, step)
        gamma = cur
        total = tk.chain(alpha, beta, gamma)
        final = tk.lmul(mu.power(-(t + omega)) * glp.inverse(), total)
        K = omega * D - t - omega
        return self._root_mu(final, K)

    def _branch_t_eq_bl(self) -> int:
        tk, sm = self.tk, self.sm
        omega, t, l = self.omega, self.t, self.l
        mu, y = self.mu, self.y
        g1 = sm.gtilde[l]
        F1 = sm.F[1]

        y_eq = self.iq_y_ge_kept(list(range(1, t + 1)))  # keeps everything
        alpha = tk.lmul(g1, sm.slope_iq(t + omega))
        beta = tk.mul(sm.fold_steps(l, 0), sm.fold_steps(omega, l))
        cur = None
        for k in range(omega - 1, -1, -1):
            step = tk.lmul(
                y.power(k), tk.rmul(y_eq, self.P_full.power(omega - 1 - k) * g1)
            )
            cur = step if cur is None else tk.trans(cur, step)
        combined = tk.chain(alpha, beta, cur)
        final = tk.lmul(mu.power(-(t + omega)) * g1.inverse(), combined)
        K2 = omega * t - t - omega
        if K2 >= 1:
            return self._root_mu(final, K2)
        if t != 1:
            raise CertGenError(
                f"nonpositive exponent {K2} outside the t=1 case"
            )
        return self._branch_t_one()

    def _branch_t_one(self) -> int:
        tk, sm = self.tk, self.sm
        omega, l, b = self.omega, self.l, self.b
        mu, y = self.mu, self.y
        g1 = sm.gtilde[l]
        F1 = sm.F[1]
        if b < 1:
            raise CertGenError("t = 1 with b = 0 is the unknot")

        y_eq_f1 = self.iq_y_ge_kept([1])  # y >= F_1 (t = 1: nothing dropped)
        x_eq = tk.lmul(mu, y_eq_f1)  # x >= mu F_1

        head = GroupWord(sm.yg0.letters[: omega - l])
        expand_word = g1 * head
        keep_idx = next(
            i for i, (gen, _) in enumerate(expand_word.letters) if gen == "x"
        )
        j = keep_idx
        expansion = tk.rmul(sm.expand_keep_one(expand_word, keep_idx), g1)

        subst_factors = []
        for i, (gen, _) in enumerate(expand_word.letters):
            if i == keep_idx:
                subst_factors.append(x_eq)
            else:
                subst_factors.append(y_eq_f1)
        subst = tk.rmul(self.tk.product(subst_factors), g1)

        alpha = tk.lmul(g1, sm.slope_iq(omega + 1))
        combined = tk.chain(alpha, expansion, subst)
        # g1 mu^{omega+1} >= g1 mu^j g1^{-1} mu g1 mu^{omega-j}
        ex = tk.rmul(
            tk.lmul(mu.power(-j) * g1.inverse(), combined), mu.power(j - omega)
        )
        f1_ge_mu = tk.conj(ex, g1)
        if f1_ge_mu.a != F1 or f1_ge_mu.b != mu:
            raise CertGenError("t=1 extraction did not reach F_1 >= mu")
        y_ge_mu = tk.trans(y_eq_f1, f1_ge_mu)
        x_ge_mu2 = tk.lmul(mu, y_ge_mu)

        letter_iqs = [
            y_ge_mu if gen == "y" else x_ge_mu2 for gen, _ in sm.yg0.letters
        ]
        yg0_ge = self.tk.product(letter_iqs)
        final = tk.lmul(
            mu.power(-(omega + 1)), tk.trans(sm.slope_iq(omega + 1), yg0_ge)
        )
        return self._root_mu(final, b - 1)


def property_d_inputs(omega: int, t: int, b: int):
    """The presentation, generating set, and target the certificate refers to."""
    pres = one_bridge_presentation(omega, t, b)
    genus = positive_closure_genus(one_bridge_braid(omega, t, b)).genus
    mu = meridian_word()
    S = [mu.inverse(), mu.power(2 * genus - 1) * pres.peripheral("lambda")]
    return pres, S, mu


def property_d_certificate(omega: int, t: int, b: int) -> Certificate:
    """Certificate that mu lies in M({mu^{-1}, mu^{2g-1} lambda}).

    Validated with check_certificate before being returned; a failure there
    is a generator defect and surfaces as CertGenError.
    """
    deriv = _OneBridgeDerivation(omega, t, b)
    final = deriv.derive()
    cert = deriv.ctx.certificate(final)
    try:
        check_certificate(deriv.pres, deriv.S, deriv.mu, cert)
    except Exception as exc:  # noqa: BLE001 - re-raised with context
        raise CertGenError(f"generated certificate failed validation: {exc}") from exc
    return cert
