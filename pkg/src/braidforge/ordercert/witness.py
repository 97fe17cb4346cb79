"""Word-equality witnesses: checkable derivations of equalities modulo relators.

A witness is a sequence of elementary steps transforming one letter sequence
into another: free cancellations/insertions and deletions/insertions of a
presentation relator (or its inverse) at an explicit position.  Conjugated
relator instances arise from surrounding insertions, so no separate
conjugation step is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import DomainError, InternalInvariantViolation, WitnessError
from ..knotgroup import GroupWord, Presentation

Letter = tuple[str, int]


@dataclass(frozen=True)
class FreeCancel:
    """Delete the inverse pair at positions pos, pos+1."""

    pos: int


@dataclass(frozen=True)
class FreeInsert:
    """Insert the pair (gen^sign, gen^-sign) at pos."""

    pos: int
    gen: str
    sign: int


@dataclass(frozen=True)
class RelatorInsert:
    """Insert relator number `relator` (or its inverse) at pos."""

    relator: int
    inverse: bool
    pos: int


@dataclass(frozen=True)
class RelatorDelete:
    """Delete an exact occurrence of relator number `relator` at pos."""

    relator: int
    inverse: bool
    pos: int


WitnessStep = Union[FreeCancel, FreeInsert, RelatorInsert, RelatorDelete]


def _relator_letters(pres: Presentation, index: int, inverse: bool):
    if not 0 <= index < len(pres.relators):
        raise DomainError(f"relator index {index} out of range")
    rel = pres.relators[index]
    return rel.inverse().letters if inverse else rel.letters


def replay_witness(pres: Presentation, start, steps) -> tuple[Letter, ...]:
    """Replay witness steps on a raw letter sequence; WitnessError on failure."""
    state = list(start)
    gens = set(pres.generators)
    for idx, step in enumerate(steps):
        try:
            if isinstance(step, FreeCancel):
                p = step.pos
                if not 0 <= p <= len(state) - 2:
                    raise DomainError("cancel position out of range")
                (g1, e1), (g2, e2) = state[p], state[p + 1]
                if g1 != g2 or e1 != -e2:
                    raise DomainError(f"letters {state[p]},{state[p + 1]} do not cancel")
                del state[p : p + 2]
            elif isinstance(step, FreeInsert):
                if step.gen not in gens:
                    raise DomainError(f"unknown generator {step.gen!r}")
                if step.sign not in (1, -1):
                    raise DomainError("sign must be +-1")
                if not 0 <= step.pos <= len(state):
                    raise DomainError("insert position out of range")
                state[step.pos : step.pos] = [
                    (step.gen, step.sign),
                    (step.gen, -step.sign),
                ]
            elif isinstance(step, RelatorInsert):
                if not 0 <= step.pos <= len(state):
                    raise DomainError("insert position out of range")
                state[step.pos : step.pos] = list(
                    _relator_letters(pres, step.relator, step.inverse)
                )
            elif isinstance(step, RelatorDelete):
                target = _relator_letters(pres, step.relator, step.inverse)
                p = step.pos
                if not 0 <= p <= len(state) - len(target):
                    raise DomainError("delete position out of range")
                if tuple(state[p : p + len(target)]) != target:
                    raise DomainError("word does not contain the relator there")
                del state[p : p + len(target)]
            else:
                raise DomainError(f"unknown witness step {step!r}")
        except DomainError as exc:
            raise WitnessError(idx, str(exc), tuple(state)) from exc
    return tuple(state)


def check_equality_witness(
    pres: Presentation, frm: GroupWord, to: GroupWord, steps
) -> None:
    """Accept iff replaying the steps carries frm exactly onto to."""
    result = replay_witness(pres, frm.letters, steps)
    if result != to.letters:
        raise WitnessError(
            len(tuple(steps)),
            f"replay ended at {result}, expected {to.letters}",
            result,
        )


def reduction_cancels(raw) -> tuple[list[FreeCancel], tuple[Letter, ...]]:
    """Free-reduction steps for a raw letter sequence (leftmost pair first)."""
    state = list(raw)
    steps: list[FreeCancel] = []
    pos = 0
    while pos < len(state) - 1:
        (g1, e1), (g2, e2) = state[pos], state[pos + 1]
        if g1 == g2 and e1 == -e2:
            del state[pos : pos + 2]
            steps.append(FreeCancel(pos))
            pos = max(pos - 1, 0)
        else:
            pos += 1
    return steps, tuple(state)


def expansion_inserts(raw) -> list[FreeInsert]:
    """Steps carrying the reduced form of `raw` back to `raw` itself."""
    cancels, _ = reduction_cancels(raw)
    inserts: list[FreeInsert] = []
    # Re-run the reduction to capture the letters each cancel removed.
    state = list(raw)
    for step in cancels:
        gen, sign = state[step.pos]
        inserts.append(FreeInsert(step.pos, gen, sign))
        del state[step.pos : step.pos + 2]
    return list(reversed(inserts))


class WitnessBuilder:
    """Builds a witness while tracking the working letter sequence.

    Every emitted step is applied to the internal state, so a finished builder
    is correct by construction; `check_equality_witness` re-verifies anyway.
    """

    def __init__(self, pres: Presentation, start):
        self.pres = pres
        self.state = list(start)
        self.steps: list[WitnessStep] = []

    def _apply(self, step: WitnessStep):
        self.state = list(replay_witness(self.pres, self.state, [step]))
        self.steps.append(step)

    def insert_pair_word(self, pos: int, word: GroupWord):
        """Insert word . word^{-1} at pos, one generator pair at a time."""
        for offset, (gen, sign) in enumerate(word.letters):
            self._apply(FreeInsert(pos + offset, gen, sign))

    def cancel_at(self, pos: int):
        self._apply(FreeCancel(pos))

    def insert_relator(self, pos: int, index: int, inverse: bool = False):
        self._apply(RelatorInsert(index, inverse, pos))

    def delete_relator(self, pos: int, index: int, inverse: bool = False):
        self._apply(RelatorDelete(index, inverse, pos))

    def unreduce_to(self, raw):
        """Expand the current (reduced) state into the unreduced sequence raw."""
        cancels, reduced = reduction_cancels(raw)
        if tuple(self.state) != reduced:
            raise InternalInvariantViolation(
                "unreduce target does not reduce to the current state"
            )
        for step in expansion_inserts(raw):
            self._apply(step)

    def unreduce_segment(self, start: int, length: int, raw):
        """Expand state[start:start+length] into the unreduced sequence raw."""
        cancels, reduced = reduction_cancels(raw)
        if tuple(self.state[start : start + length]) != reduced:
            raise InternalInvariantViolation(
                "segment does not match the reduction of the raw sequence"
            )
        for step in expansion_inserts(raw):
            self._apply(FreeInsert(step.pos + start, step.gen, step.sign))

    def reduce_fully(self):
        while True:
            steps, reduced = reduction_cancels(self.state)
            if not steps:
                break
            for step in steps:
                self._apply(step)
        return tuple(self.state)

    def result(self) -> tuple[WitnessStep, ...]:
        return tuple(self.steps)


def witness_step_to_json(step: WitnessStep) -> dict:
    if isinstance(step, FreeCancel):
        return {"op": "free_cancel", "pos": step.pos}
    if isinstance(step, FreeInsert):
        return {"op": "free_insert", "pos": step.pos, "gen": step.gen, "sign": step.sign}
    if isinstance(step, RelatorInsert):
        return {
            "op": "relator_insert",
            "relator": step.relator,
            "inverse": step.inverse,
            "pos": step.pos,
        }
    if isinstance(step, RelatorDelete):
        return {
            "op": "relator_delete",
            "relator": step.relator,
            "inverse": step.inverse,
            "pos": step.pos,
        }
    raise DomainError(f"unknown witness step {step!r}")


def witness_step_from_json(data: dict) -> WitnessStep:
    try:
        op = data["op"]
        if op == "free_cancel":
            return FreeCancel(int(data["pos"]))
        if op == "free_insert":
            return FreeInsert(int(data["pos"]), str(data["gen"]), int(data["sign"]))
        if op == "relator_insert":
            return RelatorInsert(int(data["relator"]), bool(data["inverse"]), int(data["pos"]))
        if op == "relator_delete":
            return RelatorDelete(int(data["relator"]), bool(data["inverse"]), int(data["pos"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed witness step JSON: {exc}") from exc
    raise DomainError(f"unknown witness op {data.get('op')!r}")
