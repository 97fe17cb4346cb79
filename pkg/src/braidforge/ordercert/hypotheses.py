"""Syntactic hypothesis check for the common-fixed-point propagation rule.

The rule needs one word built from positive letters of two chosen elements
with the first actually present, and a second word built from the inverse of
the first element and positive letters of the second, again with the first
present.  The check is purely syntactic on the given word representatives.
"""

from __future__ import annotations

from ..knotgroup import GroupWord


def fixed_point_hypotheses(
    g3: GroupWord, g4: GroupWord, g1: str, g2: str
) -> bool:
    """True iff g3 is a positive {g1, g2}-word containing g1, and g4 uses only
    g1^{-1} and g2 with at least one g1^{-1}."""
    ok3 = all(
        (gen in (g1, g2)) and exp == 1 for gen, exp in g3.letters
    ) and any(gen == g1 and exp == 1 for gen, exp in g3.letters)
    ok4 = all(
        (gen == g1 and exp == -1) or (gen == g2 and exp == 1)
        for gen, exp in g4.letters
    ) and any(gen == g1 and exp == -1 for gen, exp in g4.letters)
    return ok3 and ok4
