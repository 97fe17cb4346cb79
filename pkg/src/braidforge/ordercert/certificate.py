"""Certificates of membership in root-closed, conjugacy-closed submonoids.

A certificate is a DAG whose nodes witness membership of group elements in
the submonoid M(S) generated by a word list S: the smallest subset of the
group containing S and the identity and closed under products, conjugation,
and taking n-th roots.  Node kinds:

* Axiom(k)            -- the word S[k];
* Identity            -- the empty word;
* Mul(i, j)           -- product of two earlier nodes;
* Conj(i, by)         -- conjugate of an earlier node by an arbitrary word;
* Root(i, n, w, wit)  -- w, where the witness proves w^n equals node i's word;
* Rewrite(i, w, wit)  -- w, where the witness proves w equals node i's word.

Node words are recomputed during checking (they are never trusted from the
input), children must reference strictly earlier nodes, and the root node's
word must equal the target exactly after free reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import CertError, DomainError, WitnessError
from ..knotgroup import GroupWord, Presentation
from .witness import (
    WitnessStep,
    replay_witness,
    witness_step_from_json,
    witness_step_to_json,
)


@dataclass(frozen=True)
class Axiom:
    index: int


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Mul:
    left: int
    right: int


@dataclass(frozen=True)
class Conj:
    child: int
    by: GroupWord


@dataclass(frozen=True)
class Root:
    child: int
    n: int
    claimed: GroupWord
    witness: tuple[WitnessStep, ...]


@dataclass(frozen=True)
class Rewrite:
    child: int
    target: GroupWord
    witness: tuple[WitnessStep, ...]


CertNode = Union[Axiom, Identity, Mul, Conj, Root, Rewrite]


@dataclass(frozen=True)
class Certificate:
    nodes: tuple[CertNode, ...]
    root: int


def check_certificate(
    pres: Presentation, S, target: GroupWord, cert: Certificate
) -> None:
    """Accept iff every node is locally valid and the root word equals target."""
    gens = set(pres.generators)
    axioms = list(S)
    for word in axioms + [target]:
        if not word.generators_used() <= gens:
            raise CertError(-1, "axiom or target uses undeclared generators")
    if not 0 <= cert.root < len(cert.nodes):
        raise CertError(cert.root, "root index out of range")

    words: list[GroupWord] = []
    for idx, node in enumerate(cert.nodes):
        try:
            words.append(_node_word(pres, axioms, words, node, gens))
        except (CertError, DomainError, WitnessError) as exc:
            raise CertError(idx, str(exc)) from exc
    if words[cert.root] != target:
        raise CertError(
            cert.root,
            f"root word {words[cert.root].letters} differs from target {target.letters}",
        )


def _node_word(pres, axioms, words, node, gens) -> GroupWord:
    def child(i):
        if not 0 <= i < len(words):
            raise DomainError(f"child index {i} must reference an earlier node")
        return words[i]

    if isinstance(node, Axiom):
        if not 0 <= node.index < len(axioms):
            raise DomainError(f"axiom index {node.index} out of range")
        return axioms[node.index]
    if isinstance(node, Identity):
        return GroupWord.identity()
    if isinstance(node, Mul):
        return child(node.left) * child(node.right)
    if isinstance(node, Conj):
        if not node.by.generators_used() <= gens:
            raise DomainError("conjugator uses undeclared generators")
        return child(node.child).conjugated_by(node.by)
    if isinstance(node, Root):
        if node.n < 1:
            raise DomainError(f"root exponent must be >= 1, got {node.n}")
        if not node.claimed.generators_used() <= gens:
            raise DomainError("claimed root uses undeclared generators")
        raw = node.claimed.letters * node.n
        result = replay_witness(pres, raw, node.witness)
        if result != child(node.child).letters:
            raise DomainError(
                f"root witness ended at {result}, expected the child word"
            )
        return node.claimed
    if isinstance(node, Rewrite):
        if not node.target.generators_used() <= gens:
            raise DomainError("rewrite target uses undeclared generators")
        result = replay_witness(pres, child(node.child).letters, node.witness)
        if result != node.target.letters:
            raise DomainError(
                f"rewrite witness ended at {result}, expected the target word"
            )
        return node.target
    raise DomainError(f"unknown node {node!r}")


# ---------------------------------------------------------------------------
# JSON packaging: {"S": [...], "target": ..., "nodes": [...], "root": k}
# ---------------------------------------------------------------------------


def _node_to_json(node: CertNode) -> dict:
    if isinstance(node, Axiom):
        return {"kind": "Axiom", "index": node.index}
    if isinstance(node, Identity):
        return {"kind": "Identity"}
    if isinstance(node, Mul):
        return {"kind": "Mul", "args": [node.left, node.right]}
    if isinstance(node, Conj):
        return {"kind": "Conj", "child": node.child, "by": node.by.to_json()}
    if isinstance(node, Root):
        return {
            "kind": "Root",
            "child": node.child,
            "n": node.n,
            "claimed": node.claimed.to_json(),
            "witness": [witness_step_to_json(s) for s in node.witness],
        }
    if isinstance(node, Rewrite):
        return {
            "kind": "Rewrite",
            "child": node.child,
            "target": node.target.to_json(),
            "witness": [witness_step_to_json(s) for s in node.witness],
        }
    raise DomainError(f"unknown node {node!r}")


def _node_from_json(data: dict) -> CertNode:
    try:
        kind = data["kind"]
        if kind == "Axiom":
            return Axiom(int(data["index"]))
        if kind == "Identity":
            return Identity()
        if kind == "Mul":
            left, right = data["args"]
            return Mul(int(left), int(right))
        if kind == "Conj":
            return Conj(int(data["child"]), GroupWord.from_json(data["by"]))
        if kind == "Root":
            return Root(
                int(data["child"]),
                int(data["n"]),
                GroupWord.from_json(data["claimed"]),
                tuple(witness_step_from_json(s) for s in data["witness"]),
            )
        if kind == "Rewrite":
            return Rewrite(
                int(data["child"]),
                GroupWord.from_json(data["target"]),
                tuple(witness_step_from_json(s) for s in data["witness"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed certificate node JSON: {exc}") from exc
    raise DomainError(f"unknown node kind {data.get('kind')!r}")


def certificate_to_json(cert: Certificate, S, target: GroupWord) -> dict:
    return {
        "S": [w.to_json() for w in S],
        "target": target.to_json(),
        "nodes": [_node_to_json(n) for n in cert.nodes],
        "root": cert.root,
    }


def certificate_from_json(data: dict):
    """Returns (S, target, certificate)."""
    try:
        S = [GroupWord.from_json(w) for w in data["S"]]
        target = GroupWord.from_json(data["target"])
        nodes = tuple(_node_from_json(n) for n in data["nodes"])
        root = int(data["root"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed certificate JSON: {exc}") from exc
    return S, target, Certificate(nodes, root)
