"""Emptiness of weak nested-data CMA by backward saturation over labelled trees.

A configuration is abstracted as ``(control, tree)`` where the tree is the
canonical labelled tree of the class memory (see :func:`canonical_tree`).
Trees are ordered by injective, root-, parent- and label-preserving
embeddings; the predecessor basis below is the one that order needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .cma import AutomatonError
from .data import BOT, ROOT_LABEL, DataWord, LabelledTree, label_key
from .ndcma import NDCMA, ndcma_accepts, realise
from .saturation import SaturationResult, saturate


@lru_cache(maxsize=200_000)
def census(t: LabelledTree) -> dict:
    """How many nodes carry each label at each depth."""
    out: dict = {}
    stack = [(0, t)]
    while stack:
        depth, node = stack.pop()
        key = (depth, node.code[0])
        out[key] = out.get(key, 0) + 1
        stack.extend((depth + 1, c) for c in node.children)
    return out


def tree_leq(small: LabelledTree, big: LabelledTree) -> bool:
    """Does ``small`` embed injectively into ``big`` (roots to roots)?"""
    if small is big or small == big:
        return True
    if small.label != big.label or small.size > big.size or small.depth > big.depth:
        return False
    have = census(big)
    if any(have.get(k, 0) < n for k, n in census(small).items()):
        return False
    return _embeds(small, big)


@lru_cache(maxsize=500_000)
def _embeds(small: LabelledTree, big: LabelledTree) -> bool:
    if small.label != big.label or small.size > big.size:
        return False
    kids = small.children
    if not kids:
        return True
    if len(kids) > len(big.children):
        return False
    options = [
        [j for j, b in enumerate(big.children) if _embeds(k, b)] for k in kids
    ]
    # bipartite matching by augmenting paths
    owner: dict[int, int] = {}

    def augment(i: int, seen: set) -> bool:
        for j in options[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in owner or augment(owner[j], seen):
                owner[j] = i
                return True
        return False

    order = sorted(range(len(kids)), key=lambda i: len(options[i]))
    return all(augment(i, set()) for i in order)


def state_leq(s, t) -> bool:
    return s[0] == t[0] and tree_leq(s[1], t[1])


def _branch(labels: tuple) -> LabelledTree | None:
    node = None
    for lab in reversed(labels):
        node = LabelledTree(lab, () if node is None else (node,))
    return node


def _known_prefix(guard: tuple) -> tuple:
    out = []
    for s in guard:
        if s is BOT:
            break
        out.append(s)
    return tuple(out)


def _is_chain(t: LabelledTree, label, length: int) -> bool:
    if length < 1 or t.label != label or len(t.children) > 1:
        return False
    if not t.children:
        return True
    return _is_chain(t.children[0], label, length - 1)


def _pred_children(children: tuple, guard: tuple, target) -> list[tuple]:
    """Child tuples of minimal trees that step to something above ``children``.

    Either the matched path stops here and the rest of the guard becomes a
    fresh branch, or it continues into a child labelled ``target``.
    """
    out = []
    branch = _branch(_known_prefix(guard))
    out.append(children + (branch,) if branch is not None else children)
    if not guard:
        return out
    s, rest = guard[0], guard[1:]
    seen = set()
    for idx, c in enumerate(children):
        if c.label != target or c.code in seen:
            continue
        seen.add(c.code)
        others = children[:idx] + children[idx + 1:]
        if s is BOT:
            # a fresh node in the successor: it and its path descendants vanish
            if _is_chain(c, target, len(guard)):
                out.append(others)
        else:
            for sub in _pred_children(c.children, rest, target):
                out.append(others + (LabelledTree(s, sub),))
    return out


def pred_basis(A: NDCMA, element: tuple):
    """Yield ``(edge, predecessor)`` pairs forming a basis of ``pre(↑element)``."""
    q, T = element
    if T.label is not ROOT_LABEL:
        raise AutomatonError("WSTS states need a tree rooted at the level-0 node")
    if T.depth > A.level + 1:
        raise AutomatonError(f"tree deeper than level {A.level} allows")
    for p, t in sorted(A.silent, key=repr):
        if t == q:
            yield ("silent", p, t), (p, T)
    for (p, a, g), ts in sorted(A.transitions.items(), key=repr):
        if q not in ts:
            continue
        for kids in _pred_children(T.children, g, q):
            yield (p, a, g, q), (p, T.with_children(kids))


def reachable_labels(A: NDCMA) -> dict:
    """Over-approximate which ``(depth, label)`` pairs occur at each control state.

    Labels only accumulate along runs, so a union fixpoint is sound; a tree
    using a pair outside the set of its control is unreachable, and so is
    everything above it.
    """
    seen: dict = {A.initial: frozenset()}
    queue = [A.initial]
    out_edges: dict = {}
    for p, a, g, t in A.edges():
        out_edges.setdefault(p, []).append((g, t))
    for p, t in A.silent:
        out_edges.setdefault(p, []).append((None, t))
    while queue:
        p = queue.pop()
        have = seen[p]
        for g, t in out_edges.get(p, ()):
            if g is None:
                new = have
            else:
                if any(s is not BOT and (j, s) not in have for j, s in enumerate(g, 1)):
                    continue
                new = have | {(j, t) for j in range(1, len(g) + 1)}
            old = seen.get(t)
            if old is None or not new <= old:
                seen[t] = new if old is None else old | new
                queue.append(t)
    return seen


def label_invariant(A: NDCMA):
    """``invariant(control, tree)`` built from :func:`reachable_labels`."""
    table = {
        q: frozenset((d, label_key(s)) for d, s in pairs)
        for q, pairs in reachable_labels(A).items()
    }

    def check(control, tree) -> bool:
        allowed = table.get(control)
        if allowed is None:
            return False
        return all(key in allowed for key in census(tree) if key[0] > 0)

    return check


def root_only() -> LabelledTree:
    return LabelledTree(ROOT_LABEL)


@dataclass
class WstsResult:
    empty: bool
    saturation: SaturationResult
    certificate: list = field(default_factory=list)
    witness: DataWord | None = None

    @property
    def nonempty(self) -> bool:
        return not self.empty


def ndcma_weak_empty(A: NDCMA, record_history: bool = False,
                     max_elements: int | None = None, invariant=None,
                     prune_labels: bool = True) -> WstsResult:
    """Decide emptiness of a weak NDCMA.

    Nonempty answers carry the backward certificate (edge, tree) pairs and a
    concrete witness word obtained by replaying it forward.

    ``invariant(control, tree)``, when given, must hold of every reachable
    configuration and of everything below one.  Basis candidates failing it
    are dropped: no reachable configuration dominates them, so the verdict
    is unchanged.  ``prune_labels`` adds the same kind of filter computed
    from :func:`reachable_labels`.
    """
    if not A.weak:
        raise AutomatonError("ndcma_weak_empty needs a weak automaton")
    targets = [(q, root_only()) for q in A.globally_accepting]
    init = (A.initial, root_only())

    checks = [c for c in (invariant, label_invariant(A) if prune_labels else None) if c]

    def preds(e):
        for label, p in pred_basis(A, e):
            if all(c(*p) for c in checks):
                yield label, p

    sat = saturate(
        targets,
        preds,
        tree_leq,
        initial=init,
        record_history=record_history,
        max_elements=max_elements,
    )
    if not sat.reached:
        return WstsResult(True, sat)
    chain = sat.certificate()
    steps = [(edge, nxt[1]) for edge, nxt in chain]
    witness = realise(A, steps, accept=lambda got, want: tree_leq(want, got))
    if not ndcma_accepts(A, witness):
        raise AssertionError("certificate replay produced a rejected word")
    return WstsResult(False, sat, chain, witness)


def format_certificate(chain: list) -> str:
    """One line per step: the transition taken and the tree it must dominate."""
    lines = []
    for edge, (q, tree) in chain:
        if edge[0] == "silent":
            step = f"silent {edge[1]} -> {edge[2]}"
        else:
            p, a, g, t = edge
            guard = ",".join("bot" if s is BOT else str(s) for s in g)
            step = f"{p} {a} level {len(g)} [{guard}] -> {t}"
        lines.append(f"{step}\t{q} {tree!r}")
    return "\n".join(lines)
