"""Nested-data class memory automata.

Three presentations live here:

* the forest presentation (:class:`NDCMA`): reading a level-``i`` value
  consults the memory of the value and of its ``i - 1`` ancestors, and the
  target state is written to all of them;
* the sugared presentation (:class:`SugaredNDCMA`): guards also see the
  level-0 root and every node on the path gets its own new state;
* the tuple presentation (:class:`TupleNDCMA`) over ``Σ × D^k``, realised
  by converting words to the forest presentation.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

from .cma import CMA, AutomatonError, _freeze_transitions, fresh_state
from .data import (
    BOT, EPS, ROOT, ROOT_LABEL, ClassMemory, DataError, DataValue, DataWord,
    LabelledTree, State, Universe, canonical_tree, value_from_path,
)


def _check_guard(guard: tuple, where: str) -> None:
    seen_bot = False
    for s in guard:
        if s is BOT:
            seen_bot = True
        elif seen_bot:
            raise AutomatonError(
                f"guard {guard!r} in {where} remembers a value under a fresh one; "
                "it can never fire"
            )


@dataclass(frozen=True)
class NDCMA:
    """Nested-data CMA of a given level.

    ``transitions`` maps ``(q, a, guard)`` to target sets, where ``guard`` is
    the tuple of remembered states from the level-1 ancestor down to the
    value read; its length is the level of that value.
    """

    level: int
    states: frozenset
    alphabet: frozenset
    initial: State
    locally_accepting: frozenset
    globally_accepting: frozenset
    transitions: Mapping = field(default_factory=dict)
    silent: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "locally_accepting", frozenset(self.locally_accepting))
        object.__setattr__(self, "globally_accepting", frozenset(self.globally_accepting))
        object.__setattr__(self, "transitions", _freeze_transitions(
            {(q, a, tuple(g)): ts for (q, a, g), ts in dict(self.transitions).items()}
        ))
        object.__setattr__(self, "silent", frozenset(tuple(p) for p in self.silent))
        self.validate()

    def validate(self) -> None:
        if self.level < 1:
            raise AutomatonError("level must be positive")
        if self.initial not in self.states:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        for q in self.locally_accepting - self.states:
            raise AutomatonError(f"locally accepting {q!r} is not a state")
        for q in self.globally_accepting - self.locally_accepting:
            raise AutomatonError(f"globally accepting {q!r} is not locally accepting")
        for (q, a, g), targets in self.transitions.items():
            if q not in self.states:
                raise AutomatonError(f"transition source {q!r} is not a state")
            if a not in self.alphabet:
                raise AutomatonError(f"letter {a!r} is not in the alphabet")
            if not 1 <= len(g) <= self.level:
                raise AutomatonError(f"guard {g!r} has a level outside 1..{self.level}")
            for s in g:
                if s is not BOT and s not in self.states:
                    raise AutomatonError(f"guard state {s!r} is not a state")
            _check_guard(g, f"transition from {q!r}")
            for t in targets - self.states:
                raise AutomatonError(f"transition target {t!r} is not a state")
        for p, q in self.silent:
            if p not in self.states or q not in self.states:
                raise AutomatonError(f"silent move {p!r} -> {q!r} uses unknown states")

    @property
    def weak(self) -> bool:
        return self.locally_accepting == self.states

    @property
    def deterministic(self) -> bool:
        return not self.silent and all(len(t) == 1 for t in self.transitions.values())

    def targets(self, q, a, guard) -> frozenset:
        return self.transitions.get((q, a, tuple(guard)), frozenset())

    def edges(self):
        for (q, a, g), targets in self.transitions.items():
            for t in targets:
                yield q, a, g, t


def make_ndcma(level, states, alphabet, initial, globally_accepting, transitions=(),
               locally_accepting=None, silent=()) -> NDCMA:
    table: dict = {}
    for q, a, g, t in transitions:
        table.setdefault((q, a, tuple(g)), set()).add(t)
    fl = states if locally_accepting is None else locally_accepting
    return NDCMA(level, states, alphabet, initial, fl, globally_accepting, table, silent)


def from_cma(A: CMA) -> NDCMA:
    """The level-1 NDCMA with the same transitions as ``A``."""
    table = {(q, a, (s,)): ts for (q, a, s), ts in A.transitions.items()}
    return NDCMA(1, A.states, A.alphabet, A.initial, A.locally_accepting,
                 A.globally_accepting, table, A.silent)


def to_cma(N: NDCMA) -> CMA:
    if N.level != 1:
        raise AutomatonError("only level-1 NDCMA are plain CMA")
    table = {(q, a, g[0]): ts for (q, a, g), ts in N.transitions.items()}
    return CMA(N.states, N.alphabet, N.initial, N.locally_accepting,
               N.globally_accepting, table, N.silent)


def silent_closure(A: NDCMA, states: Iterable) -> frozenset:
    seen = set(states)
    stack = list(seen)
    while stack:
        p = stack.pop()
        for src, t in A.silent:
            if src == p and t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def eliminate_silent(A: NDCMA) -> NDCMA:
    """Equivalent NDCMA without silent moves.

    Silent moves are pushed in front of the reads that follow them; trailing
    ones are absorbed into the globally accepting set.
    """
    if not A.silent:
        return A
    table: dict = {}
    for q in A.states:
        for p in silent_closure(A, [q]):
            for (src, a, g), targets in A.transitions.items():
                if src == p:
                    table.setdefault((q, a, g), set()).update(targets)
    fg = {q for q in A.states if silent_closure(A, [q]) & A.globally_accepting}
    if not A.weak:
        remembered = {t for _, _, _, t in A.edges()}
        bad = (fg - A.locally_accepting) & remembered
        if bad:
            raise AutomatonError(
                "cannot absorb trailing silent moves into remembered states "
                f"{sorted(map(repr, bad))}"
            )
    return NDCMA(A.level, A.states, A.alphabet, A.initial,
                 A.locally_accepting | fg, fg, table)


class Config(NamedTuple):
    control: State
    memory: ClassMemory


def guard_of(memory: Mapping, d: DataValue) -> tuple:
    return tuple(memory.get(x, BOT) for x in d.ancestors())


def written(d: DataValue, target: State) -> list[tuple[DataValue, State]]:
    """Memory updates performed when ``d`` is read and control moves to ``target``.

    The target state is written to ``d`` and every ancestor.  Writing the
    source state instead would be a one-line change here.
    """
    return [(x, target) for x in d.ancestors()]


def ndcma_step(A: NDCMA, config: Config, entry: tuple) -> set[Config]:
    a, d = entry
    if d.level > A.level:
        return set()
    q, f = config
    out = set()
    for t in A.targets(q, a, guard_of(f, d)):
        f2 = f.update_many(written(d, t))
        f2.check_parents()
        out.add(Config(t, f2))
    return out


def is_final(A: NDCMA, config: Config) -> bool:
    q, f = config
    return q in A.globally_accepting and all(
        s in A.locally_accepting for s in f.values()
    )


def find_run(A: NDCMA, w: Iterable[tuple]) -> list[Config] | None:
    w = list(w)
    silent: dict = {}
    for p, q in A.silent:
        silent.setdefault(p, []).append(q)
    start = Config(A.initial, ClassMemory())
    parent: dict = {(0, start): None}
    frontier = [start]
    for pos in range(len(w) + 1):
        layer = set(frontier)
        stack = list(frontier)
        while stack:
            c = stack.pop()
            for t in silent.get(c.control, ()):
                n = Config(t, c.memory)
                if n not in layer:
                    layer.add(n)
                    parent[(pos, n)] = (pos, c)
                    stack.append(n)
        if pos == len(w):
            for c in sorted(layer, key=repr):
                if is_final(A, c):
                    run, key = [], (pos, c)
                    while key is not None:
                        run.append(key[1])
                        key = parent[key]
                    return run[::-1]
            return None
        nxt: set = set()
        for c in layer:
            for n in ndcma_step(A, c, w[pos]):
                if n not in nxt:
                    nxt.add(n)
                    parent.setdefault((pos + 1, n), (pos, c))
        frontier = list(nxt)
        if not frontier:
            return None
    return None


def ndcma_accepts(A: NDCMA, w: Iterable[tuple]) -> bool:
    return find_run(A, w) is not None


# ---------------------------------------------------------------------------
# Sugared presentation


@dataclass(frozen=True)
class SugaredNDCMA:
    """NDCMA with a level-0 root and per-node writes.

    ``transitions`` maps ``(q, a, guard)`` to a set of ``(q', writes)`` pairs;
    ``guard`` and ``writes`` have length ``i + 1`` for a level-``i`` read and
    start with the root.
    """

    level: int
    states: frozenset
    alphabet: frozenset
    initial: State
    locally_accepting: frozenset
    globally_accepting: frozenset
    transitions: Mapping = field(default_factory=dict)

    def __post_init__(self):
        for name in ("states", "alphabet", "locally_accepting", "globally_accepting"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        table: dict = {}
        for (q, a, g), outs in dict(self.transitions).items():
            table.setdefault((q, a, tuple(g)), set()).update(
                (t, tuple(ws)) for t, ws in outs
            )
        object.__setattr__(self, "transitions", _freeze_transitions(table))
        self.validate()

    def validate(self) -> None:
        if self.initial not in self.states:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        if not self.globally_accepting <= self.locally_accepting <= self.states:
            raise AutomatonError("need F_G ⊆ F_L ⊆ Q")
        for (q, a, g), outs in self.transitions.items():
            if q not in self.states or a not in self.alphabet:
                raise AutomatonError(f"bad transition source ({q!r}, {a!r})")
            if not 2 <= len(g) <= self.level + 1:
                raise AutomatonError(f"guard {g!r} must read a value of level 1..{self.level}")
            _check_guard(g, f"sugared transition from {q!r}")
            for s in g:
                if s is not BOT and s not in self.states:
                    raise AutomatonError(f"guard state {s!r} is not a state")
            for t, ws in outs:
                if t not in self.states or len(ws) != len(g):
                    raise AutomatonError(f"bad write ({t!r}, {ws!r}) for guard {g!r}")
                for s in ws:
                    if s not in self.states:
                        raise AutomatonError(f"written state {s!r} is not a state")

    @property
    def weak(self) -> bool:
        return self.locally_accepting == self.states

    def edges(self):
        for (q, a, g), outs in self.transitions.items():
            for t, ws in outs:
                yield q, a, g, t, ws


def sugared_step(A: SugaredNDCMA, config: Config, entry: tuple) -> set[Config]:
    a, d = entry
    if d.level > A.level:
        return set()
    q, f = config
    path = (ROOT,) + d.ancestors()
    guard = tuple(f.get(x, BOT) for x in path)
    out = set()
    for t, ws in A.transitions.get((q, a, guard), ()):
        out.add(Config(t, f.update_many(zip(path, ws))))
    return out


def sugared_accepts(A: SugaredNDCMA, w: Iterable[tuple]) -> bool:
    frontier = {Config(A.initial, ClassMemory())}
    for entry in w:
        frontier = {n for c in frontier for n in sugared_step(A, c, entry)}
        if not frontier:
            return False
    return any(
        c.control in A.globally_accepting
        and all(s in A.locally_accepting for s in c.memory.values())
        for c in frontier
    )


def desugar(A: SugaredNDCMA) -> NDCMA:
    """Plain NDCMA simulating a sugared one.

    A plain state is ``(q, root, designations)``: the control state, the
    current memory of the root, and the states designated for each node on
    the path just read (top-down).  A value of level ``j`` holding such a
    state is "really" in its ``j``-th designation.  The root lives in the
    control state because there is only one root.

    Local acceptance checks the designation of the deepest node only, so the
    construction is exact for weak machines and for strong machines whose
    designations for proper (non-root) ancestors are locally accepting;
    other strong machines are rejected.
    """
    if not A.weak:
        for q, a, g, t, ws in A.edges():
            bad = [s for s in ws[1:-1] if s not in A.locally_accepting]
            if bad:
                raise AutomatonError(
                    f"transition from {q!r} designates non-locally-accepting {bad[0]!r} "
                    "to an ancestor; not expressible by plain NDCMA state copies"
                )
    if _is_uniform(A):
        return _desugar_uniform(A)

    init = (A.initial, BOT, ())
    written_states = {(t, ws[0], ws[1:]) for _, _, _, t, ws in A.edges()}
    plain = {init} | written_states
    # holders[j][s]: plain states whose level-j designation is s
    holders: dict = {}
    for P in written_states:
        for j, s in enumerate(P[2], start=1):
            holders.setdefault(j, {}).setdefault(s, []).append(P)
    table: dict = {}
    for (q, a, g), outs in A.transitions.items():
        root_guard, path_guard = g[0], g[1:]
        sources = [P for P in plain if P[0] == q and P[1] == root_guard]
        if not sources:
            continue
        options = []
        for j, s in enumerate(path_guard, start=1):
            options.append([BOT] if s is BOT else holders.get(j, {}).get(s, []))
        for combo in itertools.product(*options):
            for P in sources:
                key = (P, a, combo)
                table.setdefault(key, set()).update(
                    (t, ws[0], ws[1:]) for t, ws in outs
                )
    fl = {P for P in plain if P is init or P[2][-1] in A.locally_accepting}
    # the last-read value holds the control state, so F_G must sit inside F_L
    fg = {
        P for P in fl
        if P[0] in A.globally_accepting and (P[1] is BOT or P[1] in A.locally_accepting)
    }
    return NDCMA(A.level, plain, A.alphabet, init, fl, fg, table)


def _is_uniform(A: SugaredNDCMA) -> bool:
    incoming = any(t == A.initial for *_, t, _ in A.edges())
    return not incoming and all(all(s == t for s in ws) for *_, t, ws in A.edges())


def _desugar_uniform(A: SugaredNDCMA) -> NDCMA:
    # every node (root included) receives the target state, so the root
    # always equals the current control state after the first read
    table: dict = {}
    for (q, a, g), outs in A.transitions.items():
        expected_root = BOT if q == A.initial else q
        if g[0] != expected_root:
            continue
        table.setdefault((q, a, g[1:]), set()).update(t for t, _ in outs)
    fg = {q for q in A.globally_accepting}
    return NDCMA(A.level, A.states, A.alphabet, A.initial, A.locally_accepting, fg, table)


def sugar(A: NDCMA) -> SugaredNDCMA:
    """View a plain NDCMA as a sugared one (the root is written but ignored)."""
    if A.silent:
        raise AutomatonError("sugar() needs a machine without silent moves")
    table: dict = {}
    memo = [BOT, *A.states]
    for (q, a, g), ts in A.transitions.items():
        for r in memo:
            if r is BOT and any(s is not BOT for s in g):
                continue  # the root is written by every read
            table.setdefault((q, a, (r,) + g), set()).update(
                (t, (t,) * (len(g) + 1)) for t in ts
            )
    return SugaredNDCMA(A.level, A.states, A.alphabet, A.initial,
                        A.locally_accepting, A.globally_accepting, table)


# ---------------------------------------------------------------------------
# Boolean operations on deterministic weak machines


def guards(level: int, states: Iterable) -> list[tuple]:
    """All well-formed guards up to ``level`` over ``states``."""
    states = sorted(states, key=repr)
    out = []
    for i in range(1, level + 1):
        for known in range(i, -1, -1):
            for prefix in itertools.product(states, repeat=known):
                out.append(tuple(prefix) + (BOT,) * (i - known))
    return out


def is_complete(A: NDCMA) -> bool:
    return all(
        A.targets(q, a, g)
        for q in A.states for a in A.alphabet for g in guards(A.level, A.states)
    )


def complete(A: NDCMA) -> NDCMA:
    if not A.deterministic:
        raise AutomatonError("complete() needs a deterministic automaton")
    if not A.weak:
        raise AutomatonError("complete() is defined for weak automata")
    if is_complete(A):
        return A
    sink = fresh_state(A.states)
    states = A.states | {sink}
    table = dict(A.transitions)
    for q in states:
        for a in A.alphabet:
            for g in guards(A.level, states):
                table.setdefault((q, a, g), frozenset({sink}))
    return NDCMA(A.level, states, A.alphabet, A.initial, states,
                 A.globally_accepting, table)


def ndcma_complement_dw(A: NDCMA) -> NDCMA:
    if not (A.deterministic and A.weak):
        raise AutomatonError("complement needs a deterministic weak automaton")
    if not is_complete(A):
        raise AutomatonError("complement needs a complete automaton; call complete()")
    return NDCMA(A.level, A.states, A.alphabet, A.initial, A.states,
                 A.states - A.globally_accepting, A.transitions)


def ndcma_product(A: NDCMA, B: NDCMA, mode: str = "intersection") -> NDCMA:
    if A.alphabet != B.alphabet:
        raise AutomatonError("product needs equal alphabets")
    if mode not in ("intersection", "union"):
        raise AutomatonError(f"unknown product mode {mode!r}")
    if mode == "union":
        for X in (A, B):
            if not (X.deterministic and X.weak and is_complete(X)):
                raise AutomatonError(
                    "union by product needs deterministic, weak, complete factors"
                )
    level = max(A.level, B.level)
    states = frozenset(itertools.product(A.states, B.states))
    by_b: dict = {}
    for (q, a, g), ts in B.transitions.items():
        by_b.setdefault((q, a, len(g)), []).append((g, ts))
    table: dict = {}
    for (p, a, g), ts in A.transitions.items():
        for q in B.states:
            for h, us in by_b.get((q, a, len(g)), ()):
                if any((x is BOT) != (y is BOT) for x, y in zip(g, h)):
                    continue
                guard = tuple(BOT if x is BOT else (x, y) for x, y in zip(g, h))
                table[((p, q), a, guard)] = frozenset(itertools.product(ts, us))
    silent = {((p, q), (p2, q)) for p, p2 in A.silent for q in B.states}
    silent |= {((p, q), (p, q2)) for q, q2 in B.silent for p in A.states}
    fl = frozenset(itertools.product(A.locally_accepting, B.locally_accepting))
    if mode == "intersection":
        fg = frozenset(itertools.product(A.globally_accepting, B.globally_accepting))
    else:
        fg = frozenset((p, q) for p, q in states
                       if p in A.globally_accepting or q in B.globally_accepting)
    return NDCMA(level, states, A.alphabet, (A.initial, B.initial), fl, fg, table, silent)


# ---------------------------------------------------------------------------
# Tuple presentation


def tuple_to_forest(tw: Iterable[tuple]) -> DataWord:
    """``(a, (d1, ..., dk))`` becomes ``(a, d1/.../dk)``."""
    out = []
    for a, ds in tw:
        ds = (ds,) if isinstance(ds, str) else tuple(ds)
        out.append((a, value_from_path([str(x) for x in ds])))
    return DataWord(out)


def forest_to_tuple(w: Iterable[tuple], k: int | None = None) -> list[tuple]:
    w = list(w)
    if not w:
        return []
    levels = {d.level for _, d in w}
    if k is None:
        k = max(levels)
    if levels != {k}:
        raise DataError(f"mixed-level word: levels {sorted(levels)}, expected all {k}")
    return [(a, d.path) for a, d in w]


@dataclass(frozen=True)
class TupleNDCMA:
    """NDCMA over ``Σ × D^k``: guards and updates see every prefix tuple."""

    level: int
    states: frozenset
    alphabet: frozenset
    initial: State
    locally_accepting: frozenset
    globally_accepting: frozenset
    transitions: Mapping = field(default_factory=dict)

    def to_forest(self) -> NDCMA:
        table = {(q, a, tuple(g)): ts for (q, a, g), ts in dict(self.transitions).items()}
        for (_, _, g) in table:
            if len(g) != self.level:
                raise AutomatonError("tuple-presentation guards must have full length")
        return NDCMA(self.level, self.states, self.alphabet, self.initial,
                     self.locally_accepting, self.globally_accepting, table)


def tuple_ndcma_accepts(A: TupleNDCMA, tw: Iterable[tuple]) -> bool:
    return ndcma_accepts(A.to_forest(), tuple_to_forest(tw))


# ---------------------------------------------------------------------------
# Tree-level semantics (configurations up to renaming of data values)


def _chain(length: int, label) -> LabelledTree:
    node = LabelledTree(label)
    for _ in range(length - 1):
        node = LabelledTree(label, (node,))
    return node


def _rewrite(children: tuple, guard: tuple, target) -> list[tuple]:
    if not guard:
        return [children]
    s, rest = guard[0], guard[1:]
    if s is BOT:
        return [children + (_chain(len(guard), target),)]
    out = []
    seen = set()
    for idx, c in enumerate(children):
        if c.label != s or c.code in seen:
            continue
        seen.add(c.code)
        for kids in _rewrite(c.children, rest, target):
            out.append(children[:idx] + (LabelledTree(target, kids),) + children[idx + 1:])
    return out


def apply_guard(tree: LabelledTree, guard: tuple, target) -> list[LabelledTree]:
    """All trees obtained by reading along a path matching ``guard``."""
    return [tree.with_children(k) for k in _rewrite(tree.children, tuple(guard), target)]


def readable_guards(tree: LabelledTree, level: int) -> list[tuple]:
    """Guards some read can present in a configuration with this tree."""
    paths = {()}
    stack = [(tree, ())]
    while stack:
        node, labels = stack.pop()
        if len(labels) == level:
            continue
        for c in node.children:
            lab = labels + (c.label,)
            paths.add(lab)
            stack.append((c, lab))
    out = {p + (BOT,) * (i - len(p)) for p in paths for i in range(max(len(p), 1), level + 1)}
    return sorted(out, key=repr)


def tree_successors(A: NDCMA, q, tree: LabelledTree, letters=None):
    """Yield ``(edge, q', tree')`` for every one-step successor of ``(q, tree)``.

    Silent moves are reported with edge ``("silent", q, q')``.
    """
    for p, t in A.silent:
        if p == q:
            yield ("silent", p, t), t, tree
    alphabet = sorted(A.alphabet if letters is None else A.alphabet & set(letters), key=repr)
    for g in readable_guards(tree, A.level):
        for a in alphabet:
            ts = A.transitions.get((q, a, g))
            if not ts:
                continue
            for t in sorted(ts, key=repr):
                for new in apply_guard(tree, g, t):
                    yield (q, a, g, t), t, new


def tree_is_final(A: NDCMA, q, tree: LabelledTree) -> bool:
    if q not in A.globally_accepting:
        return False
    return all(lab in A.locally_accepting for addr, lab in tree.nodes() if addr)


def concrete_choices(memory: Mapping, guard: tuple, universe: Universe) -> list[DataValue]:
    """Concrete values whose ancestor memories match ``guard``."""
    level_nodes: dict = {}
    for d in memory:
        if d is not ROOT and d.level >= 1:
            level_nodes.setdefault(d.parent if d.level > 1 else None, []).append(d)
    out = []

    def go(parent, depth):
        s = guard[depth]
        last = depth == len(guard) - 1
        if s is BOT:
            node = universe.fresh(parent)
            for _ in range(len(guard) - depth - 1):
                node = universe.fresh(node)
            out.append(node)
            return
        for d in sorted(level_nodes.get(parent, ()), key=str):
            if memory.get(d) == s:
                if last:
                    out.append(d)
                else:
                    go(d, depth + 1)

    go(None, 0)
    return out


def realise(A: NDCMA, steps: Iterable[tuple], accept=None,
            universe: Universe | None = None) -> DataWord:
    """Turn a tree-level run into a concrete nested data word.

    ``steps`` is a sequence of ``(edge, tree)``; at each step a concrete value
    is chosen whose read produces a memory whose tree satisfies
    ``accept(produced, tree)`` (equality by default).
    """
    accept = accept or (lambda got, want: got == want)
    universe = universe or Universe(A.level, prefix="n")
    memory = ClassMemory()
    entries = []
    for edge, want in steps:
        if edge[0] == "silent":
            continue
        q, a, g, t = edge
        for d in concrete_choices(memory, g, universe):
            m2 = memory.update_many(written(d, t))
            if accept(canonical_tree(m2, A.level), want):
                memory = m2
                entries.append((a, d))
                break
        else:
            raise ValueError(f"cannot realise step {edge} towards {want}")
    return DataWord(entries)


@dataclass
class BoundedResult:
    verdict: str
    witness: DataWord | None = None
    explored: int = 0

    @property
    def nonempty(self) -> bool:
        return self.verdict == "nonempty"


def ndcma_empty_bounded(A: NDCMA, bound: int) -> BoundedResult:
    """Forward search with at most ``bound`` reads and ``bound`` data values."""
    start = (A.initial, LabelledTree(ROOT_LABEL))
    parent: dict = {start: None}
    dist = {start: 0}
    queue = deque([(start, 0)])
    while queue:
        node, steps = queue.popleft()
        if steps > dist[node]:
            continue
        q, tree = node
        if tree_is_final(A, q, tree):
            path = []
            k = node
            while parent[k] is not None:
                prev, edge = parent[k]
                path.append((edge, k[1]))
                k = prev
            return BoundedResult("nonempty", realise(A, reversed(path)), len(parent))
        for edge, t, new in tree_successors(A, q, tree):
            read = edge[0] != "silent"
            cost = steps + read
            if read and (steps >= bound or new.size - 1 > bound):
                continue
            nxt = (t, new)
            if cost < dist.get(nxt, bound + 1):
                dist[nxt] = cost
                parent[nxt] = (node, edge)
                if read:
                    queue.append((nxt, cost))
                else:
                    queue.appendleft((nxt, cost))
    return BoundedResult("unknown", None, len(parent))


class SearchLimit(RuntimeError):
    """Raised when a bounded search exceeds its configuration budget."""


def ndcma_accepts_string(A: NDCMA, letters: Iterable, eps=EPS,
                         max_configs: int = 200_000) -> bool:
    """Is some data word in ``L(A)`` projected onto ``letters``?

    ``eps``-labelled positions are erased by the projection and may be read
    at any point.  Configurations are explored up to renaming of data values.
    """
    letters = tuple(letters)
    start = (0, A.initial, LabelledTree(ROOT_LABEL))
    seen = {start}
    stack = [start]
    while stack:
        pos, q, tree = stack.pop()
        if pos == len(letters) and tree_is_final(A, q, tree):
            return True
        allowed = {eps}
        if pos < len(letters):
            allowed.add(letters[pos])
        for edge, t, new in tree_successors(A, q, tree, letters=allowed):
            adv = edge[0] != "silent" and edge[1] is not eps
            nxt = (pos + adv, t, new)
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > max_configs:
                    raise SearchLimit(f"more than {max_configs} configurations")
                stack.append(nxt)
    return False
