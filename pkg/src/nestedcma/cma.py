"""Class memory automata: runs, acceptance and Boolean constructions."""

from __future__ import annotations

import itertools
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import NamedTuple

from .data import BOT, ClassMemory, DataValue, State


class AutomatonError(ValueError):
    """Raised when a description violates its structural invariants."""


def _freeze_transitions(transitions) -> Mapping:
    table: dict = {}
    items = transitions.items() if isinstance(transitions, Mapping) else transitions
    for key, targets in items:
        if isinstance(targets, (str, bytes)) or not isinstance(targets, Iterable):
            targets = (targets,)
        targets = frozenset(targets)
        if targets:
            table[key] = table.get(key, frozenset()) | targets
    return MappingProxyType(table)


@dataclass(frozen=True)
class CMA:
    """A class memory automaton.

    ``transitions`` maps ``(state, letter, remembered)`` to a set of target
    states, where ``remembered`` is a state or :data:`BOT`.  ``silent`` holds
    control-only moves ``(q, q')`` that read nothing.
    """

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
        object.__setattr__(self, "transitions", _freeze_transitions(self.transitions))
        object.__setattr__(self, "silent", frozenset(tuple(p) for p in self.silent))
        self.validate()

    def validate(self) -> None:
        if self.initial not in self.states:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        for q in self.locally_accepting - self.states:
            raise AutomatonError(f"locally accepting {q!r} is not a state")
        for q in self.globally_accepting - self.locally_accepting:
            raise AutomatonError(f"globally accepting {q!r} is not locally accepting")
        for (q, a, s), targets in self.transitions.items():
            if q not in self.states:
                raise AutomatonError(f"transition source {q!r} is not a state")
            if a not in self.alphabet:
                raise AutomatonError(f"letter {a!r} is not in the alphabet")
            if s is not BOT and s not in self.states:
                raise AutomatonError(f"remembered state {s!r} is not a state")
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

    def targets(self, q: State, a, s) -> frozenset:
        return self.transitions.get((q, a, s), frozenset())

    def edges(self):
        """Iterate over ``(q, a, s, q')`` quadruples."""
        for (q, a, s), targets in self.transitions.items():
            for t in targets:
                yield q, a, s, t


def make_cma(states, alphabet, initial, globally_accepting, transitions=(),
             locally_accepting=None, silent=()) -> CMA:
    """Build a CMA from ``(q, a, s, q')`` quadruples; weak when F_L is omitted."""
    table: dict = {}
    for q, a, s, t in transitions:
        table.setdefault((q, a, s), set()).add(t)
    fl = states if locally_accepting is None else locally_accepting
    return CMA(states, alphabet, initial, fl, globally_accepting, table, silent)


class Config(NamedTuple):
    control: State
    memory: ClassMemory


def initial_config(A: CMA) -> Config:
    return Config(A.initial, ClassMemory())


def silent_closure(A: CMA, states: Iterable[State]) -> frozenset:
    seen = set(states)
    todo = list(seen)
    succ: dict = {}
    for p, q in A.silent:
        succ.setdefault(p, []).append(q)
    while todo:
        p = todo.pop()
        for q in succ.get(p, ()):
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return frozenset(seen)


def cma_step(A: CMA, config: Config, entry: tuple) -> set[Config]:
    """Successors of ``config`` on one ``(letter, value)``; silent moves excluded."""
    a, d = entry
    q, f = config
    return {Config(t, f.set(d, t)) for t in A.targets(q, a, f.get(d))}


def is_final(A: CMA, config: Config) -> bool:
    q, f = config
    return q in A.globally_accepting and all(
        s in A.locally_accepting for s in f.values()
    )


def _silent_successors(A: CMA) -> dict:
    succ: dict = {}
    for p, q in A.silent:
        succ.setdefault(p, []).append(q)
    return succ


def find_run(A: CMA, w: Iterable[tuple]) -> list[Config] | None:
    """Return an accepting run (silent moves included) or ``None``.

    The search is exhaustive over the configurations reachable on ``w``; the
    word fixes every data value, so this set is finite.
    """
    w = list(w)
    silent = _silent_successors(A)
    start = initial_config(A)
    parent: dict = {(0, start): None}
    frontier = [start]
    for pos in range(len(w) + 1):
        # silent closure at this position
        stack = list(frontier)
        layer = set(frontier)
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
                    return _rebuild(parent, (pos, c))
            return None
        nxt = set()
        for c in layer:
            for n in cma_step(A, c, w[pos]):
                if n not in nxt:
                    nxt.add(n)
                    parent.setdefault((pos + 1, n), (pos, c))
        frontier = list(nxt)
        if not frontier:
            return None
    return None


def _rebuild(parent: dict, key) -> list:
    run = []
    while key is not None:
        run.append(key[1])
        key = parent[key]
    return run[::-1]


def cma_accepts(A: CMA, w: Iterable[tuple]) -> bool:
    return find_run(A, w) is not None


def eliminate_silent(A: CMA) -> CMA:
    """Equivalent CMA without silent moves.

    Silent moves are pushed in front of the reads that follow them, so the
    memory written by each read is unchanged; trailing silent moves are
    absorbed into the globally accepting set.
    """
    if not A.silent:
        return A
    table: dict = {}
    for q in A.states:
        for p in silent_closure(A, [q]):
            for (src, a, s), targets in A.transitions.items():
                if src == p:
                    table.setdefault((q, a, s), set()).update(targets)
    fg = {q for q in A.states if silent_closure(A, [q]) & A.globally_accepting}
    fl = A.locally_accepting | fg
    if not A.weak and fg - A.locally_accepting:
        # a control state only needs F_L membership if it is ever remembered
        remembered = {t for _, _, _, t in A.edges()}
        bad = (fg - A.locally_accepting) & remembered
        if bad:
            raise AutomatonError(
                "cannot absorb trailing silent moves into remembered states "
                f"{sorted(map(repr, bad))}"
            )
    return CMA(A.states, A.alphabet, A.initial, fl, fg, table)


def make_weak(A: CMA) -> CMA:
    return CMA(A.states, A.alphabet, A.initial, A.states, A.globally_accepting,
               A.transitions, A.silent)


def is_complete(A: CMA) -> bool:
    memories = [BOT, *A.states]
    return all(
        A.targets(q, a, s) for q in A.states for a in A.alphabet for s in memories
    )


def fresh_state(taken: Iterable[Hashable], base: str = "sink") -> str:
    taken = set(taken)
    if base not in taken:
        return base
    for i in itertools.count(1):
        name = f"{base}{i}"
        if name not in taken:
            return name
    raise AssertionError("unreachable")


def complete(A: CMA) -> CMA:
    """Add a rejecting sink so every ``(q, a, s)`` has exactly one successor."""
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
            for s in (BOT, *states):
                table.setdefault((q, a, s), frozenset({sink}))
    return CMA(states, A.alphabet, A.initial, states, A.globally_accepting, table)


def complement_dwcma(A: CMA) -> CMA:
    """Complement of a deterministic, weak, complete CMA (swap F_G)."""
    if not A.deterministic:
        raise AutomatonError("complement needs a deterministic automaton")
    if not A.weak:
        raise AutomatonError("complement needs a weak automaton")
    if not is_complete(A):
        raise AutomatonError("complement needs a complete automaton; call complete()")
    fg = A.states - A.globally_accepting
    return CMA(A.states, A.alphabet, A.initial, A.states, fg, A.transitions)


def product(A: CMA, B: CMA, mode: str = "intersection") -> CMA:
    """Synchronous product on pair states.

    Both factors read the same value at the same time, so a value is either
    fresh for both or remembered by both; guards pair up componentwise.
    """
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
    states = frozenset(itertools.product(A.states, B.states))
    table: dict = {}
    by_a: dict = {}
    for (q, a, s), ts in A.transitions.items():
        by_a.setdefault((q, a), []).append((s, ts))
    by_b: dict = {}
    for (q, a, s), ts in B.transitions.items():
        by_b.setdefault((q, a), []).append((s, ts))
    for (p, q) in states:
        for a in A.alphabet:
            for s, ts in by_a.get((p, a), ()):
                for r, us in by_b.get((q, a), ()):
                    if (s is BOT) != (r is BOT):
                        continue
                    guard = BOT if s is BOT else (s, r)
                    table[((p, q), a, guard)] = frozenset(itertools.product(ts, us))
    silent = {((p, q), (p2, q)) for p, p2 in A.silent for q in B.states}
    silent |= {((p, q), (p, q2)) for q, q2 in B.silent for p in A.states}
    fl = frozenset(itertools.product(A.locally_accepting, B.locally_accepting))
    if mode == "intersection":
        fg = frozenset(itertools.product(A.globally_accepting, B.globally_accepting))
    else:
        fg = frozenset(
            (p, q) for p, q in states
            if p in A.globally_accepting or q in B.globally_accepting
        )
    return CMA(states, A.alphabet, (A.initial, B.initial), fl, fg, table, silent)


def relabel(A: CMA, mapping: Mapping) -> CMA:
    def m(s):
        return BOT if s is BOT else mapping[s]

    table = {
        (m(q), a, m(s)): frozenset(m(t) for t in ts)
        for (q, a, s), ts in A.transitions.items()
    }
    return CMA(
        {m(q) for q in A.states}, A.alphabet, m(A.initial),
        {m(q) for q in A.locally_accepting}, {m(q) for q in A.globally_accepting},
        table, {(m(p), m(q)) for p, q in A.silent},
    )


def trim(A: CMA) -> CMA:
    """Drop control states unreachable in the data-blind transition graph."""
    succ: dict = {}
    for q, _, _, t in A.edges():
        succ.setdefault(q, set()).add(t)
    for p, q in A.silent:
        succ.setdefault(p, set()).add(q)
    seen = {A.initial}
    todo = [A.initial]
    while todo:
        q = todo.pop()
        for t in succ.get(q, ()):
            if t not in seen:
                seen.add(t)
                todo.append(t)
    table = {
        (q, a, s): ts for (q, a, s), ts in A.transitions.items()
        if q in seen and (s is BOT or s in seen)
    }
    return CMA(seen, A.alphabet, A.initial, A.locally_accepting & seen,
               A.globally_accepting & seen, table,
               {(p, q) for p, q in A.silent if p in seen})


def isomorphism(A: CMA, B: CMA) -> dict | None:
    """A state bijection carrying ``A`` onto ``B``, or ``None``.

    Backtracking with a degree/role signature to prune candidates.
    """
    if A.alphabet != B.alphabet or len(A.states) != len(B.states):
        return None
    if len(A.transitions) != len(B.transitions) or len(A.silent) != len(B.silent):
        return None

    def signature(X: CMA, q):
        out = sorted((repr(a), s is BOT, len(ts)) for (p, a, s), ts in X.transitions.items() if p == q)
        inc = sum(1 for e in X.edges() if e[3] == q)
        return (q == X.initial, q in X.locally_accepting, q in X.globally_accepting,
                tuple(out), inc,
                sum(1 for p, _ in X.silent if p == q), sum(1 for _, p in X.silent if p == q))

    sig_b: dict = {}
    for q in B.states:
        sig_b.setdefault(signature(B, q), []).append(q)
    order = sorted(A.states, key=repr)
    cands = {q: sig_b.get(signature(A, q), []) for q in order}
    order.sort(key=lambda q: len(cands[q]))
    mapping: dict = {}
    used: set = set()

    def consistent() -> bool:
        for (q, a, s), ts in A.transitions.items():
            if q in mapping and (s is BOT or s in mapping) and all(t in mapping for t in ts):
                key = (mapping[q], a, BOT if s is BOT else mapping[s])
                if B.transitions.get(key) != frozenset(mapping[t] for t in ts):
                    return False
        for p, q in A.silent:
            if p in mapping and q in mapping and (mapping[p], mapping[q]) not in B.silent:
                return False
        return True

    def go(i: int) -> bool:
        if i == len(order):
            return True
        q = order[i]
        for c in cands[q]:
            if c in used:
                continue
            mapping[q] = c
            used.add(c)
            if consistent() and go(i + 1):
                return True
            del mapping[q]
            used.discard(c)
        return False

    return dict(mapping) if go(0) else None


def check_word(A: CMA, w: Iterable[tuple[object, DataValue]]) -> None:
    for a, d in w:
        if a not in A.alphabet:
            raise AutomatonError(f"letter {a!r} is not in the alphabet")
        if d.level != 1:
            raise AutomatonError(f"{d} is not a flat (level-1) data value")
