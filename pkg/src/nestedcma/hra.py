"""Non-reset history register automata and their translations to and from weak CMA."""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass
from typing import NamedTuple

from .cma import CMA, AutomatonError, eliminate_silent, is_complete, trim
from .data import BOT, ClassMemory, State


class HraTransition(NamedTuple):
    source: State
    letter: object
    read: frozenset
    write: frozenset
    target: State


def subsets(m: int) -> list[frozenset]:
    items = range(1, m + 1)
    return [frozenset(c) for r in range(m + 1) for c in itertools.combinations(items, r)]


@dataclass(frozen=True)
class NrHRA:
    """Non-reset HRA of type ``m`` with initially empty histories 1..m."""

    m: int
    states: frozenset
    alphabet: frozenset
    initial: State
    accepting: frozenset
    transitions: tuple

    def __post_init__(self):
        for name in ("states", "alphabet", "accepting"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        ts = {HraTransition(q, a, frozenset(X), frozenset(Y), t)
              for q, a, X, Y, t in self.transitions}
        object.__setattr__(self, "transitions", tuple(sorted(ts, key=repr)))
        self.validate()

    def validate(self) -> None:
        if self.m < 1:
            raise AutomatonError("the type m must be positive")
        if self.initial not in self.states:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        for q in self.accepting - self.states:
            raise AutomatonError(f"accepting {q!r} is not a state")
        places = set(range(1, self.m + 1))
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise AutomatonError(f"transition {t} uses unknown states")
            if t.letter not in self.alphabet:
                raise AutomatonError(f"letter {t.letter!r} is not in the alphabet")
            if not (t.read <= places and t.write <= places):
                raise AutomatonError(f"transition {t} mentions histories outside 1..{self.m}")

    @property
    def deterministic(self) -> bool:
        """For every ``(q, a, X)`` there is exactly one ``(Y, q')``."""
        count: dict = {}
        for t in self.transitions:
            key = (t.source, t.letter, t.read)
            count[key] = count.get(key, 0) + 1
        return all(
            count.get((q, a, X), 0) == 1
            for q in self.states for a in self.alphabet for X in subsets(self.m)
        )


class Config(NamedTuple):
    control: State
    histories: ClassMemory  # value -> nonempty frozenset of history indices


def nrhra_step(A: NrHRA, config: Config, entry: tuple) -> set[Config]:
    a, d = entry
    q, H = config
    X = H.get(d, frozenset())
    out = set()
    for t in A.transitions:
        if t.source == q and t.letter == a and t.read == X:
            out.add(Config(t.target, H.set(d, t.write or BOT)))
    return out


def nrhra_accepts(A: NrHRA, w: Iterable[tuple]) -> bool:
    frontier = {Config(A.initial, ClassMemory())}
    for entry in w:
        frontier = {n for c in frontier for n in nrhra_step(A, c, entry)}
        if not frontier:
            return False
    return any(c.control in A.accepting for c in frontier)


def history_view(H: ClassMemory, m: int) -> dict[int, frozenset]:
    """The assignment ``i -> H(i)`` as sets of values."""
    out = {i: set() for i in range(1, m + 1)}
    for d, X in H.items():
        for i in X:
            out[i].add(d)
    return {i: frozenset(v) for i, v in out.items()}


def wcma_to_nrhra(A: CMA) -> NrHRA:
    """History ``i`` holds the values last seen in the ``i``-th state.

    For deterministic complete inputs, every unreachable read set with two
    or more histories gets an inert self-loop so the result is deterministic
    in the total sense.
    """
    if not A.weak:
        raise AutomatonError("wcma_to_nrhra needs a weak automaton")
    A = eliminate_silent(A)
    order = sorted(A.states, key=repr)
    num = {q: i for i, q in enumerate(order, start=1)}
    m = len(order)
    ts = []
    for q, a, s, t in A.edges():
        X = frozenset() if s is BOT else frozenset({num[s]})
        ts.append((q, a, X, frozenset({num[t]}), t))
    if A.deterministic and is_complete(A):
        for q in A.states:
            for a in A.alphabet:
                for X in subsets(m):
                    if len(X) >= 2:
                        ts.append((q, a, X, X, q))
    return NrHRA(m, A.states, A.alphabet, A.initial, A.globally_accepting, tuple(ts))


def nrhra_to_wcma(A: NrHRA) -> CMA:
    """States ``(q, Z)``; a value remembered in ``(p, X)`` sits in exactly the histories ``X``.

    The control component ``Z`` only records the write set of the previous
    step so that the value just read remembers it.  Unreachable states are
    trimmed.
    """
    all_sets = subsets(A.m)
    states = {(q, Z) for q in A.states for Z in all_sets}
    table: dict = {}
    for t in A.transitions:
        tgt = (t.target, t.write)
        for Z in all_sets:
            src = (t.source, Z)
            guards = [(p, t.read) for p in A.states]
            if not t.read:
                guards.append(BOT)
            for g in guards:
                table.setdefault((src, t.letter, g), set()).add(tgt)
    accepting = {(q, Z) for q in A.accepting for Z in all_sets}
    out = CMA(states, A.alphabet, (A.initial, frozenset()), states, accepting, table)
    return trim(out)
