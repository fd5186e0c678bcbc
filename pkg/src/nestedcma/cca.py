"""Class counting automata and their translations to and from weak CMA."""

from __future__ import annotations

import operator
from collections.abc import Iterable
from dataclasses import dataclass
from typing import NamedTuple

from .cma import CMA, AutomatonError, eliminate_silent
from .data import BOT, Bag, State

OPS = {"=": operator.eq, "!=": operator.ne, "<": operator.lt, ">": operator.gt}
ALIASES = {"≠": "!=", "==": "="}
ACTIONS = ("inc", "set")


class Constraint(NamedTuple):
    op: str
    bound: int

    def holds(self, n: int) -> bool:
        return OPS[self.op](n, self.bound)

    def __str__(self) -> str:
        return f"({self.op} {self.bound})"


def constraint(op: str, bound: int) -> Constraint:
    op = ALIASES.get(op, op)
    if op not in OPS:
        raise AutomatonError(f"unknown constraint operator {op!r}")
    if bound < 0:
        raise AutomatonError("constraint bounds are natural numbers")
    return Constraint(op, int(bound))


class CcaTransition(NamedTuple):
    source: State
    letter: object
    guard: Constraint
    action: str
    amount: int
    target: State


@dataclass(frozen=True)
class CCA:
    states: frozenset
    alphabet: frozenset
    initial: State
    accepting: frozenset
    transitions: tuple

    def __post_init__(self):
        for name in ("states", "alphabet", "accepting"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        ts = []
        for t in self.transitions:
            src, a, g, act, m, tgt = t
            g = g if isinstance(g, Constraint) else constraint(*g)
            ts.append(CcaTransition(src, a, g, act, int(m), tgt))
        object.__setattr__(self, "transitions", tuple(sorted(set(ts), key=repr)))
        self.validate()

    def validate(self) -> None:
        if self.initial not in self.states:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        for q in self.accepting - self.states:
            raise AutomatonError(f"accepting {q!r} is not a state")
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise AutomatonError(f"transition {t} uses unknown states")
            if t.letter not in self.alphabet:
                raise AutomatonError(f"letter {t.letter!r} is not in the alphabet")
            if t.action not in ACTIONS:
                raise AutomatonError(f"unknown action {t.action!r}")
            if t.amount < 0:
                raise AutomatonError("update amounts are natural numbers")

    @property
    def max_constant(self) -> int:
        """The greatest integer occurring in the transitions."""
        return max((max(t.guard.bound, t.amount) for t in self.transitions), default=0)


class Config(NamedTuple):
    control: State
    bag: Bag


def cca_step(A: CCA, config: Config, entry: tuple) -> set[Config]:
    a, d = entry
    q, h = config
    n = h[d]
    out = set()
    for t in A.transitions:
        if t.source == q and t.letter == a and t.guard.holds(n):
            value = n + t.amount if t.action == "inc" else t.amount
            out.add(Config(t.target, h.set(d, value)))
    return out


def cca_accepts(A: CCA, w: Iterable[tuple]) -> bool:
    frontier = {Config(A.initial, Bag())}
    for entry in w:
        frontier = {n for c in frontier for n in cca_step(A, c, entry)}
        if not frontier:
            return False
    return any(c.control in A.accepting for c in frontier)


def cca_is_deterministic(A: CCA) -> bool:
    """Do the guards leaving each ``(q, a)`` partition the naturals?

    Values above the largest constant behave alike, so checking the
    representatives ``0 .. n0 + 1`` suffices.
    """
    reps = range(A.max_constant + 2)
    for q in A.states:
        for a in A.alphabet:
            out = [t for t in A.transitions if t.source == q and t.letter == a]
            for n in reps:
                if sum(t.guard.holds(n) for t in out) != 1:
                    return False
    return True


def state_numbering(A: CMA) -> dict:
    return {q: i for i, q in enumerate(sorted(A.states, key=repr), start=1)}


def wcma_to_cca(A: CMA) -> CCA:
    """The bag holds the number of the state a value was last seen in.

    The highest-numbered state is tested with ``> n - 1`` instead of ``= n``;
    counts never exceed ``n`` so the language is unchanged, and deterministic
    complete inputs give guards that partition the naturals.
    """
    if not A.weak:
        raise AutomatonError("wcma_to_cca needs a weak automaton")
    A = eliminate_silent(A)
    num = state_numbering(A)
    top = len(num)
    ts = []
    for q, a, s, t in A.edges():
        if s is BOT:
            g = Constraint("=", 0)
        elif num[s] == top:
            g = Constraint(">", top - 1)
        else:
            g = Constraint("=", num[s])
        ts.append((q, a, g, "set", num[t], t))
    return CCA(A.states, A.alphabet, A.initial, A.globally_accepting, tuple(ts))


def cca_to_wcma(A: CCA) -> CMA:
    """States ``Q × {0..n0+1}``; the second component tracks the last-read value's counter."""
    cap = A.max_constant + 1
    N = range(cap + 1)
    states = {(q, i) for q in A.states for i in N}
    table: dict = {}

    def add(key, target):
        table.setdefault(key, set()).add(target)

    for t in A.transitions:
        for i in N:
            src = (t.source, i)
            if t.guard.holds(0):
                add((src, t.letter, BOT), (t.target, min(t.amount, cap)))
            for l in N:
                if not t.guard.holds(l):
                    continue
                j = min(l + t.amount, cap) if t.action == "inc" else min(t.amount, cap)
                for q2 in A.states:
                    add((src, t.letter, (q2, l)), (t.target, j))
    accepting = {(q, i) for q in A.accepting for i in N}
    return CMA(states, A.alphabet, (A.initial, 0), states, accepting, table)
