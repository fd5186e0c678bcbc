"""Data automata (plain, locally prefix-closed, and k-nested): membership only.

A data automaton pairs a letter-to-letter transducer with a class
automaton.  A word is accepted when some accepting run of the transducer
produces an output whose restriction to every class is accepted by the class
automaton.  Class automata are simulated by subset construction per class,
so membership is a single forward pass over the word.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .cma import AutomatonError
from .data import DataValue


@dataclass(frozen=True)
class NFA:
    states: frozenset
    alphabet: frozenset
    initial: frozenset
    final: frozenset
    transitions: frozenset  # (p, letter, p')

    def __post_init__(self):
        for name in ("states", "alphabet", "initial", "final"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        if not (self.initial | self.final) <= self.states:
            raise AutomatonError("initial and final states must be states")
        for p, b, r in self.transitions:
            if p not in self.states or r not in self.states or b not in self.alphabet:
                raise AutomatonError(f"bad NFA transition {(p, b, r)}")

    def step(self, current: frozenset, b) -> frozenset:
        return frozenset(r for p, c, r in self.transitions if p in current and c == b)

    def accepts_set(self, current: frozenset) -> bool:
        return bool(current & self.final)

    def accepts(self, letters: Iterable) -> bool:
        cur = self.initial
        for b in letters:
            cur = self.step(cur, b)
        return self.accepts_set(cur)


@dataclass(frozen=True)
class Transducer:
    """Letter-to-letter transducer; transitions are ``(q, a, b, q')``."""

    states: frozenset
    input_alphabet: frozenset
    output_alphabet: frozenset
    initial: object
    accepting: frozenset
    transitions: frozenset

    def __post_init__(self):
        for name in ("states", "input_alphabet", "output_alphabet", "accepting"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in self.transitions))
        if self.initial not in self.states or not self.accepting <= self.states:
            raise AutomatonError("transducer initial/accepting states must be states")
        for q, a, b, r in self.transitions:
            if q not in self.states or r not in self.states:
                raise AutomatonError(f"bad transducer transition {(q, a, b, r)}")
            if a not in self.input_alphabet or b not in self.output_alphabet:
                raise AutomatonError(f"bad letters in transducer transition {(q, a, b, r)}")

    def moves(self, q, a):
        for p, x, b, r in self.transitions:
            if p == q and x == a:
                yield b, r


@dataclass(frozen=True)
class DataAutomaton:
    base: Transducer
    classes: NFA

    def __post_init__(self):
        if not self.classes.alphabet >= self.base.output_alphabet:
            raise AutomatonError("class automaton must read the transducer's output alphabet")

    @property
    def prefix_closed(self) -> bool:
        return self.classes.final == self.classes.states


@dataclass(frozen=True)
class NestedDataAutomaton:
    base: Transducer
    levels: tuple  # class automata B_1 .. B_k

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if not self.levels:
            raise AutomatonError("a nested data automaton needs at least one level")
        for B in self.levels:
            DataAutomaton(self.base, B)

    @property
    def k(self) -> int:
        return len(self.levels)


def _freeze(d: dict) -> frozenset:
    return frozenset(d.items())


def nda_accepts(D: NestedDataAutomaton, w: Iterable[tuple]) -> bool:
    """Membership for words over ``Σ × D^k`` given as ``(a, (d1, ..., dk))``."""
    w = [(a, tuple(ds)) for a, ds in w]
    for a, ds in w:
        if len(ds) != D.k:
            raise AutomatonError(f"position ({a}, {ds}) does not carry {D.k} data values")
    # configuration: transducer state plus, per level, class -> subset of B_i states
    start = (D.base.initial, tuple(frozenset() for _ in D.levels))
    frontier = {start}
    for a, ds in w:
        nxt = set()
        for q, memo in frontier:
            for b, r in D.base.moves(q, a):
                new_memo = []
                for i, B in enumerate(D.levels):
                    m = dict(memo[i])
                    key = ds[: i + 1]
                    m[key] = B.step(m.get(key, B.initial), b)
                    new_memo.append(_freeze(m))
                nxt.add((r, tuple(new_memo)))
        frontier = nxt
        if not frontier:
            return False
    return any(
        q in D.base.accepting
        and all(B.accepts_set(S) for B, lvl in zip(D.levels, memo) for _, S in lvl)
        for q, memo in frontier
    )


def da_accepts(D: DataAutomaton, w: Iterable[tuple]) -> bool:
    """Membership for flat data words ``(a, d)``."""
    tw = []
    for a, d in w:
        if isinstance(d, DataValue) and d.level != 1:
            raise AutomatonError(f"{d} is not a flat data value")
        tw.append((a, (d,)))
    return nda_accepts(NestedDataAutomaton(D.base, (D.classes,)), tw)
