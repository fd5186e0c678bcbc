"""Emptiness of weak CMA through coverability of vector addition systems.

Also hosts the bounded forward search used as a semi-decision for strong
CMA emptiness, where a complete procedure would need Petri-net
reachability.
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field

from .cma import (
    CMA, AutomatonError, cma_accepts, complement_dwcma, complete, eliminate_silent,
    product,
)
from .data import BOT, ClassMemory, DataWord, Universe
from .saturation import SaturationResult, saturate


@dataclass(frozen=True)
class VasRule:
    source: Hashable
    dec: tuple
    inc: tuple
    target: Hashable
    label: Hashable = None


@dataclass(frozen=True)
class VAS:
    """Vector addition system with control states and a coverability target."""

    counters: tuple
    states: frozenset
    initial_state: Hashable
    initial: tuple
    rules: tuple
    targets: tuple

    def __post_init__(self):
        n = len(self.counters)
        if len(self.initial) != n:
            raise ValueError("initial valuation has the wrong dimension")
        if self.initial_state not in self.states:
            raise ValueError(f"unknown initial state {self.initial_state!r}")
        for r in self.rules:
            if len(r.dec) != n or len(r.inc) != n:
                raise ValueError(f"rule {r} has the wrong dimension")
            if min(r.dec + r.inc, default=0) < 0:
                raise ValueError(f"rule {r} has negative entries")
            if r.source not in self.states or r.target not in self.states:
                raise ValueError(f"rule {r} uses unknown states")
        for q, v in self.targets:
            if q not in self.states or len(v) != n or min(v, default=0) < 0:
                raise ValueError(f"bad target ({q!r}, {v})")

    def vector(self, valuation: Mapping | Iterable) -> tuple:
        if isinstance(valuation, Mapping):
            counts = Counter(valuation)
        else:
            counts = Counter(valuation)
        unknown = set(counts) - set(self.counters)
        if unknown:
            raise ValueError(f"unknown counters {sorted(map(str, unknown))}")
        return tuple(counts.get(c, 0) for c in self.counters)

    def fire(self, config: tuple, rule: VasRule) -> tuple | None:
        q, v = config
        if q != rule.source or any(x < d for x, d in zip(v, rule.dec)):
            return None
        return rule.target, tuple(x - d + i for x, d, i in zip(v, rule.dec, rule.inc))


def make_vas(counters, states, initial_state, initial, rules, targets) -> VAS:
    """Convenience constructor taking counter multisets as dicts or lists.

    ``rules`` holds ``(source, dec, inc, target)`` or ``(..., label)`` tuples.
    """
    counters = tuple(counters)
    index = {c: i for i, c in enumerate(counters)}

    def vec(spec) -> tuple:
        counts = Counter(spec) if not isinstance(spec, Mapping) else Counter(dict(spec))
        v = [0] * len(counters)
        for c, n in counts.items():
            if c not in index:
                raise ValueError(f"unknown counter {c!r}")
            v[index[c]] += n
        return tuple(v)

    built = []
    for r in rules:
        src, dec, inc, tgt, *rest = r
        built.append(VasRule(src, vec(dec), vec(inc), tgt, rest[0] if rest else None))
    return VAS(
        counters, frozenset(states), initial_state, vec(initial), tuple(built),
        tuple((q, vec(v)) for q, v in targets),
    )


def leq_vec(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def vas_predecessors(V: VAS, element: tuple):
    """Minimal predecessors of ``↑element``: ``max(0, v - inc) + dec`` per rule."""
    q, v = element
    for r in V.rules:
        if r.target != q:
            continue
        pre = tuple(max(0, x - i) + d for x, i, d in zip(v, r.inc, r.dec))
        yield r, (r.source, pre)


@dataclass
class CoverabilityResult:
    coverable: bool
    saturation: SaturationResult
    path: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.coverable


def vas_coverable(V: VAS, record_history: bool = False) -> CoverabilityResult:
    """Backward coverability with a replayable rule sequence as certificate."""
    init = (V.initial_state, V.initial)
    sat = saturate(
        V.targets,
        lambda e: vas_predecessors(V, e),
        leq_vec,
        initial=init,
        record_history=record_history,
    )
    path = [label for label, _ in sat.certificate()] if sat.reached else []
    return CoverabilityResult(sat.reached, sat, path)


def replay(V: VAS, path: Iterable[VasRule]) -> tuple:
    """Fire ``path`` from the initial configuration; raises if a rule is blocked."""
    config = (V.initial_state, V.initial)
    for r in path:
        nxt = V.fire(config, r)
        if nxt is None:
            raise ValueError(f"rule {r} is not enabled at {config}")
        config = nxt
    return config


def covers(V: VAS, config: tuple) -> bool:
    q, v = config
    return any(q == t and leq_vec(tv, v) for t, tv in V.targets)


def forward_coverable(V: VAS, cap: int) -> bool:
    """Brute-force forward search, discarding configurations above ``cap``.

    Finding a covering configuration is conclusive; a negative answer is only
    exact when ``cap`` is large enough for the instance.
    """
    start = (V.initial_state, V.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        if covers(V, c):
            return True
        for r in V.rules:
            n = V.fire(c, r)
            if n is not None and max(n[1], default=0) <= cap and n not in seen:
                seen.add(n)
                queue.append(n)
    return False


def wcma_to_vas(A: CMA) -> VAS:
    """One counter per state, counting the values last seen in that state."""
    if not A.weak:
        raise AutomatonError("wcma_to_vas needs a weak automaton")
    A = eliminate_silent(A)
    counters = tuple(sorted(A.states, key=repr))
    index = {q: i for i, q in enumerate(counters)}
    zero = (0,) * len(counters)

    def unit(q) -> tuple:
        v = list(zero)
        v[index[q]] = 1
        return tuple(v)

    rules = []
    for q, a, s, t in sorted(A.edges(), key=repr):
        dec = zero if s is BOT else unit(s)
        rules.append(VasRule(q, dec, unit(t), t, (q, a, s, t)))
    targets = tuple((q, zero) for q in sorted(A.globally_accepting, key=repr))
    return VAS(counters, A.states, A.initial, zero, tuple(rules), targets)


def word_from_edges(edges: Iterable[tuple], universe: Universe | None = None) -> DataWord:
    """Realise a sequence of CMA edges ``(q, a, s, q')`` as a data word.

    Fresh guards read a new value; a guard ``s`` reads the oldest value
    currently remembered in ``s``.
    """
    universe = universe or Universe(1, prefix="d")
    memory = ClassMemory()
    entries = []
    for q, a, s, t in edges:
        if s is BOT:
            d = universe.fresh()
        else:
            holders = [d for d, p in memory.items() if p == s]
            if not holders:
                raise ValueError(f"no value remembered in {s!r} for edge {(q, a, s, t)}")
            d = holders[0]
        memory = memory.set(d, t)
        entries.append((a, d))
    return DataWord(entries)


@dataclass
class EmptinessResult:
    empty: bool
    witness: DataWord | None = None
    certificate: list = field(default_factory=list)

    @property
    def nonempty(self) -> bool:
        return not self.empty


def wcma_empty(A: CMA) -> EmptinessResult:
    """Decide emptiness of a weak CMA; nonempty answers carry a witness word."""
    V = wcma_to_vas(A)
    res = vas_coverable(V)
    if not res.coverable:
        return EmptinessResult(True, None, [])
    witness = word_from_edges(r.label for r in res.path)
    return EmptinessResult(False, witness, res.path)


def contained_dwcma(A: CMA, B: CMA) -> EmptinessResult:
    """Is ``L(A) ⊆ L(B)``?  Decided as emptiness of ``A ∩ ¬B``.

    A nonempty answer's witness is a word in ``L(A)`` but not in ``L(B)``.
    """
    return wcma_empty(product(A, complement_dwcma(complete(B))))


@dataclass
class EquivalenceResult:
    equivalent: bool
    witness: DataWord | None = None
    side: str | None = None  # "left": witness in L(A) only; "right": in L(B) only

    def __bool__(self) -> bool:
        return self.equivalent


def equiv_dwcma(A: CMA, B: CMA) -> EquivalenceResult:
    """Language equivalence of deterministic weak CMA by two emptiness checks."""
    for side, (X, Y) in (("left", (A, B)), ("right", (B, A))):
        res = contained_dwcma(X, Y)
        if res.nonempty:
            return EquivalenceResult(False, res.witness, side)
    return EquivalenceResult(True)


@dataclass
class BoundedResult:
    verdict: str  # "nonempty" or "unknown"
    witness: DataWord | None = None
    explored: int = 0

    @property
    def nonempty(self) -> bool:
        return self.verdict == "nonempty"


def cma_empty_bounded(A: CMA, bound: int) -> BoundedResult:
    """Forward search over configurations with at most ``bound`` values and reads.

    Configurations are taken up to renaming of data values, i.e. as a control
    state plus the multiset of remembered states.  Never answers "empty".
    """
    silent: dict = {}
    for p, q in A.silent:
        silent.setdefault(p, []).append(q)
    by_src: dict = {}
    for q, a, s, t in A.edges():
        by_src.setdefault(q, []).append((a, s, t))

    def key(q, ms: Counter) -> tuple:
        return q, tuple(sorted(((repr(s), s, n) for s, n in ms.items() if n), key=lambda x: x[0]))

    def final(q, ms: Counter) -> bool:
        return q in A.globally_accepting and all(s in A.locally_accepting for s in ms if ms[s])

    start = (A.initial, Counter())
    k0 = key(*start)
    parent: dict = {k0: None}
    states = {k0: start}
    dist = {k0: 0}
    # 0-1 BFS: silent moves cost nothing, reads cost one step
    queue = deque([(k0, 0)])
    while queue:
        k, steps = queue.popleft()
        if steps > dist[k]:
            continue
        q, ms = states[k]
        if final(q, ms):
            return BoundedResult("nonempty", _realise(parent, k), len(parent))
        moves = [(None, q2, ms) for q2 in silent.get(q, ())]
        if steps < bound:
            for a, s, t in by_src.get(q, ()):
                if s is BOT:
                    if sum(ms.values()) >= bound:
                        continue
                    m2 = ms.copy()
                    m2[t] += 1
                elif ms.get(s, 0) > 0:
                    m2 = ms.copy()
                    m2[s] -= 1
                    m2[t] += 1
                else:
                    continue
                moves.append(((q, a, s, t), t, m2))
        for edge, q2, m2 in moves:
            k2 = key(q2, m2)
            cost = steps + (edge is not None)
            if cost < dist.get(k2, bound + 1):
                dist[k2] = cost
                parent[k2] = (k, edge)
                states[k2] = (q2, m2)
                if edge is None:
                    queue.appendleft((k2, cost))
                else:
                    queue.append((k2, cost))
    return BoundedResult("unknown", None, len(parent))


def _realise(parent: dict, k) -> DataWord:
    edges = []
    while parent[k] is not None:
        k, edge = parent[k]
        if edge is not None:
            edges.append(edge)
    return word_from_edges(reversed(edges))


def verify_witness(A: CMA, w: DataWord) -> bool:
    return cma_accepts(A, w)
