"""Petri nets with optional reset arcs and their encodings into (nested) CMA.

Tokens are data values whose remembered state names the place they sit in.
Without resets a flat CMA suffices.  With resets every place owns a level-1
"bag" value and its tokens are level-2 children of the bag; a reset retires
the bag to a dead state and opens a fresh one.
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .cma import CMA, find_run as cma_find_run
from .coverability import VAS, VasRule
from .data import BOT, DataWord
from .ndcma import NDCMA, find_run as ndcma_find_run


class NetError(ValueError):
    """Raised on malformed nets or disabled firings."""


@dataclass(frozen=True)
class Transition:
    name: str
    inputs: tuple = ()
    outputs: tuple = ()
    resets: tuple = ()


@dataclass(frozen=True)
class PetriNet:
    places: tuple
    transitions: tuple
    initial: tuple = ()
    query: str = "cover"
    target: tuple = ()

    def __post_init__(self):
        known = set(self.places)
        if len(known) != len(self.places):
            raise NetError("duplicate place names")
        if self.query not in ("cover", "reach"):
            raise NetError(f"unknown query kind {self.query!r}")
        names = [t.name for t in self.transitions]
        if len(set(names)) != len(names):
            raise NetError("duplicate transition names")
        for t in self.transitions:
            for p in (*t.inputs, *t.outputs, *t.resets):
                if p not in known:
                    raise NetError(f"transition {t.name} uses unknown place {p!r}")
        for p in (*self.initial, *self.target):
            if p not in known:
                raise NetError(f"marking mentions unknown place {p!r}")

    @property
    def has_resets(self) -> bool:
        return any(t.resets for t in self.transitions)

    def marking(self, tokens: Iterable | Mapping) -> Counter:
        return +Counter(tokens)

    @property
    def initial_marking(self) -> Counter:
        return Counter(self.initial)

    @property
    def target_marking(self) -> Counter:
        return Counter(self.target)

    def transition(self, name: str) -> Transition:
        for t in self.transitions:
            if t.name == name:
                return t
        raise NetError(f"unknown transition {name!r}")


def make_net(places, transitions, initial=None, target=None, query="cover") -> PetriNet:
    """``transitions`` holds ``(name, inputs, outputs[, resets])``; markings are dicts."""

    def expand(m) -> tuple:
        if m is None:
            return ()
        if isinstance(m, Mapping):
            return tuple(p for p in sorted(m) for _ in range(m[p]))
        return tuple(m)

    ts = []
    for name, ins, outs, *rest in transitions:
        ts.append(Transition(name, expand(ins), expand(outs), tuple(rest[0]) if rest else ()))
    return PetriNet(tuple(places), tuple(ts), expand(initial), query, expand(target))


def enabled(net: PetriNet, marking: Mapping, t: Transition) -> bool:
    need = Counter(t.inputs)
    return all(marking.get(p, 0) >= n for p, n in need.items())


def fire(net: PetriNet, marking: Mapping, t: Transition | str) -> Counter:
    if isinstance(t, str):
        t = net.transition(t)
    if not enabled(net, marking, t):
        raise NetError(f"{t.name} is not enabled at {dict(marking)}")
    m = Counter(marking)
    m.subtract(Counter(t.inputs))
    for p in t.resets:
        m[p] = 0
    m.update(Counter(t.outputs))
    return +m


def satisfies(net: PetriNet, marking: Mapping) -> bool:
    target = net.target_marking
    m = +Counter(marking)
    if net.query == "reach":
        return m == target
    return all(m.get(p, 0) >= n for p, n in target.items())


def replay_firings(net: PetriNet, firings: Iterable[str]) -> Counter:
    m = net.initial_marking
    for name in firings:
        m = fire(net, m, name)
    return m


def bounded_search(net: PetriNet, cap: int) -> list[str] | None:
    """Forward search over markings whose places all hold at most ``cap`` tokens.

    Returns a firing sequence reaching a marking that answers the query, or
    ``None`` when none exists within the cap.
    """
    start = net.initial_marking
    key = lambda m: tuple(m.get(p, 0) for p in net.places)
    parent = {key(start): None}
    queue = deque([start])
    while queue:
        m = queue.popleft()
        if satisfies(net, m):
            path, k = [], key(m)
            while parent[k] is not None:
                k, name = parent[k]
                path.append(name)
            return path[::-1]
        for t in net.transitions:
            if not enabled(net, m, t):
                continue
            n = fire(net, m, t)
            if max(n.values(), default=0) > cap:
                continue
            if key(n) not in parent:
                parent[key(n)] = (key(m), t.name)
                queue.append(n)
    return None


def net_to_vas(net: PetriNet) -> VAS:
    """Coverability instance with one counter per place (reset-free nets only)."""
    if net.has_resets:
        raise NetError("reset arcs have no VAS counterpart")
    counters = tuple(net.places)

    def vec(ms) -> tuple:
        c = Counter(ms)
        return tuple(c.get(p, 0) for p in counters)

    rules = tuple(VasRule("run", vec(t.inputs), vec(t.outputs), "run", t.name)
                  for t in net.transitions)
    return VAS(counters, frozenset({"run"}), "run", vec(net.initial), rules,
               (("run", vec(net.target)),))


# ---------------------------------------------------------------------------
# Flat encoding


@dataclass
class Encoding:
    """An encoded automaton plus the bookkeeping needed to decode runs."""

    automaton: object
    hub: str
    completes: dict = field(default_factory=dict)
    token_states: dict = field(default_factory=dict)
    invariant: object = None


class _Namer:
    def __init__(self, prefix: str = "s"):
        self.prefix = prefix
        self.n = 0

    def __call__(self) -> str:
        name = f"{self.prefix}{self.n}"
        self.n += 1
        return name


def _flat(net: PetriNet, weak: bool) -> Encoding:
    if net.has_resets:
        raise NetError("the flat encoding does not handle reset arcs; use the nested one")
    new = _Namer()
    start = new()
    tokens: dict = {p: set() for p in net.places}
    reads: list = []  # (source, guard place or None, target)
    silent: list = []
    completes: dict = {}

    cur = start
    for p in net.initial:
        nxt = new()
        tokens[p].add(nxt)
        reads.append((cur, None, nxt))
        cur = nxt
    if net.initial:
        hub = new()
        silent.append((cur, hub))
    else:
        hub = start

    for t in net.transitions:
        if not t.inputs and not t.outputs:
            continue
        cur = hub
        for p in t.inputs:
            nxt = new()
            reads.append((cur, p, nxt))
            cur = nxt
        for p in t.outputs:
            nxt = new()
            tokens[p].add(nxt)
            reads.append((cur, None, nxt))
            cur = nxt
        completes[cur] = t.name
        silent.append((cur, hub))

    cur = hub
    for p in net.target:
        nxt = new()
        reads.append((cur, p, nxt))
        cur = nxt
    final = cur

    transitions = []
    for src, p, tgt in reads:
        if p is None:
            transitions.append((src, "a", BOT, tgt))
        else:
            transitions.extend((src, "a", s, tgt) for s in sorted(tokens[p]))
    states = {f"s{i}" for i in range(new.n)}
    token_set = set().union(*tokens.values()) if tokens else set()
    fl = states if weak else states - token_set
    table: dict = {}
    for q, a, s, t in transitions:
        table.setdefault((q, a, s), set()).add(t)
    A = CMA(states, {"a"}, start, fl, {final}, table, silent)
    return Encoding(A, hub, completes, tokens)


def encode_reachability_cma(net: PetriNet) -> CMA:
    """Strong CMA nonempty iff the target marking is exactly reachable."""
    return _flat(net, weak=False).automaton


def encode_coverability_wcma(net: PetriNet) -> CMA:
    """Weak CMA nonempty iff the target marking is coverable."""
    return _flat(net, weak=True).automaton


# ---------------------------------------------------------------------------
# Nested encoding (reset arcs allowed)


def _nested(net: PetriNet, weak: bool) -> Encoding:
    new = _Namer("n")
    start = new()
    live: dict = {p: set() for p in net.places}
    token: dict = {p: set() for p in net.places}
    dead: dict = {p: set() for p in net.places}
    clean: dict = {p: set() for p in net.places}
    reads: list = []  # (source, guard spec, target); spec is a tuple of role refs
    silent: list = []
    completes: dict = {}

    def open_bag(cur, p):
        nxt = new()
        live[p].add(nxt)
        reads.append((cur, (None,), nxt))
        return nxt

    def fix(cur, p):
        # the op above also wrote its state to the bag.  Weak machines let
        # that state double as a live-bag label (guards tell levels apart);
        # strong ones need bags and tokens to carry different states.
        if weak:
            live[p].add(cur)
            return cur
        nxt = new()
        live[p].add(nxt)
        reads.append((cur, (("self", cur),), nxt))
        return nxt

    def produce(cur, p):
        nxt = new()
        token[p].add(nxt)
        reads.append((cur, (("live", p), None), nxt))
        return fix(nxt, p)

    def consume(cur, p):
        nxt = new()
        reads.append((cur, (("live", p), ("token", p)), nxt))
        return fix(nxt, p)

    def reset(cur, p):
        nxt = new()
        dead[p].add(nxt)
        reads.append((cur, (("live", p),), nxt))
        return open_bag(nxt, p)

    cur = start
    for p in net.places:
        cur = open_bag(cur, p)
    for p in net.initial:
        cur = produce(cur, p)
    hub = new()
    silent.append((cur, hub))

    for t in net.transitions:
        if not (t.inputs or t.outputs or t.resets):
            continue
        cur = hub
        for p in t.inputs:
            cur = consume(cur, p)
        for p in t.resets:
            cur = reset(cur, p)
        for p in t.outputs:
            cur = produce(cur, p)
        completes[cur] = t.name
        silent.append((cur, hub))

    if not weak:
        for p in net.places:
            if not any(p in t.resets for t in net.transitions):
                continue
            nxt = new()
            clean[p].add(nxt)
            reads.append((hub, (("retired", p), ("token", p)), nxt))
            silent.append((nxt, hub))

    cur = hub
    for p in net.target:
        cur = consume(cur, p)
    final = cur

    roles = {"live": live, "token": token}
    transitions = []
    for src, spec, tgt in reads:
        options: list = []
        for ref in spec:
            if ref is None:
                options.append([BOT])
            elif ref[0] == "self":
                options.append([ref[1]])
            elif ref[0] == "retired":
                options.append(sorted(dead[ref[1]] | clean[ref[1]]))
            else:
                options.append(sorted(roles[ref[0]][ref[1]]))
        guards = [()]
        for opt in options:
            guards = [g + (s,) for g in guards for s in opt]
        transitions.extend((src, "a", g, tgt) for g in guards)
    states = {f"n{i}" for i in range(new.n)}
    token_states = set().union(*token.values())
    fl = states if weak else states - token_states
    table: dict = {}
    for q, a, g, t in transitions:
        table.setdefault((q, a, g), set()).add(t)
    A = NDCMA(2, states, {"a"}, start, fl, {final}, table, silent)
    enc = Encoding(A, hub, completes, token)
    if weak:
        # ops write their own state to the bag only in the weak encoding
        enc.invariant = _bag_invariant(live, {p: dead[p] | clean[p] for p in net.places})
    return enc


def _bag_invariant(live: dict, retired: dict):
    """Downward-closed facts about reachable trees of the weak nested encoding.

    Each place has at most one live bag, every level-1 node carries a bag
    state of one place, and tokens under it carry that place's op states.
    """
    place_of = {s: p for p in live for s in live[p] | retired[p]}
    live_of = {s: p for p in live for s in live[p]}

    def check(control, tree) -> bool:
        seen: set = set()
        for bag in tree.children:
            p = place_of.get(bag.label)
            if p is None:
                return False
            if bag.label in live_of:
                if p in seen:
                    return False
                seen.add(p)
            if any(tok.label not in live[p] for tok in bag.children):
                return False
        return True

    return check


def encode_reset_reachability_ndcma(net: PetriNet) -> NDCMA:
    """Strong level-2 NDCMA nonempty iff the target marking is exactly reachable."""
    return _nested(net, weak=False).automaton


def encode_reset_coverability_weak_ndcma(net: PetriNet) -> NDCMA:
    """Weak level-2 NDCMA nonempty iff the target marking is coverable."""
    return _nested(net, weak=True).automaton


def encode(net: PetriNet, weak: bool | None = None, nested: bool | None = None) -> Encoding:
    """Pick the encoding matching the net's query (weak for coverability)."""
    if weak is None:
        weak = net.query == "cover"
    if nested is None:
        nested = net.has_resets
    return _nested(net, weak) if nested else _flat(net, weak)


def decode_witness(net: PetriNet, w: DataWord, weak: bool | None = None,
                   nested: bool | None = None) -> list[str]:
    """Firing sequence simulated by an accepted witness word.

    The net is re-encoded, an accepting run of the word is found, and every
    visit to the last state of a transition's chain yields one firing.
    """
    enc = encode(net, weak, nested)
    A = enc.automaton
    run = ndcma_find_run(A, w) if isinstance(A, NDCMA) else cma_find_run(A, w)
    if run is None:
        raise NetError("the word is not accepted by the encoding")
    firings = []
    prev = None
    for c in run:
        if c.control in enc.completes and c.control != prev:
            firings.append(enc.completes[c.control])
        prev = c.control
    return firings
