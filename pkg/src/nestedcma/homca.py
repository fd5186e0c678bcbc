"""Higher-order multicounter automata (HOMCA and the restricted HOMCA').

A configuration holds slots ``m_1 .. m_k``; slot ``i`` is ``None`` (undefined)
or a level-``i`` multiset.  Level-1 multisets are sorted tuples of letters and
level-``i`` multisets are sorted tuples of level-``(i-1)`` multisets, so equal
multisets have equal representations.

Also here: the translations between HOMCA and HOMCA' (definedness tracking
one way, folding and unfolding with tagged markers the other way, for levels
up to 3) and the translations between HOMCA' and nested-data CMA.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass
from typing import NamedTuple

from .cma import AutomatonError
from .data import BOT, EPS
from .ndcma import NDCMA, SugaredNDCMA

KINDS = ("new", "inc", "dec", "store", "load")
VARIANTS = ("homca", "homca'")


class Op(NamedTuple):
    kind: str
    arg: object  # a level for new/store/load, a letter for inc/dec

    def __str__(self) -> str:
        return f"{self.kind}_{self.arg}"


def op(kind: str, arg=None) -> Op:
    """Build an op from ``("inc", "a")`` or from text such as ``"store_2"``."""
    if arg is None:
        kind, sep, arg = kind.partition("_")
        if not sep:
            raise AutomatonError(f"cannot parse op {kind!r}")
        if kind in ("new", "store", "load"):
            arg = int(arg)
    if kind not in KINDS:
        raise AutomatonError(f"unknown op kind {kind!r}")
    return Op(kind, arg)


class HomcaTransition(NamedTuple):
    source: object
    letter: object  # an input letter or EPS
    op: Op
    target: object


@dataclass(frozen=True)
class HOMCA:
    level: int
    states: frozenset
    alphabet: frozenset
    multiset_alphabet: frozenset
    initial: object
    accepting: frozenset
    transitions: tuple
    variant: str = "homca"
    weak: bool = False

    def __post_init__(self):
        for name in ("states", "alphabet", "multiset_alphabet", "accepting"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        ts = set()
        for q, a, o, t in self.transitions:
            o = o if isinstance(o, Op) else op(*o) if isinstance(o, tuple) else op(o)
            ts.add(HomcaTransition(q, a, o, t))
        object.__setattr__(self, "transitions", tuple(sorted(ts, key=repr)))
        self.validate()
        index: dict = {}
        for t in self.transitions:
            index.setdefault(t.source, []).append(t)
        object.__setattr__(self, "_out", index)

    def validate(self) -> None:
        k = self.level
        if k < 1:
            raise AutomatonError("the level must be positive")
        if self.variant not in VARIANTS:
            raise AutomatonError(f"variant must be one of {VARIANTS}")
        if self.initial not in self.states or not self.accepting <= self.states:
            raise AutomatonError("initial and accepting states must be states")
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise AutomatonError(f"transition {t} uses unknown states")
            if t.letter is not EPS and t.letter not in self.alphabet:
                raise AutomatonError(f"letter {t.letter!r} is not in the input alphabet")
            kind, arg = t.op
            if kind in ("inc", "dec"):
                if arg not in self.multiset_alphabet:
                    raise AutomatonError(f"{t.op} uses a letter outside the multiset alphabet")
            elif kind == "new":
                if not 1 <= arg <= k:
                    raise AutomatonError(f"{t.op} needs 1 <= i <= {k}")
            elif not 1 <= arg < k:
                raise AutomatonError(f"{t.op} needs 1 <= i < {k}")

    def outgoing(self, q) -> list:
        return self._out.get(q, [])

    @property
    def prime(self) -> bool:
        return self.variant == "homca'"


def make_homca(level, states, alphabet, multiset_alphabet, initial, accepting,
               transitions=(), variant="homca", weak=False) -> HOMCA:
    return HOMCA(level, states, alphabet, multiset_alphabet, initial, accepting,
                 tuple(transitions), variant, weak)


# nested multisets

def _bag(items) -> tuple:
    return tuple(sorted(items, key=repr))


def _add(m: tuple, x) -> tuple:
    return _bag(m + (x,))


def _remove(m: tuple, x) -> tuple | None:
    if x not in m:
        return None
    i = m.index(x)
    return m[:i] + m[i + 1:]


def hereditarily_empty(m, level: int, symbols: frozenset | None = None) -> bool:
    """No letter occurs at any depth (an undefined slot counts as empty).

    With ``symbols`` given, only those letters count.
    """
    if m is None:
        return True
    if level == 1:
        return all(symbols is not None and x not in symbols for x in m)
    return all(hereditarily_empty(x, level - 1, symbols) for x in m)


def size(m, level: int) -> int:
    if m is None:
        return 0
    if level == 1:
        return len(m)
    return 1 + sum(size(x, level - 1) for x in m)


class Config(NamedTuple):
    control: object
    slots: tuple  # m_1 .. m_k


def initial_config(M: HOMCA) -> Config:
    return Config(M.initial, (None,) * M.level)


def cut(slots: tuple) -> int | None:
    """The ``i`` with ``m_1..m_i`` undefined and the rest defined, if any."""
    i = 0
    while i < len(slots) and slots[i] is None:
        i += 1
    if any(s is None for s in slots[i:]):
        return None
    return i


class CutViolation(AssertionError):
    pass


def apply_op(M: HOMCA, slots: tuple, o: Op) -> list[tuple]:
    """All slot tuples reachable by one op (several only for load)."""
    kind, arg = o
    if kind == "inc":
        if slots[0] is None:
            return []
        return [(_add(slots[0], arg),) + slots[1:]]
    if kind == "dec":
        if slots[0] is None:
            return []
        m = _remove(slots[0], arg)
        return [] if m is None else [(m,) + slots[1:]]
    i = arg - 1
    if kind == "new":
        if slots[i] is not None:
            return []
        if M.prime and (any(s is not None for s in slots[:i])
                        or any(s is None for s in slots[i + 1:])):
            return []
        return [slots[:i] + ((),) + slots[i + 1:]]
    if kind == "store":
        if slots[i] is None or slots[i + 1] is None:
            return []
        if M.prime and any(s is not None for s in slots[:i]):
            return []
        out = list(slots)
        out[i + 1] = _add(slots[i + 1], slots[i])
        out[i] = None
        return [tuple(out)]
    # load
    if any(s is not None for s in slots[: i + 1]) or not slots[i + 1]:
        return []
    res = []
    for x in dict.fromkeys(slots[i + 1]):
        out = list(slots)
        out[i + 1] = _remove(slots[i + 1], x)
        out[i] = x
        res.append(tuple(out))
    return res


def homca_step(M: HOMCA, config: Config, letter) -> list[Config]:
    """Successors via transitions reading ``letter`` (``EPS`` for ε-moves)."""
    out = []
    for t in M.outgoing(config.control):
        if t.letter != letter:
            continue
        for slots in apply_op(M, config.slots, t.op):
            if M.prime and cut(slots) is None:
                raise CutViolation(f"{t} broke the cut invariant: {slots}")
            out.append(Config(t.target, slots))
    return out


def is_accepting(M: HOMCA, config: Config) -> bool:
    if config.control not in M.accepting:
        return False
    if M.weak:
        return True
    return all(hereditarily_empty(m, i + 1) for i, m in enumerate(config.slots))


class SearchLimit(RuntimeError):
    """Raised when membership search exceeds its configuration budget."""


def _closure(M: HOMCA, frontier: set, eps_budget: int | None, max_configs: int) -> set:
    seen = set(frontier)
    queue = deque((c, 0) for c in frontier)
    while queue:
        c, depth = queue.popleft()
        if eps_budget is not None and depth >= eps_budget:
            continue
        for n in homca_step(M, c, EPS):
            if n not in seen:
                seen.add(n)
                if len(seen) > max_configs:
                    raise SearchLimit(f"more than {max_configs} configurations")
                queue.append((n, depth + 1))
    return seen


def homca_accepts(M: HOMCA, s: Iterable, eps_budget: int | None = None,
                  max_configs: int = 500_000) -> bool:
    """Is some run over ``s`` (with ε-moves interleaved) accepting?

    Configurations are memoised per position, so the search terminates
    whenever the ε-closures are finite.  ``eps_budget`` bounds the number of
    consecutive ε-moves; ``SearchLimit`` is raised past ``max_configs``.
    """
    frontier = _closure(M, {initial_config(M)}, eps_budget, max_configs)
    for a in s:
        step = {n for c in frontier for n in homca_step(M, c, a)}
        if not step:
            return False
        frontier = _closure(M, step, eps_budget, max_configs)
    return any(is_accepting(M, c) for c in frontier)


def replay(M: HOMCA, transitions: Iterable) -> list[Config]:
    """Configurations along a given transition sequence (first load choice wins
    unless the transition is given as ``(transition, slots)``)."""
    c = initial_config(M)
    out = [c]
    for t in transitions:
        forced = None
        if isinstance(t, tuple) and len(t) == 2 and isinstance(t[0], HomcaTransition):
            t, forced = t
        if t.source != c.control:
            raise AutomatonError(f"{t} does not start in {c.control!r}")
        options = apply_op(M, c.slots, t.op)
        if forced is not None:
            options = [x for x in options if x == forced]
        if not options:
            raise AutomatonError(f"{t} is not enabled at {c}")
        c = Config(t.target, options[0])
        out.append(c)
    return out


# HOMCA' -> HOMCA

def _prime_enabled(o: Op, D: frozenset, k: int) -> frozenset | None:
    """Definedness side conditions of HOMCA'; returns the new defined set."""
    kind, i = o
    if kind in ("inc", "dec"):
        return D if 1 in D else None
    below = set(range(1, i))
    if kind == "new":
        if i in D or below & D or not set(range(i + 1, k + 1)) <= D:
            return None
        return D | {i}
    if kind == "store":
        if i not in D or i + 1 not in D or below & D:
            return None
        return D - {i}
    if set(range(1, i + 1)) & D or i + 1 not in D:
        return None
    return D | {i}


def homca_prime_to_homca(M: HOMCA) -> HOMCA:
    """States ``(q, D)`` with ``D`` the set of defined slots; only reachable pairs."""
    if not M.prime:
        raise AutomatonError("homca_prime_to_homca needs a HOMCA' input")
    start = (M.initial, frozenset())
    states = {start}
    queue = deque([start])
    ts = []
    while queue:
        q, D = queue.popleft()
        for t in M.outgoing(q):
            D2 = _prime_enabled(t.op, D, M.level)
            if D2 is None:
                continue
            nxt = (t.target, D2)
            ts.append(((q, D), t.letter, t.op, nxt))
            if nxt not in states:
                states.add(nxt)
                queue.append(nxt)
    accepting = {s for s in states if s[0] in M.accepting}
    return HOMCA(M.level, states, M.alphabet, M.multiset_alphabet, start, accepting,
                 tuple(ts), "homca", M.weak)


# HOMCA -> HOMCA' (levels up to 3)

TAGS = ("active", "inactive", "mf", "mt", "current", "ghost")


def tag_alphabet(k: int) -> frozenset:
    return frozenset((tag, i) for tag in TAGS for i in range(1, k + 1))


class _Chains:
    """Collects op chains between states, inventing intermediate states."""

    def __init__(self):
        self.transitions: list = []
        self.states: set = set()
        self._n = 0

    def fresh(self):
        self._n += 1
        s = ("mid", self._n)
        self.states.add(s)
        return s

    def chain(self, src, letter, ops, tgt):
        """``src`` reads ``letter`` with the first op; the rest are ε-moves."""
        ops = list(ops)
        if not ops:
            raise AutomatonError("empty op chain")
        self.states.update((src, tgt))
        cur = src
        for n, o in enumerate(ops):
            nxt = tgt if n == len(ops) - 1 else self.fresh()
            self.transitions.append((cur, letter if n == 0 else EPS, o, nxt))
            cur = nxt


def _check(x: str, i: int) -> list[Op]:
    """Ops confirming that the just-loaded level-``i`` multiset carries tag ``(x, i)``."""
    return _retag(x, x, i)


def _mark(x: str, i: int) -> list[Op]:
    """Ops filling a fresh ``m_i`` with its marker ``{(x, i)}^(i-1)``."""
    return _put((x, i), i)


def _swap(old, new, r: int) -> list[Op]:
    """Replace the innermost letter ``old`` of a marker in the open ``m_r`` by ``new``."""
    down = [Op("load", j) for j in range(r - 1, 0, -1)]
    up = [Op("store", j) for j in range(1, r)]
    return down + [Op("dec", old), Op("inc", new)] + up


def _put(letter, r: int) -> list[Op]:
    """Add the marker ``{letter}^(r-1)`` to the open ``m_r``."""
    down = [Op("new", j) for j in range(r - 1, 0, -1)]
    up = [Op("store", j) for j in range(1, r)]
    return down + [Op("inc", letter)] + up


def _retag(old: str, new: str, i: int) -> list[Op]:
    """Change the marker of the open ``m_i`` (with ``m_1..m_{i-1}`` undefined)."""
    return _swap((old, i), (new, i), i)


def _noop(D: frozenset, k: int) -> list[Op]:
    """Ops that always succeed from a simulated configuration and change nothing
    that acceptance cares about."""
    if not D:
        return [Op("new", k)]
    low = min(D)
    if low < k:
        return _check("active", low)
    if k == 1:
        return [Op("inc", ("active", 1)), Op("dec", ("active", 1))]
    return [Op("new", k - 1), Op("store", k - 1)]


def _simulate(op_: Op, D: frozenset, k: int) -> tuple[list[Op], frozenset] | None:
    """HOMCA' ops simulating ``op_`` from defined-set ``D``, except the copy loop.

    Slots ``j >= min(D)`` are defined in the HOMCA' machine; those not in ``D``
    are ghosts.  Markers are kept below the top level only.
    """
    kind, i = op_
    low = min(D) if D else k + 1

    def marker(x, lvl):
        return _mark(x, lvl) if lvl < k else []

    if kind in ("inc", "dec"):
        return ([op_], D) if 1 in D else None
    if kind == "new":
        if i in D:
            return None
        if i < low:
            ops = []
            for j in range(low - 1, i, -1):
                ops += [Op("new", j)] + marker("ghost", j)
            ops += [Op("new", i)] + marker("active", i)
            return ops, D | {i}
        if i == k:
            # the top ghost becomes real: a no-op check carries the letter
            return _noop(D, k), D | {i}
        # a ghost level between defined ones: only level 2 of 3
        ops = _retag("active", "current", 1) + [Op("store", 1)] + \
            _retag("ghost", "active", 2) + [Op("load", 1)] + _check("current", 1) + \
            _retag("current", "active", 1)
        return ops, D | {i}
    if kind == "store":
        if i not in D or i + 1 not in D:
            return None
        if low == i:
            return [op_], D - {i}
        return "fold", D - {i}
    # load
    if low != i + 1:
        return None
    return [op_] + _check("active", i), D | {i}


def _fold_prefix() -> list[Op]:
    """store_2 with m_1 open: tag both, park m_2 in m_3, open a ghost with a copy target."""
    return (
        _retag("active", "mf", 1) + [Op("store", 1)]
        + _retag("active", "mf", 2)
        + [Op("store", 2), Op("new", 2)] + _mark("mt", 2)
        + [Op("new", 1)] + _mark("mt", 1)
        + [Op("store", 1), Op("store", 2), Op("load", 2)] + _check("mf", 2)
        + [Op("load", 1)] + _check("mf", 1)
    )


def _copy_one(g) -> list[Op]:
    """Move one letter ``g`` from the mf-tagged ``m_1`` to the mt-tagged one."""
    return (
        [Op("dec", g), Op("store", 1), Op("store", 2), Op("load", 2)] + _check("mt", 2)
        + [Op("load", 1)] + _check("mt", 1)
        + [Op("inc", g), Op("store", 1), Op("store", 2), Op("load", 2)] + _check("mf", 2)
        + [Op("load", 1)] + _check("mf", 1)
    )


def _fold_suffix() -> list[Op]:
    return (
        _retag("mf", "inactive", 1) + [Op("store", 1)]
        + _retag("mf", "active", 2) + [Op("store", 2)]
        + [Op("load", 2)] + _retag("mt", "ghost", 2)
        + [Op("load", 1)] + _retag("mt", "active", 1)
    )


def homca_to_homca_prime(M: HOMCA, copy_loop: bool = True) -> HOMCA:
    """HOMCA' simulation by folding and unfolding, for levels up to 3.

    The control tracks ``(q, D)`` with ``D`` the slots defined in ``M``;
    HOMCA' slots from ``min(D)`` up are defined, those outside ``D`` being
    ghosts.  Every multiset below the top level carries one marker element
    ``{(x, i)}^(i-1)`` and loads are followed by a check that the loaded
    multiset is active.  Strong machines accept after an ε-move to a state
    that scrubs all tag letters, so leftovers of ``M``'s letters still block
    acceptance.

    ``copy_loop=False`` drops the copy loop of the fold; it exists to test
    that strong acceptance rejects the resulting truncated moves.
    """
    if M.prime:
        raise AutomatonError("homca_to_homca_prime needs a plain HOMCA input")
    k = M.level
    if k > 3:
        raise AutomatonError("homca_to_homca_prime is only defined for levels up to 3")
    tags = tag_alphabet(k)
    if tags & M.multiset_alphabet:
        raise AutomatonError("multiset alphabet clashes with the tag letters")
    C = _Chains()
    start = (M.initial, frozenset())
    C.states.add(start)
    main = {start}
    queue = deque([start])
    while queue:
        q, D = queue.popleft()
        for t in M.outgoing(q):
            sim = _simulate(t.op, D, k)
            if sim is None:
                continue
            ops, D2 = sim
            tgt = (t.target, D2)
            if tgt not in main:
                main.add(tgt)
                queue.append(tgt)
            if ops == "fold":
                loop = C.fresh()
                C.chain((q, D), t.letter, _fold_prefix(), loop)
                if copy_loop:
                    for g in sorted(M.multiset_alphabet, key=repr):
                        C.chain(loop, EPS, _copy_one(g), loop)
                C.chain(loop, EPS, _fold_suffix(), tgt)
            else:
                C.chain((q, D), t.letter, ops, tgt)
    C.states |= main
    accepting = {s for s in main if s[0] in M.accepting}
    if not M.weak:
        fin = ("fin",)
        C.states.add(fin)
        for s in sorted(accepting, key=repr):
            C.chain(s, EPS, _noop(s[1], k), fin)
        for j in range(1, k):
            C.transitions.append((fin, EPS, Op("load", j), fin))
            C.transitions.append((fin, EPS, Op("store", j), fin))
        for t in sorted(tags, key=repr):
            C.transitions.append((fin, EPS, Op("dec", t), fin))
        accepting = {fin}
    return HOMCA(k, C.states, M.alphabet, M.multiset_alphabet | tags, start, accepting,
                 tuple(C.transitions), "homca'", M.weak)


# NDCMA <-> HOMCA'

def ndcma_to_homca_prime(A: NDCMA) -> HOMCA:
    """Level-``k`` HOMCA' whose language is the string projection of ``L(A)``.

    A level-``j`` value in state ``s`` is a level-``(k-j)`` multiset whose
    marker is ``{(s, j)}^(k-j-1)`` and whose other elements are its children;
    level-``k`` values are the letters ``(s, k)``.  The root lives in ``m_k``
    and is opened by a first ε-move.  Each transition loads the path down,
    rewrites the markers, and stores everything back.  Strong machines
    accept after scrubbing the letters of locally accepting states.
    """
    if A.silent:
        raise AutomatonError("eliminate silent moves before translating to HOMCA'")
    k = A.level
    C = _Chains()

    def ctl(q):
        return ("q", q)

    acc = ("acc",)
    init = ("init",)
    chains = []
    for p, a, g, t in sorted(A.edges(), key=repr):
        ops = []
        for j, s in enumerate(g, start=1):
            r = k - j
            new = (t, j)
            if r == 0:
                ops += [Op("inc", new)] if s is BOT else [Op("dec", (s, j)), Op("inc", new)]
            elif s is BOT:
                ops += [Op("new", r)] + _put(new, r)
            else:
                ops += [Op("load", r)] + _swap((s, j), new, r)
        ops += [Op("store", r) for r in range(max(k - len(g), 1), k)]
        chains.append((ctl(p), a, ops, t))
    chains.append((init, EPS, [Op("new", k)], A.initial))
    for src, a, ops, t in chains:
        C.chain(src, a, ops, ctl(t))
        if t in A.globally_accepting:
            C.chain(src, a, ops, acc)
    C.states.update(ctl(q) for q in A.states)
    C.states.update((init, acc))
    letters = {(s, j) for s in A.states for j in range(1, k + 1)}
    if not A.weak:
        for r in range(1, k):
            C.transitions.append((acc, EPS, Op("load", r), acc))
            C.transitions.append((acc, EPS, Op("store", r), acc))
        for s in sorted(A.locally_accepting, key=repr):
            for j in range(1, k + 1):
                C.transitions.append((acc, EPS, Op("dec", (s, j)), acc))
    return HOMCA(k, C.states, A.alphabet, letters, init, {acc}, tuple(C.transitions),
                 "homca'", A.weak)


DEAD = ("dead",)
ON = ("active",)
OFF = ("inactive",)


def level_state(i: int) -> tuple:
    """Root label recording that ``m_i`` is the lowest defined slot."""
    return ("lvl", i)


def symbol_state(b) -> tuple:
    return ("sym", b)


def homca_prime_to_ndcma(M: HOMCA) -> SugaredNDCMA:
    """Sugared level-``k`` NDCMA accepting data words whose projections ``M`` accepts.

    Slot ``m_j`` is a level-``(k-j)`` value: the root for ``m_k``, active
    values (``ON``) on the current path, stored ones ``OFF``.  Letters of
    ``m_1`` are level-``k`` values in ``symbol_state(b)``, moved to ``DEAD``
    when decremented.  The root records the lowest defined slot.  ε-moves
    become transitions reading ``EPS``.
    """
    if not M.prime:
        raise AutomatonError("homca_prime_to_ndcma needs a HOMCA' input")
    k = M.level
    table: dict = {}
    for p, a, (kind, arg), q in M.transitions:
        if kind == "new" and arg == k:
            # the root cannot be read alone: read a fresh value and kill it
            guard, writes = (BOT, BOT), (level_state(k), DEAD)
        elif kind in ("inc", "dec"):
            mid = (ON,) * (k - 1)
            old, new = (BOT, symbol_state(arg)) if kind == "inc" else (symbol_state(arg), DEAD)
            guard = (level_state(1),) + mid + (old,)
            writes = (level_state(1),) + mid + (new,)
        else:
            mid = (ON,) * (k - arg - 1)
            before, after, old, new = {
                "new": (arg + 1, arg, BOT, ON),
                "load": (arg + 1, arg, OFF, ON),
                "store": (arg, arg + 1, ON, OFF),
            }[kind]
            guard = (level_state(before),) + mid + (old,)
            writes = (level_state(after),) + mid + (new,)
        table.setdefault((p, a, guard), set()).add((q, writes))
    tags = {DEAD, ON, OFF} | {level_state(i) for i in range(1, k + 1)}
    symbols = {symbol_state(b) for b in M.multiset_alphabet}
    states = set(M.states) | tags | symbols
    if (tags | symbols) & set(M.states):
        raise AutomatonError("control states clash with the memory states")
    alphabet = set(M.alphabet) | {EPS}
    # control states are never written to memory; listing them keeps F_G inside F_L
    local = states if M.weak else tags | set(M.states)
    return SugaredNDCMA(k, states, alphabet, M.initial, local, M.accepting, table)
