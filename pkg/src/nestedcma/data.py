"""Data universes, data words, class memory functions, bags and labelled trees.

Data values are compared only by identity and by the parent relation.  A
value is identified by its ancestor path, so two values built from the same
path are the same value.  Level-1 values have no parent; the distinguished
level-0 root used by the tree abstraction and by sugared nested automata is
the module constant :data:`ROOT`, which is never part of an input word.
"""

from __future__ import annotations

import itertools
import threading
from collections.abc import Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Any

State = Hashable
Letter = Hashable

#: Marker for "no memory" (a fresh data value).
BOT = None


class DataError(ValueError):
    """Raised on malformed data values, words or memories."""


@dataclass(frozen=True)
class DataValue:
    name: str
    parent: DataValue | None = None
    level: int = field(default=1, compare=False)

    def __post_init__(self) -> None:
        if self.parent is not None and self.parent.level != self.level - 1:
            raise DataError(f"parent of {self.name!r} must sit one level higher")
        if self.parent is None and self.level > 1:
            raise DataError(f"value {self.name!r} of level {self.level} needs a parent")

    @property
    def path(self) -> tuple[str, ...]:
        if self.parent is None or self.parent.level == 0:
            return (self.name,)
        return self.parent.path + (self.name,)

    def ancestors(self) -> tuple[DataValue, ...]:
        """Values from the level-1 ancestor down to (and including) ``self``."""
        chain = []
        node: DataValue | None = self
        while node is not None and node.level > 0:
            chain.append(node)
            node = node.parent
        return tuple(reversed(chain))

    def __str__(self) -> str:
        return "/".join(self.path)

    def __repr__(self) -> str:
        return f"DataValue({str(self)!r})"


ROOT = DataValue("", None, 0)


def value_from_path(path: str | Iterable[str]) -> DataValue:
    """Build the value named by a slash path such as ``"r1/s2"``."""
    parts = path.split("/") if isinstance(path, str) else list(path)
    if not parts or any(not p for p in parts):
        raise DataError(f"bad data value path {path!r}")
    node = None
    for depth, part in enumerate(parts, start=1):
        node = DataValue(part, node, depth)
    return node


class Universe:
    """A (possibly nested) data universe of bounded level.

    Fresh values are generated under a lock so concurrent callers never
    receive the same value.
    """

    def __init__(self, level: int = 1, prefix: str = "#"):
        if level < 1:
            raise DataError("universe level must be positive")
        self.level = level
        self._prefix = prefix
        self._counter = itertools.count(1)
        self._lock = threading.Lock()

    def fresh(self, parent: DataValue | None = None) -> DataValue:
        if parent is not None and parent.level >= self.level:
            raise DataError(
                f"{parent} already has the maximum level {self.level}; it has no children"
            )
        with self._lock:
            n = next(self._counter)
        level = 1 if parent is None else parent.level + 1
        return DataValue(f"{self._prefix}{n}", parent, level)

    def value(self, path: str | Iterable[str]) -> DataValue:
        d = value_from_path(path)
        if d.level > self.level:
            raise DataError(f"{d} exceeds universe level {self.level}")
        return d


def fresh_value(universe: Universe, parent: DataValue | None = None) -> DataValue:
    return universe.fresh(parent)


class DataWord(tuple):
    """An immutable sequence of ``(letter, value)`` pairs."""

    def __new__(cls, entries: Iterable[tuple[Letter, DataValue]] = ()):
        entries = tuple((a, d) for a, d in entries)
        for _, d in entries:
            if not isinstance(d, DataValue) or d.level < 1:
                raise DataError(f"not a readable data value: {d!r}")
        return super().__new__(cls, entries)

    def letters(self) -> tuple[Letter, ...]:
        """The string projection."""
        return tuple(a for a, _ in self)

    def values(self) -> tuple[DataValue, ...]:
        return tuple(d for _, d in self)

    def max_level(self) -> int:
        return max((d.level for _, d in self), default=0)

    def __add__(self, other):
        return DataWord(tuple(self) + tuple(other))

    def __getitem__(self, item):
        got = super().__getitem__(item)
        return DataWord(got) if isinstance(item, slice) else got

    def __repr__(self) -> str:
        return "DataWord(" + " ".join(f"({a},{d})" for a, d in self) + ")"


def word(*entries: tuple[Letter, str | DataValue]) -> DataWord:
    """Shorthand: ``word(("a", "d1"), ("b", "d1/e"))``."""
    return DataWord(
        (a, d if isinstance(d, DataValue) else value_from_path(d)) for a, d in entries
    )


class _FrozenMap(Mapping):
    __slots__ = ("_data", "_hash")

    def __init__(self, data: Mapping | Iterable = ()):
        self._data = dict(data)
        self._hash = None

    def __getitem__(self, key):
        return self._data[key]

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, _FrozenMap):
            return self._data == other._data
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v!r}" for k, v in self._data.items())
        return f"{type(self).__name__}({{{body}}})"


class ClassMemory(_FrozenMap):
    """Finite map from data values to states; absent values are fresh."""

    def get(self, d, default=BOT):
        return self._data.get(d, default)

    def set(self, d: DataValue, q: State) -> ClassMemory:
        data = dict(self._data)
        if q is BOT:
            data.pop(d, None)
        else:
            data[d] = q
        return ClassMemory(data)

    def update_many(self, pairs: Iterable[tuple[DataValue, State]]) -> ClassMemory:
        data = dict(self._data)
        for d, q in pairs:
            data[d] = q
        return ClassMemory(data)

    def check_parents(self) -> None:
        """Raise unless every mapped value has a mapped parent."""
        for d in self._data:
            if d.level > 1 and d.parent not in self._data:
                raise DataError(f"{d} is mapped but its parent {d.parent} is not")


class Bag(_FrozenMap):
    """Finite map from data values to naturals; absent means zero."""

    def __init__(self, data: Mapping | Iterable = ()):
        super().__init__(data)
        if any(n < 0 for n in self._data.values()):
            raise DataError("bag counts are natural numbers")
        self._data = {d: n for d, n in self._data.items() if n > 0}

    def __getitem__(self, d) -> int:
        return self._data.get(d, 0)

    def get(self, d, default=0):
        return self._data.get(d, default)

    def set(self, d: DataValue, n: int) -> Bag:
        data = dict(self._data)
        data[d] = n
        return Bag(data)


class _RootLabel:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "<root>"

    def __reduce__(self):
        return (_RootLabel, ())


ROOT_LABEL = _RootLabel()


def label_key(label: Any) -> str:
    return repr(label)


class LabelledTree:
    """Finite unordered tree with labelled nodes.

    Children are kept sorted by canonical code, so two trees compare equal
    exactly when they are isomorphic.
    """

    __slots__ = ("label", "children", "code", "size", "depth", "_hash")

    def __init__(self, label: Any, children: Iterable[LabelledTree] = ()):
        kids = sorted(children, key=lambda t: t.code)
        self.label = label
        self.children = tuple(kids)
        self.code = (label_key(label), tuple(k.code for k in kids))
        self.size = 1 + sum(k.size for k in kids)
        self.depth = 1 + max((k.depth for k in kids), default=0)
        self._hash = hash(self.code)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, LabelledTree)
            and self._hash == other._hash
            and self.code == other.code
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: LabelledTree) -> bool:
        return self.code < other.code

    def with_children(self, children: Iterable[LabelledTree]) -> LabelledTree:
        return LabelledTree(self.label, children)

    def relabel(self, label: Any) -> LabelledTree:
        return LabelledTree(label, self.children)

    def nodes(self) -> Iterator[tuple[tuple[int, ...], Any]]:
        """Yield ``(address, label)`` pairs; an address is a child-index path."""
        stack = [((), self)]
        while stack:
            addr, t = stack.pop()
            yield addr, t.label
            for i, k in enumerate(t.children):
                stack.append((addr + (i,), k))

    def parent_map(self) -> dict[tuple[int, ...], tuple[int, ...] | None]:
        return {addr: (addr[:-1] if addr else None) for addr, _ in self.nodes()}

    def labels(self) -> dict[tuple[int, ...], Any]:
        return dict(self.nodes())

    def __repr__(self) -> str:
        if not self.children:
            return repr(self.label) if self.label is not ROOT_LABEL else "<root>"
        inner = ", ".join(repr(k) for k in self.children)
        return f"{self.label!r}[{inner}]"


def tree(label: Any, *children: LabelledTree) -> LabelledTree:
    return LabelledTree(label, children)


def root_tree(*children: LabelledTree) -> LabelledTree:
    return LabelledTree(ROOT_LABEL, children)


def canonical_tree(memory: Mapping[DataValue, State], level_bound: int) -> LabelledTree:
    """Labelled-tree abstraction of a nested class memory function.

    The result contains the level-0 root plus one node per mapped value,
    labelled with its state.  Values related by a renaming of the universe
    give equal trees.
    """
    by_parent: dict[DataValue | None, list[DataValue]] = {}
    for d, q in memory.items():
        if d is ROOT or d.level == 0:
            continue
        if q is BOT:
            continue
        if d.level > level_bound:
            raise DataError(f"{d} is deeper than the level bound {level_bound}")
        if d.level > 1 and memory.get(d.parent, BOT) is BOT:
            raise DataError(f"{d} is mapped but its parent {d.parent} is not")
        by_parent.setdefault(d.parent if d.level > 1 else None, []).append(d)

    def build(d: DataValue) -> LabelledTree:
        return LabelledTree(memory[d], (build(c) for c in by_parent.get(d, ())))

    return LabelledTree(ROOT_LABEL, (build(d) for d in by_parent.get(None, ())))


def multiset_tree(labels: Iterable[Any]) -> LabelledTree:
    """Depth-2 tree whose leaves carry the given labels (a multiset)."""
    return LabelledTree(ROOT_LABEL, (LabelledTree(q) for q in labels))


class _Epsilon:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "eps"

    def __reduce__(self):
        return (_Epsilon, ())


#: Letter that the string projection erases (used by automata simulating
#: epsilon moves of counter automata).
EPS = _Epsilon()


def string_projection(w: Iterable[tuple]) -> tuple:
    return tuple(a for a, _ in w if a is not EPS)
