"""Backward saturation for well-structured transition systems.

Shared by the counter (VAS) engine and the labelled-tree engine.  An
element is a pair ``(control, payload)``; the caller supplies the order on
payloads and the per-element predecessor basis.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Hashable, Iterable
from dataclasses import dataclass, field


class SaturationLimit(RuntimeError):
    """The basis outgrew ``max_elements``; ``basis`` holds the partial basis."""

    def __init__(self, message: str, basis: list):
        super().__init__(message)
        self.basis = basis


@dataclass
class SaturationResult:
    basis: list
    origin: dict
    covering: tuple | None = None
    iterations: int = 0
    history: list = field(default_factory=list)

    @property
    def reached(self) -> bool:
        return self.covering is not None

    def certificate(self, element=None) -> list[tuple[Hashable, tuple]]:
        """``[(label, next_element), ...]`` from ``element`` to a target."""
        node = self.covering if element is None else element
        chain = []
        while self.origin.get(node) is not None:
            label, nxt = self.origin[node]
            chain.append((label, nxt))
            node = nxt
        return chain


def saturate(
    targets: Iterable[tuple],
    predecessors: Callable[[tuple], Iterable[tuple[Hashable, tuple]]],
    leq: Callable[[object, object], bool],
    initial: tuple | None = None,
    sort_key: Callable = repr,
    record_history: bool = False,
    max_elements: int | None = None,
) -> SaturationResult:
    """Compute a finite basis of the states that can reach ``↑targets``.

    ``predecessors(e)`` yields ``(label, p)`` pairs with ``p`` a minimal
    predecessor of ``↑e`` via the step named ``label``.  When ``initial`` is
    given the loop stops as soon as it is covered.
    """
    basis: dict = {}
    origin: dict = {}
    queue: deque = deque()

    def dominated(e) -> bool:
        return any(leq(b, e[1]) for b in basis.get(e[0], ()))

    def insert(e, why) -> bool:
        if dominated(e):
            return False
        bucket = basis.setdefault(e[0], [])
        bucket[:] = [b for b in bucket if not leq(e[1], b)]
        bucket.append(e[1])
        origin.setdefault(e, why)
        queue.append(e)
        return True

    def covering():
        if initial is None:
            return None
        for b in basis.get(initial[0], ()):
            if leq(b, initial[1]):
                return (initial[0], b)
        return None

    result = SaturationResult([], origin)
    for t in sorted(set(targets), key=sort_key):
        insert(t, None)
    hit = covering()
    iterations = 0
    while queue and hit is None:
        e = queue.popleft()
        if e[1] not in basis.get(e[0], ()):
            continue
        iterations += 1
        preds = sorted(set(predecessors(e)), key=lambda lp: sort_key(lp[1]))
        for label, p in preds:
            if insert(p, (label, e)) and initial is not None:
                if p[0] == initial[0] and leq(p[1], initial[1]):
                    hit = p
                    break
        if record_history:
            result.history.append([(q, b) for q, bs in basis.items() for b in bs])
        if max_elements is not None and sum(map(len, basis.values())) > max_elements:
            partial = [(q, b) for q, bs in basis.items() for b in bs]
            raise SaturationLimit(f"saturation exceeded {max_elements} basis elements", partial)
    if hit is None:
        hit = covering()
    result.basis = sorted(
        ((q, b) for q, bs in basis.items() for b in bs), key=sort_key
    )
    result.covering = hit
    result.iterations = iterations
    return result
