"""Interchange text format: one grammar for every model, chosen by a ``model:`` header.

Lines are ``key: value`` headers or statements introduced by a keyword.
``#`` starts a comment.  The full grammar is in ``docs/grammar.md``.
:func:`print_artifact` is the canonical emitter; parsing its output gives
back an equal description.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .cca import CCA, constraint
from .cma import CMA, AutomatonError
from .coverability import VAS, make_vas
from .data import BOT, EPS, DataError, DataValue, DataWord, value_from_path
from .dataaut import NFA, DataAutomaton, NestedDataAutomaton, Transducer
from .homca import HOMCA, op
from .hra import NrHRA
from .ndcma import NDCMA, SugaredNDCMA
from .petrinet import NetError, PetriNet, Transition

MODELS = ("cma", "wcma", "dwcma", "ndcma", "cca", "nrhra", "da", "nda", "homca", "vas", "petri")
HEADERS = ("model", "level", "variant", "weak", "m", "sugared")
RESERVED = {"bot", "eps", "->", "in", "out", "reset", "init", "level"}
TOKEN = re.compile(r"^[^\s/,:{}\[\]()#=<>]+$")


class FormatError(ValueError):
    """A syntax error (with its line number) or an invariant violation."""

    def __init__(self, message: str, line: int | None = None, kind: str = "syntax"):
        self.line = line
        self.kind = kind
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class _Line:
    no: int
    words: list
    text: str


def _lines(text: str) -> tuple[dict, list]:
    headers: dict = {}
    body = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^([a-z_]+):\s*(.*)$", line)
        if m and m.group(1) in HEADERS:
            headers[m.group(1)] = (m.group(2).strip(), no)
            continue
        body.append(_Line(no, line.split(), line))
    return headers, body


def _state(tok: str):
    return BOT if tok == "bot" else tok


def _letter(tok: str):
    return EPS if tok == "eps" else tok


def _arrow(ln: _Line, start: int) -> tuple[list, list]:
    """Split ``words[start:]`` at ``->``."""
    rest = ln.words[start:]
    if "->" not in rest:
        raise FormatError("expected '->'", ln.no)
    i = rest.index("->")
    if i + 1 >= len(rest):
        raise FormatError("nothing after '->'", ln.no)
    return rest[:i], rest[i + 1:]


def _int_header(headers, key, default=None) -> int:
    if key not in headers:
        if default is None:
            raise FormatError(f"missing header '{key}:'")
        return default
    value, no = headers[key]
    try:
        return int(value)
    except ValueError:
        raise FormatError(f"'{key}:' needs an integer", no) from None


def _yes(headers, key) -> bool:
    if key not in headers:
        return False
    value, no = headers[key]
    if value not in ("yes", "no"):
        raise FormatError(f"'{key}:' must be yes or no", no)
    return value == "yes"


def _invariant(exc: Exception) -> FormatError:
    return FormatError(f"invariant violation: {exc}", kind="invariant")


def _collect(body, keyword) -> list:
    out = []
    for ln in body:
        if ln.words[0] == keyword:
            out.extend(ln.words[1:])
    return out


def _single(body, keyword):
    vals = [(ln, ln.words[1:]) for ln in body if ln.words[0] == keyword]
    if not vals:
        raise FormatError(f"missing '{keyword}' line")
    ln, words = vals[-1]
    if len(words) != 1:
        raise FormatError(f"'{keyword}' takes one name", ln.no)
    return words[0]


def _unknown(body, known):
    for ln in body:
        if ln.words[0] not in known:
            raise FormatError(f"unknown statement {ln.words[0]!r}", ln.no)


# ---------------------------------------------------------------------------
# parsers


_NESTED = re.compile(
    r"^trans\s+(\S+)\s+(\S+)\s+level\s+(\d+)\s+\[([^\]]*)\]\s+->\s+(\S+)(?:\s+\[([^\]]*)\])?$"
)


def _slots(text: str) -> tuple:
    return tuple(_state(x.strip()) for x in text.split(",")) if text.strip() else ()


def _parse_cma_like(model, headers, body):
    nested = model == "ndcma"
    sugared = nested and _yes(headers, "sugared")
    _unknown(body, {"states", "alphabet", "initial", "locally_accepting",
                    "globally_accepting", "trans", "silent"})
    level = _int_header(headers, "level", None if nested else 1)
    states = _collect(body, "states")
    alphabet = [_letter(a) for a in _collect(body, "alphabet")]
    initial = _single(body, "initial")
    has_fl = any(ln.words[0] == "locally_accepting" for ln in body)
    fl = _collect(body, "locally_accepting") if has_fl else list(states)
    fg = _collect(body, "globally_accepting")
    table: dict = {}
    silent = []
    for ln in body:
        if ln.words[0] == "trans" and nested:
            m = _NESTED.match(ln.text)
            if not m:
                raise FormatError("expected 'trans q a level i [s1,...,si] -> q''", ln.no)
            q, a, i, g, t, ws = m.groups()
            guard, i = _slots(g), int(i)
            want = i + 1 if sugared else i
            if len(guard) != want:
                raise FormatError(f"a level-{i} guard lists {want} states", ln.no)
            if sugared:
                if ws is None:
                    raise FormatError("sugared transitions list the written states", ln.no)
                writes = _slots(ws)
                if len(writes) != want or BOT in writes:
                    raise FormatError(f"a level-{i} write lists {want} states, none bot", ln.no)
                table.setdefault((q, _letter(a), guard), set()).add((t, writes))
            else:
                if ws is not None:
                    raise FormatError("written states need 'sugared: yes'", ln.no)
                table.setdefault((q, _letter(a), guard), set()).add(t)
        elif ln.words[0] == "trans":
            left, right = _arrow(ln, 1)
            if len(left) != 3 or len(right) != 1:
                raise FormatError("expected 'trans q a s -> q''", ln.no)
            q, a, g = left
            table.setdefault((q, _letter(a), _state(g)), set()).add(right[0])
        elif ln.words[0] == "silent":
            left, right = _arrow(ln, 1)
            if len(left) != 1 or len(right) != 1:
                raise FormatError("expected 'silent q -> q''", ln.no)
            silent.append((left[0], right[0]))
    try:
        if sugared:
            if silent:
                raise AutomatonError("sugared automata have no silent moves")
            A = SugaredNDCMA(level, states, alphabet, initial, fl, fg, table)
        elif nested:
            A = NDCMA(level, states, alphabet, initial, fl, fg, table, silent)
        else:
            A = CMA(states, alphabet, initial, fl, fg, table, silent)
    except (AutomatonError, DataError) as exc:
        raise _invariant(exc) from None
    if model in ("wcma", "dwcma") and not A.weak:
        raise _invariant("a weak automaton has every state locally accepting")
    if model == "dwcma" and not A.deterministic:
        raise _invariant("automaton is not deterministic")
    if nested and _yes(headers, "weak") and not A.weak:
        raise _invariant("'weak: yes' but some state is not locally accepting")
    return A


_CCA = re.compile(
    r"^trans\s+(\S+)\s+(\S+)\s+\(\s*(=|==|!=|≠|<|>)\s*(\d+)\s*\)\s+(inc|set)\s+(\d+)\s+->\s+(\S+)$"
)


def _parse_cca(headers, body):
    _unknown(body, {"states", "alphabet", "initial", "accepting", "trans"})
    ts = []
    for ln in body:
        if ln.words[0] == "trans":
            m = _CCA.match(ln.text)
            if not m:
                raise FormatError("expected 'trans q a (op e) inc|set m -> q''", ln.no)
            q, a, o, e, act, amount, t = m.groups()
            ts.append((q, a, constraint(o, int(e)), act, int(amount), t))
    try:
        return CCA(_collect(body, "states"), _collect(body, "alphabet"),
                   _single(body, "initial"), _collect(body, "accepting"), tuple(ts))
    except AutomatonError as exc:
        raise _invariant(exc) from None


_SET = r"\{\s*([0-9,\s]*)\}"
_HRA = re.compile(rf"^trans\s+(\S+)\s+(\S+)\s+{_SET}\s+{_SET}\s+->\s+(\S+)$")


def _ints(text: str) -> frozenset:
    return frozenset(int(x) for x in text.replace(",", " ").split())


def _parse_nrhra(headers, body):
    _unknown(body, {"states", "alphabet", "initial", "accepting", "trans"})
    m = _int_header(headers, "m")
    ts = []
    for ln in body:
        if ln.words[0] == "trans":
            mt = _HRA.match(ln.text)
            if not mt:
                raise FormatError("expected 'trans q a {X} {Y} -> q''", ln.no)
            q, a, X, Y, t = mt.groups()
            ts.append((q, a, _ints(X), _ints(Y), t))
    try:
        return NrHRA(m, _collect(body, "states"), _collect(body, "alphabet"),
                     _single(body, "initial"), _collect(body, "accepting"), tuple(ts))
    except AutomatonError as exc:
        raise _invariant(exc) from None


def _parse_data_automaton(model, headers, body):
    known = {"states", "alphabet", "output_alphabet", "initial", "accepting", "trans", "class"}
    _unknown(body, known)
    k = 1 if model == "da" else _int_header(headers, "level")
    ts = []
    classes: dict = {i: {"states": [], "initial": [], "final": [], "trans": []}
                     for i in range(1, k + 1)}
    for ln in body:
        if ln.words[0] == "trans":
            left, right = _arrow(ln, 1)
            if len(left) != 2 or "/" not in left[1] or len(right) != 1:
                raise FormatError("expected 'trans q a/b -> q''", ln.no)
            a, b = left[1].split("/", 1)
            ts.append((left[0], a, b, right[0]))
        elif ln.words[0] == "class":
            if len(ln.words) < 3 or not ln.words[1].isdigit():
                raise FormatError("expected 'class <i> <section> ...'", ln.no)
            i, sec = int(ln.words[1]), ln.words[2]
            if i not in classes:
                raise FormatError(f"class index {i} outside 1..{k}", ln.no)
            if sec not in classes[i]:
                raise FormatError(f"unknown class section {sec!r}", ln.no)
            if sec == "trans":
                left, right = _arrow(ln, 3)
                if len(left) != 2 or len(right) != 1:
                    raise FormatError("expected 'class i trans p b -> p''", ln.no)
                classes[i]["trans"].append((left[0], left[1], right[0]))
            else:
                classes[i][sec].extend(ln.words[3:])
    out_alpha = _collect(body, "output_alphabet")
    try:
        base = Transducer(_collect(body, "states"), _collect(body, "alphabet"), out_alpha,
                          _single(body, "initial"), _collect(body, "accepting"), tuple(ts))
        nfas = tuple(
            NFA(c["states"], out_alpha, c["initial"], c["final"], tuple(c["trans"]))
            for _, c in sorted(classes.items())
        )
        if model == "da":
            return DataAutomaton(base, nfas[0])
        return NestedDataAutomaton(base, nfas)
    except AutomatonError as exc:
        raise _invariant(exc) from None


def _parse_homca(headers, body):
    _unknown(body, {"states", "alphabet", "multiset_alphabet", "initial", "accepting", "trans"})
    level = _int_header(headers, "level")
    variant = headers.get("variant", ("homca", 0))[0]
    ts = []
    for ln in body:
        if ln.words[0] == "trans":
            left, right = _arrow(ln, 1)
            if len(left) != 3 or len(right) != 1:
                raise FormatError("expected 'trans q a op -> q''", ln.no)
            try:
                o = op(left[2])
            except (AutomatonError, ValueError) as exc:
                raise FormatError(str(exc), ln.no) from None
            ts.append((left[0], _letter(left[1]), o, right[0]))
    try:
        return HOMCA(level, _collect(body, "states"), _collect(body, "alphabet"),
                     _collect(body, "multiset_alphabet"), _single(body, "initial"),
                     _collect(body, "accepting"), tuple(ts), variant, _yes(headers, "weak"))
    except AutomatonError as exc:
        raise _invariant(exc) from None


_VEC = re.compile(r"\{([^}]*)\}")


def _vec(text: str, no: int) -> dict:
    out: Counter = Counter()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, n = part.partition(":")
        if not sep or not n.strip().isdigit():
            raise FormatError(f"bad counter entry {part!r}", no)
        out[name.strip()] += int(n)
    return dict(out)


def _names(text: str) -> list:
    return [x for x in re.split(r"[\s,]+", text.strip()) if x]


_RULE = re.compile(r"^rule\s+(\S+)\s+\[dec:([^\]]*)\]\s+\[inc:([^\]]*)\]\s+->\s+(\S+)$")


def _parse_vas(headers, body):
    _unknown(body, {"counters", "states", "initial", "rule", "cover"})
    counters = _collect(body, "counters")
    init = [ln for ln in body if ln.words[0] == "initial"]
    if len(init) != 1:
        raise FormatError("need exactly one 'initial q {c:n,...}' line")
    m = re.match(r"^initial\s+(\S+)\s*(\{[^}]*\})?$", init[0].text)
    if not m:
        raise FormatError("expected 'initial q {c:n,...}'", init[0].no)
    q0 = m.group(1)
    v0 = _vec(m.group(2)[1:-1], init[0].no) if m.group(2) else {}
    rules, targets = [], []
    for ln in body:
        if ln.words[0] == "rule":
            mr = _RULE.match(ln.text)
            if not mr:
                raise FormatError("expected 'rule q [dec: ...] [inc: ...] -> q''", ln.no)
            rules.append((mr.group(1), _names(mr.group(2)), _names(mr.group(3)), mr.group(4)))
        elif ln.words[0] == "cover":
            mc = re.match(r"^cover\s+(\S+)\s*(\{[^}]*\})?$", ln.text)
            if not mc:
                raise FormatError("expected 'cover q {c:n,...}'", ln.no)
            targets.append((mc.group(1), _vec(mc.group(2)[1:-1], ln.no) if mc.group(2) else {}))
    try:
        return make_vas(counters, _collect(body, "states"), q0, v0, rules, targets)
    except ValueError as exc:
        raise _invariant(exc) from None


def _marking(words: list, no: int) -> tuple:
    out = []
    for w in words:
        name, sep, n = w.partition(":")
        if sep and not n.isdigit():
            raise FormatError(f"bad multiplicity in {w!r}", no)
        out.extend([name] * (int(n) if sep else 1))
    return tuple(out)


def _parse_petri(headers, body):
    _unknown(body, {"place", "trans", "query"})
    places, initial, ts = [], [], []
    query, target = "cover", ()
    for ln in body:
        w = ln.words
        if w[0] == "place":
            if len(w) not in (2, 4) or (len(w) == 4 and (w[2] != "init" or not w[3].isdigit())):
                raise FormatError("expected 'place p [init n]'", ln.no)
            places.append(w[1])
            if len(w) == 4:
                initial.extend([w[1]] * int(w[3]))
        elif w[0] == "trans":
            if len(w) < 2:
                raise FormatError("transition needs a name", ln.no)
            parts: dict = {"in": [], "out": [], "reset": []}
            cur = None
            for tok in w[2:]:
                if tok in parts:
                    cur = tok
                elif cur is None:
                    raise FormatError("expected 'in', 'out' or 'reset'", ln.no)
                else:
                    parts[cur].append(tok)
            ts.append(Transition(w[1], _marking(parts["in"], ln.no),
                                 _marking(parts["out"], ln.no), tuple(parts["reset"])))
        elif w[0] == "query":
            if len(w) < 2 or w[1] not in ("cover", "reach"):
                raise FormatError("expected 'query cover|reach p:n ...'", ln.no)
            query, target = w[1], _marking(w[2:], ln.no)
    try:
        return PetriNet(tuple(places), tuple(ts), tuple(initial), query, target)
    except NetError as exc:
        raise _invariant(exc) from None


def parse_text(text: str, model: str | None = None):
    headers, body = _lines(text)
    if "model" not in headers:
        if model is None:
            raise FormatError("missing 'model:' header")
        declared = model
    else:
        declared, no = headers["model"]
        if declared not in MODELS:
            raise FormatError(f"unknown model {declared!r}", no)
    if declared in ("cma", "wcma", "dwcma", "ndcma"):
        return _parse_cma_like(declared, headers, body)
    if declared == "cca":
        return _parse_cca(headers, body)
    if declared == "nrhra":
        return _parse_nrhra(headers, body)
    if declared in ("da", "nda"):
        return _parse_data_automaton(declared, headers, body)
    if declared == "homca":
        return _parse_homca(headers, body)
    if declared == "vas":
        return _parse_vas(headers, body)
    return _parse_petri(headers, body)


def parse_artifact(path, model: str | None = None):
    """Parse and validate the description stored at ``path``."""
    return parse_text(Path(path).read_text(), model)


def model_of(text: str) -> str | None:
    headers, _ = _lines(text)
    return headers.get("model", (None, 0))[0]


def parse_word(text: str, level: int | None = None) -> DataWord:
    """``letter value`` per line; nested values are slash paths.

    A path with an empty segment, or deeper than ``level``, is an error.
    """
    entries = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("expected 'letter value'", no)
        try:
            d = value_from_path(parts[1])
        except DataError as exc:
            raise FormatError(str(exc), no) from None
        if level is not None and d.level > level:
            raise FormatError(f"value {d} is deeper than level {level}", no)
        entries.append((parts[0], d))
    return DataWord(entries)


def parse_letters(text: str) -> tuple:
    """A plain string: the first token of each line (any value is ignored)."""
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split()[0])
    return tuple(out)


# ---------------------------------------------------------------------------
# printers


class _Names:
    """Text names for arbitrary hashable objects; odd ones get fresh names."""

    def __init__(self, objects, prefix: str):
        objs = sorted(set(objects), key=repr)
        simple = {o for o in objs if isinstance(o, str) and TOKEN.match(o) and o not in RESERVED}
        self.map = {o: o for o in simple}
        self.notes = []
        n = 0
        for o in objs:
            if o in self.map:
                continue
            while f"{prefix}{n}" in simple:
                n += 1
            self.map[o] = f"{prefix}{n}"
            self.notes.append(f"# {prefix}{n} = {o!r}")
            n += 1

    def __call__(self, o) -> str:
        if o is BOT:
            return "bot"
        if o is EPS:
            return "eps"
        return self.map[o]

    def many(self, objs) -> str:
        return " ".join(sorted(self(o) for o in objs))


def _lines_out(header: list, names: list, body: list) -> str:
    notes = [n for nm in names for n in nm.notes]
    return "\n".join(header + notes + body) + "\n"


def _print_cma_like(A) -> str:
    sugared = isinstance(A, SugaredNDCMA)
    nested = sugared or isinstance(A, NDCMA)
    S = _Names(A.states, "q")
    L = _Names(A.alphabet, "a")
    if nested:
        model = "ndcma"
    elif A.weak and A.deterministic:
        model = "dwcma"
    elif A.weak:
        model = "wcma"
    else:
        model = "cma"
    head = [f"model: {model}"]
    if nested:
        head.append(f"level: {A.level}")
    if sugared:
        head.append("sugared: yes")
    body = [f"states {S.many(A.states)}", f"alphabet {L.many(A.alphabet)}",
            f"initial {S(A.initial)}"]
    if not A.weak or nested:
        body.append(f"locally_accepting {S.many(A.locally_accepting)}".rstrip())
    body.append(f"globally_accepting {S.many(A.globally_accepting)}".rstrip())

    def slots(g) -> str:
        return "[" + ",".join(S(s) for s in g) + "]"

    rows = []
    for e in A.edges():
        q, a, g, t = e[:4]
        if sugared:
            rows.append(f"trans {S(q)} {L(a)} level {len(g) - 1} {slots(g)} -> {S(t)} {slots(e[4])}")
        elif nested:
            rows.append(f"trans {S(q)} {L(a)} level {len(g)} {slots(g)} -> {S(t)}")
        else:
            rows.append(f"trans {S(q)} {L(a)} {S(g)} -> {S(t)}")
    rows += [f"silent {S(p)} -> {S(q)}" for p, q in getattr(A, "silent", ())]
    return _lines_out(head, [S, L], body + sorted(rows))


def _print_cca(A: CCA) -> str:
    S = _Names(A.states, "q")
    L = _Names(A.alphabet, "a")
    body = [f"states {S.many(A.states)}", f"alphabet {L.many(A.alphabet)}",
            f"initial {S(A.initial)}", f"accepting {S.many(A.accepting)}".rstrip()]
    rows = [f"trans {S(t.source)} {L(t.letter)} ({t.guard.op} {t.guard.bound}) "
            f"{t.action} {t.amount} -> {S(t.target)}" for t in A.transitions]
    return _lines_out(["model: cca"], [S, L], body + sorted(rows))


def _set(X) -> str:
    return "{" + ",".join(str(i) for i in sorted(X)) + "}"


def _print_nrhra(A: NrHRA) -> str:
    S = _Names(A.states, "q")
    L = _Names(A.alphabet, "a")
    body = [f"states {S.many(A.states)}", f"alphabet {L.many(A.alphabet)}",
            f"initial {S(A.initial)}", f"accepting {S.many(A.accepting)}".rstrip()]
    rows = [f"trans {S(t.source)} {L(t.letter)} {_set(t.read)} {_set(t.write)} -> {S(t.target)}"
            for t in A.transitions]
    return _lines_out(["model: nrhra", f"m: {A.m}"], [S, L], body + sorted(rows))


def _print_data_automaton(D) -> str:
    nested = isinstance(D, NestedDataAutomaton)
    levels = D.levels if nested else (D.classes,)
    base = D.base
    S = _Names(base.states, "q")
    head = ["model: nda", f"level: {len(levels)}"] if nested else ["model: da"]
    body = [f"states {S.many(base.states)}", f"alphabet {' '.join(sorted(base.input_alphabet))}",
            f"output_alphabet {' '.join(sorted(base.output_alphabet))}",
            f"initial {S(base.initial)}", f"accepting {S.many(base.accepting)}".rstrip()]
    body += sorted(f"trans {S(q)} {a}/{b} -> {S(r)}" for q, a, b, r in base.transitions)
    names = [S]
    for i, B in enumerate(levels, start=1):
        C = _Names(B.states, f"c{i}_")
        names.append(C)
        body += [f"class {i} states {C.many(B.states)}",
                 f"class {i} initial {C.many(B.initial)}",
                 f"class {i} final {C.many(B.final)}".rstrip()]
        body += sorted(f"class {i} trans {C(p)} {b} -> {C(r)}" for p, b, r in B.transitions)
    return _lines_out(head, names, body)


def _print_homca(M: HOMCA) -> str:
    S = _Names(M.states, "q")
    L = _Names(M.alphabet, "a")
    X = _Names(M.multiset_alphabet, "x")
    head = ["model: homca", f"level: {M.level}", f"variant: {M.variant}",
            f"weak: {'yes' if M.weak else 'no'}"]
    body = [f"states {S.many(M.states)}", f"alphabet {L.many(M.alphabet)}".rstrip(),
            f"multiset_alphabet {X.many(M.multiset_alphabet)}".rstrip(),
            f"initial {S(M.initial)}", f"accepting {S.many(M.accepting)}".rstrip()]
    rows = []
    for t in M.transitions:
        kind, arg = t.op
        o = f"{kind}_{X(arg) if kind in ('inc', 'dec') else arg}"
        rows.append(f"trans {S(t.source)} {L(t.letter)} {o} -> {S(t.target)}")
    return _lines_out(head, [S, L, X], body + sorted(rows))


def _print_vas(V: VAS) -> str:
    C = _Names(V.counters, "c")
    S = _Names(V.states, "q")

    def vec(v) -> str:
        return "{" + ",".join(f"{C(c)}:{n}" for c, n in zip(V.counters, v) if n) + "}"

    def bag(v) -> str:
        return ",".join(C(c) for c, n in zip(V.counters, v) for _ in range(n))

    body = [f"counters {' '.join(C(c) for c in V.counters)}", f"states {S.many(V.states)}",
            f"initial {S(V.initial_state)} {vec(V.initial)}"]
    # rules and targets are ordered tuples; keep their order
    body += [f"rule {S(r.source)} [dec: {bag(r.dec)}] [inc: {bag(r.inc)}] -> {S(r.target)}"
             for r in V.rules]
    body += [f"cover {S(q)} {vec(v)}" for q, v in V.targets]
    return _lines_out(["model: vas"], [C, S], body)


def _print_petri(net: PetriNet) -> str:
    init = Counter(net.initial)

    def marking(m) -> str:
        return " ".join(p if n == 1 else f"{p}:{n}" for p, n in sorted(Counter(m).items()))

    body = [f"place {p} init {init[p]}" if init[p] else f"place {p}" for p in net.places]
    for t in net.transitions:
        parts = [f"trans {t.name}"]
        for key, ms in (("in", t.inputs), ("out", t.outputs)):
            if ms:
                parts.append(f"{key} {marking(ms)}")
        if t.resets:
            parts.append("reset " + " ".join(t.resets))
        body.append(" ".join(parts))
    body.append(f"query {net.query} {marking(net.target)}".rstrip())
    return _lines_out(["model: petri"], [], body)


def print_artifact(obj) -> str:
    if isinstance(obj, (CMA, NDCMA, SugaredNDCMA)):
        return _print_cma_like(obj)
    if isinstance(obj, CCA):
        return _print_cca(obj)
    if isinstance(obj, NrHRA):
        return _print_nrhra(obj)
    if isinstance(obj, (DataAutomaton, NestedDataAutomaton)):
        return _print_data_automaton(obj)
    if isinstance(obj, HOMCA):
        return _print_homca(obj)
    if isinstance(obj, VAS):
        return _print_vas(obj)
    if isinstance(obj, PetriNet):
        return _print_petri(obj)
    raise TypeError(f"no printer for {type(obj).__name__}")


def print_word(w) -> str:
    return "".join(f"{a} {d}\n" if isinstance(d, DataValue) else f"{a}\n" for a, d in w)
