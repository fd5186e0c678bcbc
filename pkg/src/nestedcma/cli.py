"""Command-line front end.

Usage: ``nestedcma VERB MODEL FILE...``; run ``nestedcma --help`` for the verbs.

Exit statuses:

====  ============================================================
0     accept / nonempty / equivalent / output written
1     reject / empty / inequivalent
2     unknown (bounded search or resource limit gave no verdict)
10    usage error (bad arguments)
11    verb not available for this model
12    syntax error in an input file
13    invariant violation in an input (or a word that does not fit)
14    input file cannot be read
====  ============================================================
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cca import CCA, cca_accepts, cca_to_wcma, wcma_to_cca
from .cma import CMA, AutomatonError, cma_accepts, complement_dwcma, complete, product
from .cma import find_run
from .coverability import VAS, equiv_dwcma, vas_coverable, wcma_empty, wcma_to_vas
from .coverability import cma_empty_bounded
from .data import DataError
from .dataaut import DataAutomaton, NestedDataAutomaton, da_accepts, nda_accepts
from .formats import (
    FormatError, parse_letters, parse_text, parse_word, print_artifact, print_word,
)
from .homca import (
    HOMCA, SearchLimit, homca_accepts, homca_prime_to_homca, homca_prime_to_ndcma,
    homca_to_homca_prime, ndcma_to_homca_prime,
)
from .hra import NrHRA, nrhra_accepts, nrhra_to_wcma, wcma_to_nrhra
from .ndcma import (
    NDCMA, desugar, from_cma, ndcma_accepts, ndcma_complement_dw, ndcma_empty_bounded,
    ndcma_product, to_cma,
)
from .ndcma import complete as ndcma_complete
from .ndcma import eliminate_silent as ndcma_eliminate_silent
from .petrinet import NetError, PetriNet, decode_witness, encode
from .saturation import SaturationLimit
from .wsts import format_certificate, ndcma_weak_empty

OK, NO, UNKNOWN = 0, 1, 2
USAGE, INCOMPATIBLE, SYNTAX, INVARIANT, IO = 10, 11, 12, 13, 14
EXIT_CODES = (OK, NO, UNKNOWN, USAGE, INCOMPATIBLE, SYNTAX, INVARIANT, IO)

MODEL_TAGS = ("cma", "wcma", "dwcma", "ndcma", "cca", "nrhra", "da", "nda",
              "homca", "homca'", "vas", "petri")
TARGETS = ("cma", "wcma", "ndcma", "cca", "nrhra", "vas", "homca", "homca'")


class CliError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(message, USAGE)


# ---------------------------------------------------------------------------
# loading


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", IO) from None


def _fits(obj, tag: str) -> str | None:
    """Why ``obj`` is not a ``tag`` description, or None if it is."""
    if tag in ("cma", "wcma", "dwcma"):
        if not isinstance(obj, CMA):
            return "not a flat class memory automaton"
        if tag != "cma" and not obj.weak:
            return "not weak (some state is not locally accepting)"
        if tag == "dwcma" and not obj.deterministic:
            return "not deterministic"
        return None
    want = {"ndcma": NDCMA, "cca": CCA, "nrhra": NrHRA, "da": DataAutomaton,
            "nda": NestedDataAutomaton, "homca": HOMCA, "homca'": HOMCA,
            "vas": VAS, "petri": PetriNet}[tag]
    if not isinstance(obj, want):
        return f"not a {tag} description"
    if tag == "homca'" and not obj.prime:
        return "variant is homca, not homca'"
    return None


def load(path: str, tag: str):
    """Parse ``path`` and check it is a ``tag`` description."""
    text = _read(path)
    base = "homca" if tag == "homca'" else tag
    try:
        obj = parse_text(text, model=base)
    except FormatError as exc:
        raise CliError(f"{path}: {exc}", INVARIANT if exc.kind == "invariant" else SYNTAX) from None
    why = _fits(obj, tag)
    if why:
        raise CliError(f"{path}: {why}", INVARIANT)
    return obj


def load_word(path: str, level: int | None = None):
    try:
        return parse_word(_read(path), level)
    except FormatError as exc:
        raise CliError(f"{path}: {exc}", SYNTAX) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _show_word(w) -> str:
    return print_word(w) if w else "(empty word)\n"


# ---------------------------------------------------------------------------
# verbs


def cmd_run(args) -> int:
    A = load(args.file, args.model)
    if isinstance(A, (VAS, PetriNet)):
        raise CliError(f"'run' does not apply to {args.model}", INCOMPATIBLE)
    if isinstance(A, HOMCA):
        letters = parse_letters(_read(args.word))
        try:
            ok = homca_accepts(A, letters, max_configs=args.max_configs)
        except SearchLimit as exc:
            print(f"unknown: {exc}")
            return UNKNOWN
    else:
        level = A.level if isinstance(A, NDCMA) else A.k if isinstance(A, NestedDataAutomaton) else 1
        w = load_word(args.word, level)
        accepts = {CMA: cma_accepts, NDCMA: ndcma_accepts, CCA: cca_accepts,
                   NrHRA: nrhra_accepts, DataAutomaton: da_accepts,
                   NestedDataAutomaton: nda_accepts}[type(A)]
        try:
            ok = accepts(A, w)
        except (DataError, AutomatonError) as exc:
            raise CliError(f"word does not fit the automaton: {exc}", INVARIANT) from None
        if ok and args.trace and isinstance(A, CMA):
            for c in find_run(A, w):
                print(f"  {c.control}\t{ {str(d): s for d, s in c.memory.items()} }")
    print("accept" if ok else "reject")
    return OK if ok else NO


def _as_weak_cma(A):
    """A weak flat CMA with the same language, or None."""
    if isinstance(A, CMA) and A.weak:
        return A
    if isinstance(A, CCA):
        return cca_to_wcma(A)
    if isinstance(A, NrHRA):
        return nrhra_to_wcma(A)
    return None


def _decide(A, bound: int | None, invariant=None):
    """``(status, report lines, witness or None)`` for an emptiness question."""
    if isinstance(A, (HOMCA, DataAutomaton, NestedDataAutomaton)):
        raise CliError(f"'empty' is not provided for {type(A).__name__}", INCOMPATIBLE)
    if isinstance(A, VAS):
        res = vas_coverable(A)
        if not res.coverable:
            return NO, ["empty (target not coverable)"], None
        return OK, ["nonempty (target coverable)", "rules: " +
                    " ".join(str(r.label or f"{r.source}->{r.target}") for r in res.path)], None
    if isinstance(A, NDCMA) and A.weak:
        res = ndcma_weak_empty(A, invariant=invariant)
        if res.empty:
            return NO, ["empty"], None
        return OK, ["nonempty"], res.witness
    W = _as_weak_cma(A)
    if W is not None:
        res = wcma_empty(W)
        if res.empty:
            return NO, ["empty"], None
        return OK, ["nonempty"], res.witness
    # strong CMA / NDCMA: undecidable or out of scope, so only a bounded search
    if bound is None:
        raise CliError(
            "emptiness of non-weak automata is only semi-decided here; "
            "pass --bound N (the answer is then nonempty or unknown, never empty)",
            INCOMPATIBLE,
        )
    res = ndcma_empty_bounded(A, bound) if isinstance(A, NDCMA) else cma_empty_bounded(A, bound)
    if res.nonempty:
        return OK, ["nonempty"], res.witness
    return UNKNOWN, [f"unknown (no witness within bound {bound})"], None


def _decode(net: PetriNet, A, w) -> list[str]:
    nested = isinstance(A, NDCMA)
    return decode_witness(net, w, weak=A.weak, nested=nested)


def cmd_empty(args) -> int:
    A = load(args.file, args.model)
    net = invariant = None
    if isinstance(A, PetriNet):
        enc = encode(A)
        net, A, invariant = A, enc.automaton, enc.invariant
    elif args.net:
        net = load(args.net, "petri")
    try:
        status, lines, witness = _decide(A, args.bound, invariant)
    except SaturationLimit as exc:
        print(f"unknown: {exc}")
        return UNKNOWN
    for line in lines:
        print(line)
    if witness is not None:
        print("witness:")
        sys.stdout.write(_show_word(witness))
        if net is not None:
            try:
                print("firings: " + " ".join(_decode(net, A, witness)))
            except NetError as exc:
                print(f"firings: not decodable ({exc})")
    return status


def cmd_certify(args) -> int:
    A = load(args.file, args.model)
    invariant = None
    if isinstance(A, PetriNet):
        enc = encode(A)
        A, invariant = enc.automaton, enc.invariant
    if isinstance(A, NDCMA) and A.weak:
        res = ndcma_weak_empty(A, invariant=invariant)
        if res.empty:
            print(f"empty; saturated basis of {len(res.saturation.basis)} elements")
            return NO
        print("nonempty; certificate (transition, tree to dominate):")
        print(format_certificate(res.certificate))
        return OK
    V = A if isinstance(A, VAS) else None
    if V is None:
        W = _as_weak_cma(A)
        if W is None:
            raise CliError("certificates exist only for weak automata and VAS", INCOMPATIBLE)
        V = wcma_to_vas(W)
    res = vas_coverable(V)
    if not res.coverable:
        print(f"empty; saturated basis of {len(res.saturation.basis)} elements")
        return NO
    print("nonempty; backward certificate (rule sequence from the initial configuration):")
    for r in res.path:
        print(f"  {r.source} -[dec {r.dec} inc {r.inc}]-> {r.target}")
    return OK


def _translate(A, target: str):
    if isinstance(A, CMA):
        if target == "ndcma":
            return from_cma(A)
        if target == "cma":
            return A
        if not A.weak:
            raise CliError("only weak CMA translate to this model", INCOMPATIBLE)
        if target == "wcma":
            return A
        if target == "cca":
            return wcma_to_cca(A)
        if target == "nrhra":
            return wcma_to_nrhra(A)
        if target == "vas":
            return wcma_to_vas(A)
        if target == "homca'":
            return ndcma_to_homca_prime(ndcma_eliminate_silent(from_cma(A)))
    if isinstance(A, CCA) and target in ("cma", "wcma"):
        return cca_to_wcma(A)
    if isinstance(A, NrHRA) and target in ("cma", "wcma"):
        return nrhra_to_wcma(A)
    if isinstance(A, NDCMA):
        if target == "cma" and A.level == 1:
            return to_cma(A)
        if target == "homca'":
            return ndcma_to_homca_prime(ndcma_eliminate_silent(A))
    if isinstance(A, HOMCA):
        if target == "homca" and A.prime:
            return homca_prime_to_homca(A)
        if target == "homca'" and not A.prime:
            if A.level > 3:
                raise CliError("HOMCA to HOMCA' is provided for levels up to 3", INCOMPATIBLE)
            return homca_to_homca_prime(A)
        if target == "ndcma" and A.prime:
            return desugar(homca_prime_to_ndcma(A))
    if isinstance(A, PetriNet) and target in ("cma", "wcma", "ndcma"):
        return encode(A, weak=target == "wcma" or None, nested=target == "ndcma" or None).automaton
    raise CliError(f"no translation from {type(A).__name__} to {target}", INCOMPATIBLE)


def cmd_translate(args) -> int:
    A = load(args.file, args.model)
    _emit(print_artifact(_translate(A, args.to)), args.output)
    return OK


def cmd_boolean(args) -> int:
    A = load(args.file, args.model)
    if args.op == "complement":
        if args.other:
            raise CliError("complement takes one automaton", USAGE)
        if isinstance(A, CMA) and A.weak and A.deterministic:
            R = complement_dwcma(complete(A))
        elif isinstance(A, NDCMA) and A.weak and A.deterministic:
            R = ndcma_complement_dw(ndcma_complete(A))
        else:
            raise CliError("complement is provided for deterministic weak automata "
                           "(CMA languages are not closed under complement)", INCOMPATIBLE)
    else:
        if not args.other:
            raise CliError(f"{args.op} needs two automata", USAGE)
        B = load(args.other, args.model)
        mode = "intersection" if args.op == "intersect" else "union"
        if isinstance(A, CMA):
            R = product(A, B, mode)
        elif isinstance(A, NDCMA):
            R = ndcma_product(A, B, mode)
        else:
            raise CliError(f"{args.op} is provided for CMA and NDCMA", INCOMPATIBLE)
    _emit(print_artifact(R), args.output)
    return OK


def cmd_equiv(args) -> int:
    if args.model != "dwcma":
        raise CliError("equivalence is decided for deterministic weak CMA (model dwcma)",
                       INCOMPATIBLE)
    A = load(args.left, "dwcma")
    B = load(args.right, "dwcma")
    if A.alphabet != B.alphabet:
        union = A.alphabet | B.alphabet
        A = CMA(A.states, union, A.initial, A.locally_accepting, A.globally_accepting,
                A.transitions)
        B = CMA(B.states, union, B.initial, B.locally_accepting, B.globally_accepting,
                B.transitions)
    res = equiv_dwcma(A, B)
    if res.equivalent:
        print("equivalent")
        return OK
    where = "first" if res.side == "left" else "second"
    print(f"inequivalent; witness accepted only by the {where} automaton:")
    sys.stdout.write(_show_word(res.witness))
    return NO


def cmd_encode(args) -> int:
    net = load(args.file, "petri")
    weak = None if args.weak is None else args.weak
    try:
        enc = encode(net, weak=weak, nested=args.nested)
    except NetError as exc:
        raise CliError(str(exc), INCOMPATIBLE) from None
    _emit(print_artifact(enc.automaton), args.output)
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nestedcma", description="Class memory automata over (nested) data words.",
                epilog="exit: 0 yes, 1 no, 2 unknown, 10 usage, 11 incompatible, "
                       "12 syntax, 13 invariant, 14 unreadable input")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="membership of a word (letters only for homca)")
    r.add_argument("model", choices=MODEL_TAGS)
    r.add_argument("file")
    r.add_argument("word", help="word file, or - for stdin")
    r.add_argument("--trace", action="store_true", help="print the accepting run (flat CMA)")
    r.add_argument("--max-configs", type=int, default=500_000)
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("empty", help="emptiness (weak models decided, strong ones bounded)")
    e.add_argument("model", choices=MODEL_TAGS)
    e.add_argument("file")
    e.add_argument("--bound", type=int, help="search bound for non-weak automata")
    e.add_argument("--net", help="Petri net the automaton encodes; decodes the witness")
    e.set_defaults(func=cmd_empty)

    c = sub.add_parser("certify", help="emptiness with the backward certificate")
    c.add_argument("model", choices=MODEL_TAGS)
    c.add_argument("file")
    c.set_defaults(func=cmd_certify)

    t = sub.add_parser("translate", help="convert between models")
    t.add_argument("model", choices=MODEL_TAGS)
    t.add_argument("file")
    t.add_argument("--to", required=True, choices=TARGETS)
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_translate)

    b = sub.add_parser("boolean", help="complement, intersection or union")
    b.add_argument("model", choices=("cma", "wcma", "dwcma", "ndcma"))
    b.add_argument("op", choices=("complement", "intersect", "union"))
    b.add_argument("file")
    b.add_argument("other", nargs="?")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_boolean)

    q = sub.add_parser("equiv", help="language equivalence of deterministic weak CMA")
    q.add_argument("model", choices=MODEL_TAGS)
    q.add_argument("left")
    q.add_argument("right")
    q.set_defaults(func=cmd_equiv)

    n = sub.add_parser("encode-petri", help="encode a net query as an automaton")
    n.add_argument("file")
    g = n.add_mutually_exclusive_group()
    g.add_argument("--weak", dest="weak", action="store_true", default=None,
                   help="coverability (weak) encoding")
    g.add_argument("--strong", dest="weak", action="store_false",
                   help="reachability (strong) encoding")
    h = n.add_mutually_exclusive_group()
    h.add_argument("--nested", dest="nested", action="store_true", default=None,
                   help="level-2 encoding (needed for reset arcs)")
    h.add_argument("--flat", dest="nested", action="store_false")
    n.add_argument("-o", "--output")
    n.set_defaults(func=cmd_encode)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"nestedcma: error: {exc}", file=sys.stderr)
        return exc.status
    except SystemExit as exc:  # --help
        return OK if exc.code in (0, None) else USAGE


if __name__ == "__main__":
    sys.exit(main())
