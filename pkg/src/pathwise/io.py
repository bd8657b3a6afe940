"""Text formats for every value the CLI reads or writes.

* bit strings are written as-is, the empty string as ``ε``
* rationals as ``p/q``, dyadics as ``p/2^e``
* hypergraphs: one edge per line, ``w=p/q : s1 s2 ...``; an optional
  ``V: ...`` line lists extra vertices
* hitting instances: a ``Q: ...`` header followed by hypergraph lines
  (weights optional and ignored)
* staged expanders: ``s k sigma -> t1 t2 ...`` (``→`` also accepted)
* prefix machines: ``program -> output``
* trees: ``depth=N : leaf leaf ...``; conditions: ``F:``, ``T:`` and ``d:`` lines

Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator

from .complexity import PrefixMachine
from .density import LDF, Condition
from .errors import ParseError, PreconditionError
from .expander import ExpanderEntry, StagedExpander
from .hitting import HittingInstance
from .hypergraph import StringHypergraph
from .measure import Dyadic
from .trees import FinTree, LevelSet

EMPTY = "ε"
_ARROW = re.compile(r"\s*(?:→|->)\s*")


def format_bits(s: str) -> str:
    return s if s else EMPTY


def parse_bits(tok: str) -> str:
    if tok in (EMPTY, "λ", "''", '""'):
        return ""
    if tok.strip("01"):
        raise ParseError(f"not a bit string: {tok!r}")
    return tok


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def format_dyadic(x) -> str:
    return str(Dyadic.coerce(Fraction(x)))


def parse_rational(tok: str) -> Fraction:
    tok = tok.strip()
    m = re.fullmatch(r"(-?\d+)/2\^(\d+)", tok)
    if m:
        return Dyadic.of(int(m.group(1)), int(m.group(2)))
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a rational: {tok!r}") from exc


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_bits_list(chunk: str, no: int) -> list[str]:
    try:
        return [parse_bits(t) for t in chunk.split()]
    except ParseError as exc:
        raise ParseError(str(exc), no) from None


def format_level(L: LevelSet) -> str:
    return " ".join(format_bits(s) for s in L.sorted())


def parse_level(chunk: str, no: int | None = None, height: int | None = None) -> LevelSet:
    members = parse_bits_list(chunk, no)
    try:
        return LevelSet(members, height)
    except PreconditionError as exc:
        raise ParseError(str(exc), no) from None


def format_tree(T: FinTree) -> str:
    return f"depth={T.depth} : {format_level(T.leaves())}".rstrip()


def parse_tree(chunk: str, no: int | None = None) -> FinTree:
    m = re.fullmatch(r"depth\s*=\s*(\d+)\s*:?(.*)", chunk.strip())
    if not m:
        raise ParseError("tree must look like 'depth=N : leaves...'", no)
    depth = int(m.group(1))
    leaves = parse_bits_list(m.group(2), no)
    if any(len(s) != depth for s in leaves):
        raise ParseError("tree leaves must all have length depth", no)
    return FinTree.from_leaves(leaves)


def parse_hypergraph(text: str) -> StringHypergraph:
    edges, extra = [], []
    for no, line in _lines(text):
        if line.startswith("V:"):
            extra.extend(parse_bits_list(line[2:], no))
            continue
        m = re.fullmatch(r"w\s*=\s*(\S+)\s*:\s*(.*)", line)
        if not m:
            raise ParseError("edge lines look like 'w=p/q : s1 s2 ...'", no)
        try:
            weight = parse_rational(m.group(1))
        except ParseError as exc:
            raise ParseError(str(exc), no) from None
        members = parse_bits_list(m.group(2), no)
        if not members:
            raise ParseError("empty edge", no)
        edges.append((members, weight))
    vertices = None
    if extra:
        vertices = set(extra).union(*(set(m) for m, _ in edges))
    try:
        return StringHypergraph(edges, vertices)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def format_hypergraph(H: StringHypergraph) -> str:
    lines = [
        f"w={format_rational(w)} : {' '.join(format_bits(s) for s in sorted(m))}" for m, w in H.edges
    ]
    used = set().union(*(m for m, _ in H.edges)) if H.edges else set()
    isolated = sorted(H.vertices - used)
    if isolated:
        lines.insert(0, "V: " + " ".join(format_bits(s) for s in isolated))
    return "\n".join(lines) + "\n"


def parse_hitting(text: str) -> HittingInstance:
    base = None
    family = []
    for no, line in _lines(text):
        if line.startswith("Q:"):
            base = parse_level(line[2:], no)
            continue
        m = re.fullmatch(r"(?:w\s*=\s*\S+\s*:)?\s*(.*)", line)
        members = parse_bits_list(m.group(1), no)
        if not members:
            raise ParseError("empty edge", no)
        family.append(parse_level(m.group(1), no))
    if base is None:
        raise ParseError("hitting instance needs a 'Q:' line")
    return HittingInstance(family, base)


def format_hitting(inst: HittingInstance) -> str:
    lines = [f"Q: {format_level(inst.base)}"]
    lines += [f"w=1/1 : {format_level(D)}" for D in inst.family]
    return "\n".join(lines) + "\n"


def parse_expander(text: str) -> StagedExpander:
    entries = []
    for no, line in _lines(text):
        parts = _ARROW.split(line, maxsplit=1)
        if len(parts) != 2:
            raise ParseError("expander lines look like 's k sigma -> t1 t2 ...'", no)
        head = parts[0].split()
        if len(head) not in (2, 3):
            raise ParseError("expander line head must be 's k [sigma]'", no)
        try:
            stage, arity = int(head[0]), int(head[1])
        except ValueError:
            raise ParseError("stage and arity must be integers", no) from None
        oracle = parse_bits(head[2]) if len(head) == 3 else ""
        try:
            entries.append(ExpanderEntry(oracle, arity, stage, parse_level(parts[1], no)))
        except PreconditionError as exc:
            raise ParseError(str(exc), no) from None
    try:
        return StagedExpander(entries)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def format_expander(Phi: StagedExpander) -> str:
    return "".join(
        f"{e.stage} {e.arity} {format_bits(e.oracle)} -> {format_level(e.output)}\n" for e in Phi.entries
    )


def parse_machine(text: str) -> PrefixMachine:
    table = {}
    for no, line in _lines(text):
        parts = _ARROW.split(line, maxsplit=1)
        if len(parts) != 2:
            raise ParseError("machine lines look like 'program -> output'", no)
        program, output = (parse_bits(p.strip()) for p in parts)
        if program in table:
            raise ParseError(f"program {format_bits(program)} listed twice", no)
        table[program] = output
    try:
        return PrefixMachine(table)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def format_machine(M: PrefixMachine) -> str:
    return "".join(f"{format_bits(p)} -> {format_bits(o)}\n" for p, o in sorted(M.table.items()))


def format_ldf(d: LDF) -> str:
    return " ".join(f"{format_bits(s)}={format_rational(v)}" for s, v in sorted(d.values.items()))


def parse_ldf(chunk: str, domain: LevelSet | None = None, no: int | None = None) -> LDF:
    values = {}
    for tok in chunk.split():
        if "=" not in tok:
            raise ParseError(f"LDF entries look like 'sigma=p/q', got {tok!r}", no)
        s, v = tok.split("=", 1)
        values[parse_bits(s)] = parse_rational(v)
    if domain is None:
        domain = LevelSet(values) if values else None
    if domain is None:
        raise ParseError("empty LDF", no)
    try:
        return LDF(domain, values)
    except PreconditionError as exc:
        raise ParseError(str(exc), no) from None


def parse_sections(text: str, allowed: Iterable[str], required: Iterable[str] = ()) -> dict[str, tuple[str, int]]:
    """``key: rest`` lines, one per key, as ``key -> (rest, line number)``."""
    allowed = tuple(allowed)
    sections: dict[str, tuple[str, int]] = {}
    for no, line in _lines(text):
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in allowed:
            raise ParseError(f"lines must start with one of {', '.join(k + ':' for k in allowed)}", no)
        if key in sections:
            raise ParseError(f"section {key!r} given twice", no)
        sections[key] = (rest, no)
    missing = set(required) - set(sections)
    if missing:
        raise ParseError(f"missing section(s) {', '.join(sorted(missing))}")
    return sections


def parse_condition(text: str) -> Condition:
    sections = parse_sections(text, ("F", "T", "d"), ("F", "T", "d"))
    F = parse_level(*sections["F"])
    T = parse_tree(*sections["T"])
    d = parse_ldf(sections["d"][0], F, sections["d"][1])
    try:
        return Condition(F, T, d)
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


def format_condition(p: Condition) -> str:
    return f"F: {format_level(p.F)}\nT: {format_tree(p.T)}\nd: {format_ldf(p.d)}\n"


def format_clopen(gens: Iterable[str]) -> str:
    return "{" + ",".join(format_bits(s) for s in gens) + "}"
