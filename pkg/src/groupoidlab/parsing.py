"""Constructor expressions and the line-oriented table file formats.

A file is a sequence of blocks (``groupoid``, ``group``, ``isgp``, ``action``,
``cocycle``, each closed by ``end``) plus single-line ``elem`` literals. Blocks may
refer to objects defined earlier in the same file by name, or to constructor
expressions written ``expr:<term>``. Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .algebra import AlgebraElement, element
from .errors import GroupoidLabError, ParseError
from .galois import (Cocycle, parity_cocycle, projection_cocycle, remark_counterexample,
                     trivial_cocycle, validate_cocycle)
from .groupoid import (FiniteGroupoid, GroupoidTables, cyclic, disjoint, group_groupoid, pair,
                       product, sym, transformation, unit_groupoid, validate_groupoid)
from .groups import FiniteGroup, cyclic_group, klein_group, symmetric_group, validate_group
from .scalars import QQi, parse_scalar
from .semigroup import (FiniteInverseSemigroup, PartialBijectionAction, canonical_action,
                        symmetric_inverse_monoid, translation_action, trivial_action,
                        validate_action, validate_inverse_semigroup)

__all__ = ["parse_expression", "parse_spec", "parse_document", "parse_element", "kind_of",
           "format_groupoid", "format_group", "format_cocycle"]

# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[(),]))")


@dataclass
class _Term:
    head: str | int
    args: list


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos} in {text!r}")
        out.append(m.group(m.lastgroup))
        pos = m.end()
    return out


def _parse_term(tokens: list[str], i: int) -> tuple[_Term, int]:
    if i >= len(tokens):
        raise ParseError("unexpected end of expression")
    tok = tokens[i]
    if tok.isdigit():
        return _Term(int(tok), []), i + 1
    if not re.match(r"[A-Za-z_]", tok):
        raise ParseError(f"expected a name, got {tok!r}")
    if i + 1 < len(tokens) and tokens[i + 1] == "(":
        args, j = [], i + 2
        if j < len(tokens) and tokens[j] == ")":
            return _Term(tok, []), j + 1
        while True:
            arg, j = _parse_term(tokens, j)
            args.append(arg)
            if j >= len(tokens):
                raise ParseError("unclosed parenthesis")
            if tokens[j] == ")":
                return _Term(tok, args), j + 1
            if tokens[j] != ",":
                raise ParseError(f"expected ',' or ')', got {tokens[j]!r}")
            j += 1
    return _Term(tok, []), i + 1


def _int_arg(t: _Term, k: int = 0) -> int:
    if len(t.args) <= k or not isinstance(t.args[k].head, int):
        raise ParseError(f"{t.head} expects an integer argument")
    return t.args[k].head


def _arity(t: _Term, n: int):
    if len(t.args) != n:
        raise ParseError(f"{t.head} takes {n} argument(s), got {len(t.args)}")


def _eval_group(t: _Term) -> FiniteGroup:
    if t.head == "cyclic":
        _arity(t, 1)
        return cyclic_group(_int_arg(t))
    if t.head == "sym":
        _arity(t, 1)
        return symmetric_group(_int_arg(t))
    if t.head == "klein":
        _arity(t, 0)
        return klein_group()
    raise ParseError(f"unknown group constructor {t.head!r}")


def _eval_groupoid(t: _Term) -> FiniteGroupoid:
    h = t.head
    if h in ("pair", "cyclic", "sym", "units"):
        _arity(t, 1)
        n = _int_arg(t)
        return {"pair": pair, "cyclic": cyclic, "sym": sym, "units": unit_groupoid}[h](n)
    if h == "klein":
        return group_groupoid(klein_group())
    if h in ("disjoint", "product"):
        _arity(t, 2)
        a, b = (_eval_groupoid(x) for x in t.args)
        return disjoint(a, b) if h == "disjoint" else product(a, b)
    if h == "transformation":
        _arity(t, 2)
        grp = _eval_group(t.args[0])
        mode = t.args[1].head
        if mode == "regular":
            return transformation(grp, grp.elements, grp.mul,
                                  name=f"transformation({grp.name},regular)")
        if mode == "natural" and t.args[0].head == "sym":
            n = _int_arg(t.args[0])
            pts = [str(i) for i in range(1, n + 1)]
            return transformation(grp, pts, lambda s, x: s[int(x) - 1],
                                  name=f"transformation({grp.name},natural)")
        raise ParseError(f"unsupported action {mode!r} for {grp.name}")
    raise ParseError(f"unknown groupoid constructor {h!r}")


def _eval_cocycle(t: _Term) -> Cocycle:
    h = t.head
    if h == "projection":
        _arity(t, 2)
        return projection_cocycle(_eval_groupoid(t.args[0]), _eval_group(t.args[1]))
    if h == "trivial":
        _arity(t, 1)
        return trivial_cocycle(_eval_groupoid(t.args[0]))
    if h == "parity":
        _arity(t, 1)
        return parity_cocycle(_int_arg(t))
    if h == "remark":
        _arity(t, 0)
        return remark_counterexample()[2]
    raise ParseError(f"unknown cocycle constructor {h!r}")


def _eval_action(t: _Term) -> PartialBijectionAction:
    _arity(t, 1)
    n = _int_arg(t)
    return {"canonical": canonical_action, "translation": translation_action,
            "trivial_action": trivial_action}[t.head](n)


_COCYCLE_HEADS = {"projection", "trivial", "parity", "remark"}
_ACTION_HEADS = {"canonical", "translation", "trivial_action"}


def parse_expression(text: str, kind: str | None = None) -> Any:
    """Evaluate a constructor term such as ``product(pair(3),cyclic(4))``.

    ``kind`` forces the interpretation (``groupoid``, ``group``, ``cocycle``, ``action``,
    ``isgp``); otherwise cocycle and action heads are recognised and anything else is a
    groupoid.
    """
    if text.startswith("expr:"):
        text = text[5:]
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    term, j = _parse_term(tokens, 0)
    if j != len(tokens):
        raise ParseError(f"trailing input after expression: {' '.join(tokens[j:])!r}")
    if kind is None:
        kind = ("cocycle" if term.head in _COCYCLE_HEADS else
                "action" if term.head in _ACTION_HEADS else
                "isgp" if term.head == "inverse_monoid" else "groupoid")
    if kind == "groupoid":
        return _eval_groupoid(term)
    if kind == "group":
        return _eval_group(term)
    if kind == "cocycle":
        return _eval_cocycle(term)
    if kind == "action":
        return _eval_action(term)
    if kind == "isgp":
        if term.head == "inverse_monoid":
            return symmetric_inverse_monoid(_int_arg(term))
        from .semigroup import group_semigroup
        return group_semigroup(_eval_group(term))
    raise ParseError(f"unknown kind {kind!r}")


def kind_of(obj) -> str:
    return {FiniteGroupoid: "groupoid", FiniteGroup: "group", Cocycle: "cocycle",
            PartialBijectionAction: "action", FiniteInverseSemigroup: "isgp",
            AlgebraElement: "element"}[type(obj)]


# ---------------------------------------------------------------------------
# element literals
# ---------------------------------------------------------------------------

def parse_element(text: str, g: FiniteGroupoid) -> AlgebraElement:
    """``<scalar> * <arrow> ; ...`` with exact scalars ``p/q``, ``p/q+r/si``; ``<arrow>``
    alone means coefficient 1."""
    values: dict[str, QQi] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "*" in part:
            coeff, arrow = part.rsplit("*", 1)
            try:
                c = parse_scalar(coeff)
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        else:
            c, arrow = QQi(1), part
        arrow = arrow.strip()
        if arrow not in g._index:
            raise ParseError(f"{arrow!r} is not an arrow of {g.name}")
        values[arrow] = values.get(arrow, QQi(0)) + c
    return element(g, values)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

_HEADERS = ("groupoid", "group", "isgp", "action", "cocycle")


def _resolve(ref: str, env: dict, kind: str, line: int, source):
    if ref.startswith("expr:"):
        try:
            return parse_expression(ref, kind)
        except ParseError as exc:
            raise ParseError(str(exc), line, source) from None
    if ref not in env:
        raise ParseError(f"unknown {kind} {ref!r}", line, source)
    obj = env[ref]
    want = {"groupoid": FiniteGroupoid, "group": FiniteGroup, "isgp": FiniteInverseSemigroup}
    if kind in want and not isinstance(obj, want[kind]):
        raise ParseError(f"{ref!r} is not a {kind}", line, source)
    return obj


def _attach(exc: GroupoidLabError, line: int, source):
    exc.line = line
    exc.source = source
    return exc


def parse_document(text: str, source: str | None = None) -> dict[str, Any]:
    """Parse every block of a table file; returns ``{name: object}`` in definition order."""
    env: dict[str, Any] = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i].split("#", 1)[0].strip()
        lineno = i + 1
        i += 1
        if not raw:
            continue
        words = raw.split()
        head = words[0]
        if head == "elem":
            m = re.match(r"elem\s+(\S+)\s+on\s+(\S+)\s*=\s*(.*)$", raw)
            if not m:
                raise ParseError("malformed element literal", lineno, source)
            g = _resolve(m.group(2), env, "groupoid", lineno, source)
            try:
                env[m.group(1)] = parse_element(m.group(3), g)
            except ParseError as exc:
                raise ParseError(str(exc), lineno, source) from None
            continue
        if head not in _HEADERS:
            raise ParseError(f"unexpected line {raw!r}", lineno, source)
        body = []
        while True:
            if i >= len(lines):
                raise ParseError(f"{head} block not terminated by 'end'", lineno, source)
            b = lines[i].split("#", 1)[0].strip()
            i += 1
            if b == "end":
                break
            if b:
                body.append((i, b.split()))
        name, obj = _BLOCKS[head](words, body, env, lineno, source)
        env[name] = obj
    return env


def _expect(cond, msg, line, source):
    if not cond:
        raise ParseError(msg, line, source)


def _block_groupoid(words, body, env, lineno, source):
    _expect(len(words) == 2, "expected 'groupoid <name>'", lineno, source)
    units, arrows, comp, comp_line = [], {}, {}, {}
    for ln, w in body:
        if w[0] == "unit":
            _expect(len(w) == 2, "expected 'unit <id>'", ln, source)
            units.append(w[1])
        elif w[0] == "arrow":
            _expect(len(w) == 5, "expected 'arrow <id> d=<u> r=<u> inv=<id>'", ln, source)
            kv = {}
            for item in w[2:]:
                k, _, v = item.partition("=")
                kv[k] = v
            _expect(set(kv) == {"d", "r", "inv"} and all(kv.values()),
                    "arrow needs d=, r= and inv=", ln, source)
            arrows[w[1]] = (kv["d"], kv["r"], kv["inv"])
        elif w[0] == "comp":
            _expect(len(w) == 5 and w[3] == "=", "expected 'comp <a> <b> = <c>'", ln, source)
            comp[(w[1], w[2])] = w[4]
            comp_line[(w[1], w[2])] = ln
        else:
            raise ParseError(f"unexpected {w[0]!r} in groupoid block", ln, source)
    table = dict(arrows)
    for u in units:
        table.setdefault(u, (u, u, u))
    for (a, b), ln in comp_line.items():
        for x in (a, b):
            _expect(x in table, f"unknown arrow {x!r}", ln, source)
        _expect(table[a][0] == table[b][1],
                f"comp {a} {b}: d({a}) = {table[a][0]} differs from r({b}) = {table[b][1]}",
                ln, source)
    try:
        g = validate_groupoid(GroupoidTables(words[1], units, arrows, comp))
    except GroupoidLabError as exc:
        raise _attach(exc, lineno, source)
    return words[1], g


def _block_group(words, body, env, lineno, source):
    _expect(len(words) == 2, "expected 'group <name>'", lineno, source)
    elems, mul = [], {}
    for ln, w in body:
        if w[0] == "elem":
            _expect(len(w) == 2, "expected 'elem <id>'", ln, source)
            elems.append(w[1])
        elif w[0] == "mul":
            _expect(len(w) == 5 and w[3] == "=", "expected 'mul <a> <b> = <c>'", ln, source)
            mul[(w[1], w[2])] = w[4]
        elif w[0] in ("star", "inv"):
            # inverses are derived from the table; stated ones are checked
            _expect(len(w) == 4 and w[2] == "=", f"expected '{w[0]} <a> = <b>'", ln, source)
        else:
            raise ParseError(f"unexpected {w[0]!r} in group block", ln, source)
    try:
        grp = validate_group(words[1], elems, mul)
    except GroupoidLabError as exc:
        raise _attach(exc, lineno, source)
    for ln, w in body:
        if w[0] in ("star", "inv") and grp.inv(w[1]) != w[3]:
            raise ParseError(f"stated inverse of {w[1]} is wrong", ln, source)
    return words[1], grp


def _block_isgp(words, body, env, lineno, source):
    _expect(len(words) == 2, "expected 'isgp <name>'", lineno, source)
    elems, mul, star = [], {}, {}
    for ln, w in body:
        if w[0] == "elem":
            elems.append(w[1])
        elif w[0] == "mul":
            _expect(len(w) == 5 and w[3] == "=", "expected 'mul <a> <b> = <c>'", ln, source)
            mul[(w[1], w[2])] = w[4]
        elif w[0] == "star":
            _expect(len(w) == 4 and w[2] == "=", "expected 'star <a> = <b>'", ln, source)
            star[w[1]] = w[3]
        else:
            raise ParseError(f"unexpected {w[0]!r} in isgp block", ln, source)
    try:
        s = validate_inverse_semigroup(words[1], elems, mul, star)
    except GroupoidLabError as exc:
        raise _attach(exc, lineno, source)
    return words[1], s


def _block_action(words, body, env, lineno, source):
    m = re.match(r"action\s+(\S+)\s+sgp=(\S+)\s+space=\s*(.*)$", " ".join(words))
    _expect(m is not None, "expected 'action <name> sgp=<isgp> space= <pts>'", lineno, source)
    sgp = m.group(2)
    if sgp.startswith("expr:"):
        S = parse_expression(sgp, "isgp")
    else:
        S = _resolve(sgp, env, "isgp", lineno, source)
    pts = [p for p in re.split(r"[\s,]+", m.group(3)) if p]
    maps: dict[str, dict[str, str]] = {}
    for ln, w in body:
        _expect(len(w) == 6 and w[0] == "map" and w[2] == ":" and w[4] == "->",
                "expected 'map <s> : <x> -> <y>'", ln, source)
        maps.setdefault(w[1], {})[w[3]] = w[5]
    try:
        act = validate_action(S, pts, maps, name=m.group(1))
    except GroupoidLabError as exc:
        raise _attach(exc, lineno, source)
    return m.group(1), act


def _block_cocycle(words, body, env, lineno, source):
    _expect(len(words) == 6 and words[2] == "on" and words[4] == "to",
            "expected 'cocycle <name> on <groupoid> to <group>'", lineno, source)
    g = _resolve(words[3], env, "groupoid", lineno, source)
    grp = _resolve(words[5], env, "group", lineno, source)
    label = {}
    for ln, w in body:
        _expect(len(w) == 4 and w[0] == "label" and w[2] == "=",
                "expected 'label <arrow> = <element>'", ln, source)
        label[w[1]] = w[3]
    try:
        c = validate_cocycle(g, grp, label, name=words[1])
    except (GroupoidLabError, KeyError) as exc:
        if isinstance(exc, KeyError):
            raise ParseError(str(exc), lineno, source) from None
        raise _attach(exc, lineno, source)
    return words[1], c


_BLOCKS = {"groupoid": _block_groupoid, "group": _block_group, "isgp": _block_isgp,
           "action": _block_action, "cocycle": _block_cocycle}


def parse_spec(spec: str) -> Any:
    """Parse an ``expr:`` term or a table file path; a file yields its last object."""
    if spec.startswith("expr:"):
        return parse_expression(spec)
    path = Path(spec)
    if not path.exists():
        raise ParseError(f"no such file: {spec}")
    env = parse_document(path.read_text(encoding="utf-8"), source=str(path))
    if not env:
        raise ParseError("file defines nothing", source=str(path))
    return list(env.values())[-1]


# ---------------------------------------------------------------------------
# writers
# ---------------------------------------------------------------------------

def format_groupoid(g: FiniteGroupoid, name: str | None = None) -> str:
    out = [f"groupoid {name or g.name}"]
    out += [f"unit {u}" for u in g.units]
    for a in g.arrows:
        if not g.is_unit(a):
            out.append(f"arrow {a} d={g.src(a)} r={g.tgt(a)} inv={g.inv(a)}")
    for i, j in zip(*((g.comp_idx >= 0).nonzero())):
        out.append(f"comp {g.arrows[i]} {g.arrows[j]} = {g.arrows[g.comp_idx[i, j]]}")
    out.append("end")
    return "\n".join(out) + "\n"


def format_group(grp: FiniteGroup, name: str | None = None) -> str:
    out = [f"group {name or grp.name}"]
    out += [f"elem {e}" for e in grp.elements]
    out += [f"mul {a} {b} = {grp.mul(a, b)}" for a in grp.elements for b in grp.elements]
    out.append("end")
    return "\n".join(out) + "\n"


def format_cocycle(c: Cocycle, groupoid_ref: str, group_ref: str, name: str | None = None) -> str:
    out = [f"cocycle {name or c.name} on {groupoid_ref} to {group_ref}"]
    out += [f"label {a} = {s}" for a, s in c.as_dict().items()]
    out.append("end")
    return "\n".join(out) + "\n"
