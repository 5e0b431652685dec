"""Reader and writer for a subset of HOA v1 with alternation, plus DOT export.

Supported subset:

* state-based acceptance, ``acc-name`` one of ``parity max even m``,
  ``Buchi`` or ``co-Buchi`` with the matching ``Acceptance`` line;
* explicit edge labels over the atomic propositions; letters are the
  minterms ``0 .. |alphabet|-1`` (bit ``j`` of the letter index is AP ``j``);
* destinations are positive Boolean formulas over state numbers using ``&``,
  ``|`` and parentheses; several edges with the same letter are disjoined.

Two lowercase (tool-specific) headers carry what plain HOA cannot:
``letter-names:`` lists the letter names in minterm order, and
``special-states:`` records the designated ``reject``/``accept`` states.
``properties: weak`` marks a weak automaton, ``properties: safety`` a safety one.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import formulas as fm
from .automata import AlternatingAutomaton, ensure_valid, transition_graph
from .errors import InputError, UnsupportedFeature

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>/\*.*?\*/)
  | (?P<marker>--BODY--|--END--|--ABORT--)
  | (?P<header>[A-Za-z_][A-Za-z0-9_.-]*:)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<int>\d+)
  | (?P<alias>@[A-Za-z0-9_.-]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.-]*)
  | (?P<punct>[\[\]{}()&|!])
    """,
    re.VERBOSE | re.DOTALL,
)

_UNSUPPORTED_ACCEPTANCE = {
    "Streett", "Rabin", "generalized-Buchi", "generalized-co-Buchi",
    "generalized-Rabin", "all", "none",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def _syntax(tok: Token | None, message: str, unsupported: bool = False) -> InputError:
    where = "end of input" if tok is None else f"line {tok.line}, column {tok.col}"
    cls = UnsupportedFeature if unsupported else InputError
    return cls(f"{where}: {message}")


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise InputError(
                f"line {line}, column {pos - line_start + 1}: unexpected character {text[pos]!r}"
            )
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    return out


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, kind: str | None = None, text: str | None = None) -> Token:
        tok = self.peek()
        if tok is None:
            raise _syntax(None, f"expected {text or kind}")
        if (kind and tok.kind != kind) or (text and tok.text != text):
            raise _syntax(tok, f"expected {text or kind} but found {tok.text!r}")
        self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind and (text is None or tok.text == text)

    def rest_of_item(self) -> list[Token]:
        """Tokens up to the next header or body marker."""
        out = []
        while True:
            tok = self.peek()
            if tok is None or tok.kind in ("header", "marker"):
                return out
            out.append(tok)
            self.pos += 1


def _unquote(tok: Token) -> str:
    if tok.kind != "string":
        raise _syntax(tok, f"expected a quoted string but found {tok.text!r}")
    return bytes(tok.text[1:-1], "utf-8").decode("unicode_escape")


def _int(tok: Token) -> int:
    if tok.kind != "int":
        raise _syntax(tok, f"expected a number but found {tok.text!r}")
    return int(tok.text)


# -- acceptance conditions -----------------------------------------------------

def parity_acceptance(m: int) -> str:
    """Canonical ``Acceptance`` body for ``parity max even m``."""
    if m == 0:
        return "f"

    def cond(k):
        if k == 0:
            return "Inf(0)"
        inner = cond(k - 1)
        if k % 2 == 0:
            return f"Inf({k}) | {inner}"
        if "|" in inner:
            inner = f"({inner})"
        return f"Fin({k}) & {inner}"

    return cond(m - 1)


def _acceptance_for(acc_name: list[Token]) -> tuple[str, int, str]:
    """(kind, number of sets, acceptance body) for a supported acc-name."""
    words = [t.text for t in acc_name]
    if not words:
        raise InputError("acc-name is empty")
    head = acc_name[0]
    if words == ["Buchi"]:
        return "buchi", 1, "Inf(0)"
    if words == ["co-Buchi"]:
        return "cobuchi", 1, "Fin(0)"
    if words[0] == "parity":
        if len(words) != 4 or acc_name[3].kind != "int":
            raise _syntax(head, "acc-name parity needs 'parity max even m'")
        if words[1:3] != ["max", "even"]:
            raise _syntax(head, f"parity {words[1]} {words[2]} is not supported, only 'max even'", True)
        m = int(words[3])
        return "parity", m, parity_acceptance(m)
    if words[0] in _UNSUPPORTED_ACCEPTANCE:
        raise _syntax(head, f"{words[0]} acceptance is not supported", True)
    raise _syntax(head, f"unknown acceptance name {words[0]!r}", True)


def _squash(text: str) -> str:
    return re.sub(r"\s+", "", text)


# -- labels and destinations ---------------------------------------------------

def _parse_label(s: _Stream, n_ap: int):
    """Parse a label expression ending at ']'; returns a predicate on letter indices."""

    def disj():
        parts = [conj()]
        while s.at("punct", "|"):
            s.take()
            parts.append(conj())
        return lambda b: any(p(b) for p in parts)

    def conj():
        parts = [unary()]
        while s.at("punct", "&"):
            s.take()
            parts.append(unary())
        return lambda b: all(p(b) for p in parts)

    def unary():
        tok = s.peek()
        if tok is None:
            raise _syntax(None, "unterminated label")
        if tok.text == "!":
            s.take()
            inner = unary()
            return lambda b: not inner(b)
        if tok.text == "(":
            s.take()
            inner = disj()
            s.take("punct", ")")
            return inner
        if tok.kind == "int":
            s.take()
            j = int(tok.text)
            if j >= n_ap:
                raise _syntax(tok, f"atomic proposition {j} is not declared")
            return lambda b: bool(b >> j & 1)
        if tok.kind == "ident" and tok.text in ("t", "f"):
            s.take()
            value = tok.text == "t"
            return lambda b: value
        if tok.kind == "alias":
            raise _syntax(tok, "aliases are not supported", True)
        raise _syntax(tok, f"unexpected {tok.text!r} in label")

    return disj()


def _parse_destination(s: _Stream, n_states: int) -> fm.Formula:

    def disj():
        parts = [conj()]
        while s.at("punct", "|"):
            s.take()
            parts.append(conj())
        return fm.disj(parts)

    def conj():
        parts = [primary()]
        while s.at("punct", "&"):
            s.take()
            parts.append(primary())
        return fm.conj(parts)

    def primary():
        tok = s.peek()
        if tok is None:
            raise _syntax(None, "missing destination")
        if tok.text == "(":
            s.take()
            inner = disj()
            s.take("punct", ")")
            return inner
        if tok.kind == "int":
            s.take()
            q = int(tok.text)
            if q >= n_states:
                raise _syntax(tok, f"destination state {q} is out of range")
            return fm.atom(q)
        raise _syntax(tok, f"unexpected {tok.text!r} in destination")

    return disj()


def _acc_sets(s: _Stream) -> list[int]:
    s.take("punct", "{")
    out = []
    while not s.at("punct", "}"):
        out.append(_int(s.take()))
    s.take("punct", "}")
    return out


# -- parse -------------------------------------------------------------------

def parse(text: str, *, validate: bool = True) -> AlternatingAutomaton:
    """Read one automaton in the supported HOA subset.

    With ``validate=False`` structural problems other than syntax are left
    for :func:`lazyweak.automata.validate` to report.
    """
    s = _Stream(tokenize(text))
    first = s.take("header")
    if first.text != "HOA:":
        raise _syntax(first, "file must start with 'HOA: v1'")
    version = s.take()
    if version.text != "v1":
        raise _syntax(version, f"unsupported HOA version {version.text!r}", True)

    n_states = None
    start = None
    n_ap = None
    acc_name = None
    acceptance = None
    properties: set[str] = set()
    letter_names = None
    special: dict[str, int] = {}
    while not s.at("marker"):
        tok = s.peek()
        if tok is None:
            raise _syntax(None, "missing --BODY--")
        head = s.take("header")
        name = head.text[:-1]
        items = s.rest_of_item()
        if name == "States":
            if len(items) != 1:
                raise _syntax(head, "States: takes one number")
            n_states = _int(items[0])
        elif name == "Start":
            if start is not None:
                raise _syntax(head, "several initial states are not supported", True)
            if len(items) != 1:
                raise _syntax(head, "conjunctive initial states are not supported", True)
            start = _int(items[0])
        elif name == "AP":
            if not items:
                raise _syntax(head, "AP: needs a count")
            n_ap = _int(items[0])
            if len(items) - 1 != n_ap:
                raise _syntax(head, f"AP: declares {n_ap} propositions but names {len(items) - 1}")
            for t in items[1:]:
                _unquote(t)
        elif name == "acc-name":
            acc_name = (head, items)
        elif name == "Acceptance":
            if items and items[0].kind == "ident" and items[0].text in _UNSUPPORTED_ACCEPTANCE:
                raise _syntax(items[0], f"{items[0].text} acceptance is not supported", True)
            if not items or items[0].kind != "int":
                raise _syntax(head, "Acceptance: needs a set count and a condition")
            acceptance = (head, _int(items[0]), " ".join(t.text for t in items[1:]))
        elif name == "properties":
            properties.update(t.text for t in items)
        elif name == "letter-names":
            letter_names = [_unquote(t) for t in items]
        elif name == "special-states":
            if len(items) % 2:
                raise _syntax(head, "special-states: expects pairs 'role state'")
            for role, q in zip(items[::2], items[1::2]):
                if role.text not in ("reject", "accept"):
                    raise _syntax(role, f"unknown special state role {role.text!r}")
                special[role.text] = _int(q)
        elif name == "Alias":
            raise _syntax(head, "aliases are not supported", True)
        elif name in ("name", "tool") or name[0].islower():
            pass
        elif name == "controllable-AP":
            raise _syntax(head, "controllable-AP is not supported", True)
        else:
            raise _syntax(head, f"unknown header {name!r}", True)

    if n_states is None:
        raise InputError("missing States: header")
    if start is None:
        raise InputError("missing Start: header")
    if n_ap is None:
        raise InputError("missing AP: header")
    if acc_name is None:
        raise InputError("missing acc-name: header")
    if acceptance is None:
        raise InputError("missing Acceptance: header")
    if "trans-acc" in properties:
        raise UnsupportedFeature("transition-based acceptance is not supported")
    if "implicit-labels" in properties:
        raise UnsupportedFeature("implicit edge labels are not supported")

    kind, m, expected = _acceptance_for(acc_name[1])
    acc_head, acc_count, acc_body = acceptance
    if acc_count != m or _squash(acc_body) != _squash(expected):
        raise _syntax(
            acc_head,
            f"Acceptance does not match acc-name (expected '{m} {expected}')",
            unsupported=True,
        )

    size = 1 << n_ap
    if letter_names is None:
        letter_names = [str(b) for b in range(size)]
    if len(letter_names) > size:
        raise InputError(f"{len(letter_names)} letter names but only {size} minterms over {n_ap} propositions")
    if len(set(letter_names)) != len(letter_names):
        raise InputError("letter names repeat")
    alphabet = tuple(letter_names)

    marker = s.take("marker")
    if marker.text != "--BODY--":
        raise _syntax(marker, "expected --BODY--")

    names: list[str | None] = [None] * n_states
    sets: list[list[int] | None] = [None] * n_states
    edges: dict[tuple[int, str], list[fm.Formula]] = {}
    current = None
    while True:
        tok = s.peek()
        if tok is None:
            raise _syntax(None, "missing --END--")
        if tok.kind == "marker":
            s.take()
            if tok.text == "--END--":
                break
            raise _syntax(tok, "automaton was aborted" if tok.text == "--ABORT--" else "unexpected marker")
        if tok.kind == "header":
            if tok.text != "State:":
                raise _syntax(tok, f"unexpected header {tok.text!r} in body")
            s.take()
            if s.at("punct", "["):
                raise _syntax(s.peek(), "state labels are not supported", True)
            qtok = s.take()
            q = _int(qtok)
            if q >= n_states:
                raise _syntax(qtok, f"state {q} is out of range")
            if sets[q] is not None:
                raise _syntax(qtok, f"state {q} is declared twice")
            current = q
            names[q] = _unquote(s.take()) if s.at("string") else str(q)
            sets[q] = _acc_sets(s) if s.at("punct", "{") else []
            continue
        if current is None:
            raise _syntax(tok, "edge before any State:")
        if not s.at("punct", "["):
            raise _syntax(tok, "implicit (unlabeled) edges are not supported", True)
        s.take()
        label = _parse_label(s, n_ap)
        s.take("punct", "]")
        dest = _parse_destination(s, n_states)
        if s.at("punct", "{"):
            raise _syntax(s.peek(), "transition-based acceptance is not supported", True)
        for b, letter in enumerate(alphabet):
            if label(b):
                edges.setdefault((current, letter), []).append(dest)

    missing = [q for q in range(n_states) if sets[q] is None]
    if missing:
        raise InputError(f"states {missing} have no State: section")

    priority = []
    for q in range(n_states):
        acc = sets[q]
        if any(c >= m for c in acc):
            raise InputError(f"state {q} uses acceptance set outside 0..{m - 1}")
        if kind == "parity":
            if len(acc) != 1:
                raise InputError(f"state {q} must belong to exactly one parity set, found {acc}")
            priority.append(acc[0])
        elif kind == "buchi":
            priority.append(2 if acc else 1)
        else:
            priority.append(1 if acc else 0)

    if kind == "parity":
        d = m - 1 if (m - 1) % 2 == 0 else m
        if "safety" in properties:
            kind = "safety"
        elif "weak" in properties:
            kind = "weak"
    else:
        d = 2

    delta = {}
    for q in range(n_states):
        for a in alphabet:
            got = edges.get((q, a))
            if got:
                delta[q, a] = fm.disj(got)
            elif validate:
                raise InputError(f"state {q} has no transition on letter {a!r}")

    A = AlternatingAutomaton(
        names=tuple(names),
        initial=start,
        alphabet=alphabet,
        delta=delta,
        priority=tuple(priority),
        d=d,
        kind=kind,
        reject=special.get("reject"),
        accept=special.get("accept"),
    )
    return ensure_valid(A) if validate else A


# -- emit --------------------------------------------------------------------

def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def ap_count(alphabet_size: int) -> int:
    return max(0, (alphabet_size - 1).bit_length())


def minterm(b: int, n_ap: int) -> str:
    if n_ap == 0:
        return "t"
    return "&".join(str(j) if b >> j & 1 else f"!{j}" for j in range(n_ap))


def emit(A: AlternatingAutomaton) -> str:
    """Deterministic HOA text for ``A``."""
    ensure_valid(A)
    k = ap_count(len(A.alphabet))
    if A.kind == "buchi":
        acc_name, m, body = "Buchi", 1, "Inf(0)"
    elif A.kind == "cobuchi":
        acc_name, m, body = "co-Buchi", 1, "Fin(0)"
    else:
        m = A.d + 1
        acc_name, body = f"parity max even {m}", parity_acceptance(m)
    props = ["explicit-labels", "state-acc"]
    if A.kind in ("weak", "safety"):
        props.append("weak")
    if A.kind == "safety":
        props.append("safety")
    lines = [
        "HOA: v1",
        f"States: {A.n}",
        f"Start: {A.initial}",
        f"AP: {k}" + "".join(f" {_quote(f'p{j}')}" for j in range(k)),
        "letter-names: " + " ".join(_quote(a) for a in A.alphabet),
        f"acc-name: {acc_name}",
        f"Acceptance: {m} {body}",
        "properties: " + " ".join(props),
    ]
    special = [(role, q) for role, q in (("reject", A.reject), ("accept", A.accept)) if q is not None]
    if special:
        lines.append("special-states: " + " ".join(f"{role} {q}" for role, q in special))
    lines.append("--BODY--")
    for q in A.states:
        p = A.priority[q]
        if A.kind == "buchi":
            acc = " {0}" if p == 2 else ""
        elif A.kind == "cobuchi":
            acc = " {0}" if p == 1 else ""
        else:
            acc = f" {{{p}}}"
        lines.append(f"State: {q} {_quote(A.names[q])}{acc}")
        for b, a in enumerate(A.alphabet):
            lines.append(f"[{minterm(b, k)}] {fm.format_formula(A.delta[q, a])}")
    lines.append("--END--")
    return "\n".join(lines) + "\n"


def canonical_text(text: str) -> str:
    """Whitespace-normalized form used to compare HOA files."""
    out = []
    for line in text.splitlines():
        line = re.sub(r"/\*.*?\*/", "", line).strip()
        if line:
            out.append(" ".join(line.split()))
    return "\n".join(out)


# -- DOT ---------------------------------------------------------------------

def to_dot(A: AlternatingAutomaton) -> str:
    """Graphviz rendering: nodes ``name:priority``, one edge per transition-graph edge."""
    succ = transition_graph(A)
    lines = ["digraph automaton {", "  rankdir=LR;"]
    for q in A.states:
        label = f"{A.names[q]}:{A.priority[q]}".replace('"', '\\"')
        extra = ", style=bold" if q == A.initial else ""
        lines.append(f'  {q} [label="{label}"{extra}];')
    for q in A.states:
        for r in sorted(succ[q]):
            lines.append(f"  {q} -> {r};")
    lines.append("}")
    return "\n".join(lines) + "\n"
