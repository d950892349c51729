"""Grammar and parsing-expression data model.

Expressions are immutable trees. Nonterminals refer to rules by name, so a
grammar is a flat, ordered collection of named rules plus label metadata:
a recovery expression and an optional diagnostic message per label.

Grammars and expressions are never mutated after construction and may be
shared freely across concurrent parses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

#: Reserved label for ordinary, backtrackable failure.  It is not a member
#: of a grammar's label set; ordered choice catches it, and only it.
FAIL = "fail"

# Dispatch codes, one per expression variant.  The match kernels switch on
# these instead of isinstance chains.
EMPTY, ANY, TERMINAL, NONTERMINAL, SEQUENCE, CHOICE, STAR, NOT, THROW = range(9)

#: Expected-set item standing for "any character" (produced by `.`).
ANY_ITEM = "<any>"


class ReservedLabelError(ValueError):
    """A throw or annotation used the reserved label ``fail``."""


def check_label(label: str) -> str:
    if not isinstance(label, str) or not label:
        raise ValueError(f"label must be a non-empty string, got {label!r}")
    if label == FAIL:
        raise ReservedLabelError("'fail' is reserved for ordinary failure")
    return label


@dataclass(frozen=True, slots=True)
class Empty:
    """Matches the empty string; always succeeds, consumes nothing."""

    code = EMPTY


@dataclass(frozen=True, slots=True)
class Any:
    """Matches and consumes one arbitrary character; fails only at end of input."""

    code = ANY


@dataclass(frozen=True, slots=True)
class Terminal:
    """Matches and consumes one specific character."""

    symbol: str
    code = TERMINAL

    def __post_init__(self) -> None:
        if not isinstance(self.symbol, str) or len(self.symbol) != 1:
            raise ValueError(f"terminal symbol must be a single character, got {self.symbol!r}")


@dataclass(frozen=True, slots=True)
class NonTerminal:
    """Matches the body of the named rule."""

    name: str
    code = NONTERMINAL


@dataclass(frozen=True, slots=True)
class Sequence:
    left: "Expr"
    right: "Expr"
    code = SEQUENCE


@dataclass(frozen=True, slots=True)
class Choice:
    """Ordered choice: try ``left``; on ordinary failure only, try ``right``."""

    left: "Expr"
    right: "Expr"
    code = CHOICE


@dataclass(frozen=True, slots=True)
class Star:
    """Zero-or-more repetition; stops at the first ordinary failure."""

    inner: "Expr"
    code = STAR


@dataclass(frozen=True, slots=True)
class Not:
    """Negative lookahead: succeeds iff ``inner`` fails; never consumes."""

    inner: "Expr"
    code = NOT


@dataclass(frozen=True, slots=True)
class Throw:
    """Raises the given label at the current position.

    Unlike ordinary failure, a raised label is not caught by choice or
    repetition; it either aborts the parse or triggers the label's recovery
    expression.
    """

    label: str
    code = THROW

    def __post_init__(self) -> None:
        check_label(self.label)


Expr = Union[Empty, Any, Terminal, NonTerminal, Sequence, Choice, Star, Not, Throw]


@dataclass(frozen=True, slots=True)
class Rule:
    """A named rule.  Lexical rules play the role of token definitions:
    analyses treat them as atomic items and diagnostics report their name
    instead of individual characters."""

    name: str
    body: Expr
    lexical: bool = False


@dataclass(frozen=True)
class Grammar:
    """An ordered rule set with a start rule, known labels, and per-label
    recovery expressions and messages.

    ``recovery`` keys must be members of ``labels`` (or the reserved
    ``fail``, which disables the usual backtracking conservativity).
    ``messages`` keys must be members of ``labels``.
    """

    rules: tuple[Rule, ...]
    start: str
    labels: frozenset[str] = frozenset()
    recovery: Mapping[str, Expr] = field(default_factory=dict)
    messages: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "labels", frozenset(self.labels))
        object.__setattr__(self, "recovery", dict(self.recovery))
        object.__setattr__(self, "messages", dict(self.messages))
        by_name: dict[str, Rule] = {}
        for r in self.rules:
            by_name.setdefault(r.name, r)
        object.__setattr__(self, "_by_name", by_name)

    def rule(self, name: str) -> Rule:
        return self._by_name[name]  # type: ignore[attr-defined]

    def has_rule(self, name: str) -> bool:
        return name in self._by_name  # type: ignore[attr-defined]

    @property
    def rule_names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.rules)


def seq(*exprs: Expr) -> Expr:
    """Right-fold expressions into nested binary sequences."""
    if not exprs:
        return Empty()
    out = exprs[-1]
    for e in reversed(exprs[:-1]):
        out = Sequence(e, out)
    return out


def choice(*exprs: Expr) -> Expr:
    """Right-fold expressions into nested binary ordered choices."""
    if not exprs:
        raise ValueError("choice needs at least one alternative")
    out = exprs[-1]
    for e in reversed(exprs[:-1]):
        out = Choice(e, out)
    return out


def literal(text: str) -> Expr:
    """A sequence of single-character terminals matching ``text`` exactly."""
    if not text:
        raise ValueError("literal must be non-empty")
    return seq(*(Terminal(c) for c in text))


def desugar_annotation(inner: Expr, label: str) -> Expr:
    """Expand the ``[p]^l`` annotation: ``p``, or else raise label ``l``.

    Purely structural; no simplification is performed even when the throw
    branch is unreachable (e.g. an always-succeeding ``inner``).
    """
    check_label(label)
    return Choice(inner, Throw(label))


def iter_subexprs(e: Expr) -> Iterator[Expr]:
    """Yield ``e`` and every descendant expression, preorder."""
    stack = [e]
    while stack:
        cur = stack.pop()
        yield cur
        code = cur.code
        if code in (SEQUENCE, CHOICE):
            stack.append(cur.right)
            stack.append(cur.left)
        elif code in (STAR, NOT):
            stack.append(cur.inner)


def referenced_names(e: Expr) -> set[str]:
    return {sub.name for sub in iter_subexprs(e) if sub.code == NONTERMINAL}


# -- item encoding -----------------------------------------------------------
#
# Expected sets and FIRST/FOLLOW sets mix lexical-rule names with raw
# characters.  Characters are carried in their display form ('x', quoted and
# escaped) so the two kinds cannot collide and sets sort deterministically.

_CHAR_ESCAPES = {"\n": "\\n", "\t": "\\t", "\r": "\\r", "\\": "\\\\", "'": "\\'"}
_CHAR_UNESCAPES = {v: k for k, v in _CHAR_ESCAPES.items()}


def escape_char(c: str) -> str:
    return _CHAR_ESCAPES.get(c, c)


def terminal_item(c: str) -> str:
    """Display-form item for a terminal character, e.g. ``'a'`` or ``'\\n'``."""
    return f"'{escape_char(c)}'"


def item_char(item: str) -> str | None:
    """Inverse of :func:`terminal_item`; None for rule-name items."""
    if len(item) >= 3 and item[0] == "'" and item[-1] == "'":
        body = item[1:-1]
        if body in _CHAR_UNESCAPES:
            return _CHAR_UNESCAPES[body]
        if len(body) == 1:
            return body
    return None


def validate_grammar(g: Grammar) -> list[str]:
    """Structural diagnostics; an empty list means every grammar invariant
    holds and any parse over the grammar is lookup-safe."""
    diags: list[str] = []
    seen: set[str] = set()
    for r in g.rules:
        if r.name in seen:
            diags.append(f"duplicate rule '{r.name}'")
        seen.add(r.name)
    if g.start not in seen:
        diags.append(f"start rule '{g.start}' is not defined")
    if FAIL in g.labels:
        diags.append("label set contains the reserved label 'fail'")

    def check_refs(e: Expr, where: str) -> None:
        for name in sorted(referenced_names(e)):
            if name not in seen:
                diags.append(f"undefined nonterminal '{name}' (referenced from {where})")

    for r in g.rules:
        check_refs(r.body, f"rule '{r.name}'")
    for label in sorted(g.recovery):
        if label != FAIL and label not in g.labels:
            diags.append(f"recovery for unknown label '{label}'")
        check_refs(g.recovery[label], f"recovery for label '{label}'")
    for label in sorted(g.messages):
        if label not in g.labels:
            diags.append(f"message for unknown label '{label}'")
    return diags
