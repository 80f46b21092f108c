"""Formulas over the modal signature {~, ->, #} and its bimodal variant {~, ->, #1, #2}.

Conjunction, disjunction and the biconditional only exist at the text
surface: the parser rewrites them into negation and implication, and the
printer never re-sugars.
"""
from __future__ import annotations

import re
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

UNIMODAL = "unimodal"
BIMODAL = "bimodal"
SIGNATURES = (UNIMODAL, BIMODAL)


class Formula:
    """Immutable formula tree with structural equality and a cached hash."""

    __slots__ = ("_hash", "size", "_text")

    def children(self) -> Tuple["Formula", ...]:
        return ()

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({to_text(self)!r})"

    def variables(self) -> List[str]:
        """Variable names in order of first occurrence."""
        seen: Dict[str, None] = {}
        stack = [self]
        while stack:
            f = stack.pop()
            if isinstance(f, Var):
                seen.setdefault(f.name)
            else:
                stack.extend(reversed(f.children()))
        return list(seen)

    def modalities(self) -> set:
        out = set()
        stack = [self]
        while stack:
            f = stack.pop()
            if isinstance(f, Mod):
                out.add(f.index)
            stack.extend(f.children())
        return out


class Var(Formula):
    __hash__ = Formula.__hash__
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self.size = 0
        self._hash = hash(("Var", name))
        self._text = None

    def __eq__(self, other):
        return self is other or (isinstance(other, Var) and other.name == self.name)


class Neg(Formula):
    __hash__ = Formula.__hash__
    __slots__ = ("arg",)

    def __init__(self, arg: Formula):
        self.arg = arg
        self.size = arg.size + 1
        self._hash = hash(("Neg", arg._hash))
        self._text = None

    def children(self):
        return (self.arg,)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Neg) and other._hash == self._hash and other.arg == self.arg
        )


class Imp(Formula):
    __hash__ = Formula.__hash__
    __slots__ = ("left", "right")

    def __init__(self, left: Formula, right: Formula):
        self.left = left
        self.right = right
        self.size = left.size + right.size + 1
        self._hash = hash(("Imp", left._hash, right._hash))
        self._text = None

    def children(self):
        return (self.left, self.right)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Imp)
            and other._hash == self._hash
            and other.left == self.left
            and other.right == self.right
        )


class Mod(Formula):
    """The modal operator. ``index`` is None in the unimodal signature, 1 or 2 in the bimodal one."""

    __hash__ = Formula.__hash__
    __slots__ = ("arg", "index")

    def __init__(self, arg: Formula, index: Optional[int] = None):
        if index not in (None, 1, 2):
            raise ValueError(f"modality index must be None, 1 or 2, got {index!r}")
        self.arg = arg
        self.index = index
        self.size = arg.size + 1
        self._hash = hash(("Mod", index, arg._hash))
        self._text = None

    def children(self):
        return (self.arg,)

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Mod)
            and other._hash == self._hash
            and other.index == self.index
            and other.arg == self.arg
        )


# Sugar. These build primitive trees, never new node types.

def conj(a: Formula, b: Formula) -> Formula:
    return Neg(Imp(a, Neg(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Imp(Neg(a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return conj(Imp(a, b), Imp(b, a))


def signature_of(f: Formula) -> str:
    return BIMODAL if f.modalities() & {1, 2} else UNIMODAL


# ---------------------------------------------------------------- printing

def _operator(f: Mod) -> str:
    return "#" if f.index is None else f"#{f.index}"


def to_text(f: Formula) -> str:
    text = f._text
    if text is None:
        text = f._text = _render(f)
    return text


def _render(f: Formula) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Neg):
        return "~" + _atomic_text(f.arg)
    if isinstance(f, Mod):
        return _operator(f) + _atomic_text(f.arg)
    if isinstance(f, Imp):
        return f"{_atomic_text(f.left)} -> {to_text(f.right)}"
    raise TypeError(f"not a formula: {f!r}")


def _atomic_text(f: Formula) -> str:
    text = to_text(f)
    return f"({text})" if isinstance(f, Imp) else text


# ----------------------------------------------------------------- parsing

class ParseError(ValueError):
    """Syntax error. ``token`` is the 1-based index of the offending token."""

    def __init__(self, message: str, token: int, position: int):
        super().__init__(f"{message} at token {token} (column {position + 1})")
        self.token = token
        self.position = position


_TOKEN_RE = re.compile(r"\s*(?:(<->)|(->)|(~)|(#\d*)|(&)|(\|)|(\()|(\))|([a-z][a-z0-9]*))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", len(tokens) + 1, start)
        kinds = ("<->", "->", "~", "#", "&", "|", "(", ")", "var")
        for kind, group in zip(kinds, m.groups()):
            if group is not None:
                tokens.append((kind, group, m.start(m.lastindex)))
                break
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, signature: str):
        if signature not in SIGNATURES:
            raise ValueError(f"unknown signature {signature!r}")
        self.text = text
        self.signature = signature
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def error(self, message: str) -> ParseError:
        if self.i < len(self.tokens):
            return ParseError(message, self.i + 1, self.tokens[self.i][2])
        return ParseError(message + " (unexpected end of input)", self.i + 1, len(self.text))

    def take(self, kind: str):
        if self.peek() != kind:
            raise self.error(f"expected {kind!r}")
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        if not self.tokens:
            raise ParseError("empty formula", 1, 0)
        f = self.biconditional()
        if self.i != len(self.tokens):
            raise self.error("unexpected token")
        return f

    # <-> is left-associative and binds weakest
    def biconditional(self) -> Formula:
        f = self.implication()
        while self.peek() == "<->":
            self.i += 1
            f = iff(f, self.implication())
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.i += 1
            return Imp(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.i += 1
            f = disj(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.i += 1
            f = conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "~":
            self.i += 1
            return Neg(self.unary())
        if kind == "#":
            index = self.modality(self.tokens[self.i][1])
            self.i += 1
            return Mod(self.unary(), index)
        if kind == "(":
            self.i += 1
            f = self.biconditional()
            self.take(")")
            return f
        if kind == "var":
            name = self.tokens[self.i][1]
            self.i += 1
            return Var(name)
        raise self.error("expected a formula")

    def modality(self, lexeme: str) -> Optional[int]:
        digits = lexeme[1:]
        if self.signature == UNIMODAL:
            # "#1" is tolerated as a spelling of "#"; "#2" has no meaning here
            if digits in ("", "1"):
                return None
            raise self.error(f"modality {lexeme!r} not available in the unimodal signature")
        if digits in ("1", "2"):
            return int(digits)
        raise self.error(f"bimodal signature needs '#1' or '#2', got {lexeme!r}")


def parse(text: str, signature: str = UNIMODAL) -> Formula:
    """Parse ``text``; ``&``, ``|`` and ``<->`` are expanded into ``~`` and ``->``."""
    return _Parser(text, signature).parse()


# ----------------------------------------------------- closures/substitution

Closure = Tuple[Formula, ...]
Substitution = Mapping[str, Formula]


def closure(formulas: Iterable[Formula]) -> Closure:
    """Subformula closure of several formulas, children before parents.

    Order is by connective count, ties broken by printed form.
    """
    seen = set()
    stack = list(formulas)
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        stack.extend(f.children())
    return tuple(sorted(seen, key=lambda g: (g.size, to_text(g))))


def subformulas(f: Formula) -> Closure:
    return closure([f])


def substitute(f: Formula, s: Substitution) -> Formula:
    if not s:
        return f
    memo: Dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Var):
            out = s.get(g.name, g)
        elif isinstance(g, Neg):
            out = Neg(go(g.arg))
        elif isinstance(g, Mod):
            out = Mod(go(g.arg), g.index)
        else:
            out = Imp(go(g.left), go(g.right))
        memo[g] = out
        return out

    return go(f)


# ------------------------------------------------------------------ corpora

class CorpusTooLarge(ValueError):
    pass


DEFAULT_CORPUS_CAP = 2_000_000


def _modal_indices(signature: str) -> Tuple[Optional[int], ...]:
    return (None,) if signature == UNIMODAL else (1, 2)


def corpus_size(n_vars: int, max_connectives: int, signature: str = UNIMODAL) -> int:
    unary = 1 + len(_modal_indices(signature))
    counts = [n_vars]
    for n in range(1, max_connectives + 1):
        binary = sum(counts[i] * counts[n - 1 - i] for i in range(n))
        counts.append(unary * counts[n - 1] + binary)
    return sum(counts)


def enumerate_corpus(
    variables: Sequence[str],
    max_connectives: int,
    signature: str = UNIMODAL,
    cap: int = DEFAULT_CORPUS_CAP,
) -> Iterator[Formula]:
    """Every formula with at most ``max_connectives`` connectives, each once.

    Formulas come grouped by connective count; inside a group negations come
    first, then modalities, then implications split by left-operand size.
    """
    if max_connectives < 0:
        raise ValueError("max_connectives must be non-negative")
    total = corpus_size(len(variables), max_connectives, signature)
    if total > cap:
        raise CorpusTooLarge(f"corpus would hold {total} formulas, cap is {cap}")
    return _corpus(list(variables), max_connectives, signature)


def _corpus(variables, max_connectives, signature):
    indices = _modal_indices(signature)
    by_size: List[List[Formula]] = [[Var(v) for v in variables]]
    yield from by_size[0]
    for n in range(1, max_connectives + 1):
        layer: List[Formula] = [Neg(f) for f in by_size[n - 1]]
        for index in indices:
            layer.extend(Mod(f, index) for f in by_size[n - 1])
        for i in range(n):
            for a in by_size[i]:
                layer.extend(Imp(a, b) for b in by_size[n - 1 - i])
        by_size.append(layer)
        yield from layer
