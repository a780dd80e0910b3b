"""Alphabets, words and extended regular expressions.

Words are plain Python strings whose characters are alphabet symbols; the
empty string is the empty word.  On the command line and in JSON the empty
word is written ``_``.

Extended expressions add complement (``!``) and intersection (``&``) to the
usual union, concatenation and star, so star-free languages have a syntax of
their own::

    #   empty language        _   empty word
    ab  concatenation         a|b union
    a&b intersection          !a  complement
    a*  Kleene star

Precedence, tightest first: ``!``, ``*``, concatenation, ``&``, ``|``.
Binary operators associate to the left.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union as _U

from .errors import RegexSyntaxError, UnknownSymbolError

RESERVED = frozenset("|&!*()_#")
EPSILON_TEXT = "_"


@dataclass(frozen=True)
class Alphabet:
    """An ordered, finite, non-empty set of single-character symbols."""

    symbols: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, symbols: Iterable[str]):
        symbols = tuple(symbols)
        if not symbols:
            raise ValueError("alphabet must contain at least one symbol")
        for s in symbols:
            if not isinstance(s, str) or len(s) != 1:
                raise ValueError(f"alphabet symbols must be single characters, got {s!r}")
            if s in RESERVED or s.isspace() or not s.isprintable():
                raise ValueError(f"{s!r} cannot be used as an alphabet symbol")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbols in alphabet {''.join(symbols)!r}")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __str__(self) -> str:
        return "".join(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise UnknownSymbolError(symbol, self.symbols) from None

    def check_word(self, word: str) -> str:
        for s in word:
            if s not in self._index:
                raise UnknownSymbolError(s, self.symbols)
        return word


def parse_word(text: str, alphabet: Alphabet) -> str:
    """Read a word written on the command line; ``_`` is the empty word."""
    if text == EPSILON_TEXT:
        return ""
    return alphabet.check_word(text)


def format_word(word: str) -> str:
    return word if word else EPSILON_TEXT


def count_words_up_to(n_symbols: int, max_len: int) -> int:
    if n_symbols == 1:
        return max_len + 1
    return (n_symbols ** (max_len + 1) - 1) // (n_symbols - 1)


def words_up_to(alphabet: Alphabet, max_len: int) -> Iterator[str]:
    """Yield every word of length <= max_len in length-lexicographic order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if count_words_up_to(len(alphabet), max_len) > sys.maxsize:
        raise OverflowError(f"too many words of length <= {max_len}")
    for n in range(max_len + 1):
        for letters in itertools.product(alphabet.symbols, repeat=n):
            yield "".join(letters)


def words_of_length(alphabet: Alphabet, n: int) -> Iterator[str]:
    for letters in itertools.product(alphabet.symbols, repeat=n):
        yield "".join(letters)


# -- expression AST ---------------------------------------------------------


@dataclass(frozen=True)
class EmptyLang:
    pass


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Lit:
    symbol: str


@dataclass(frozen=True)
class Union:
    left: "ExtRegex"
    right: "ExtRegex"


@dataclass(frozen=True)
class Concat:
    left: "ExtRegex"
    right: "ExtRegex"


@dataclass(frozen=True)
class Star:
    inner: "ExtRegex"


@dataclass(frozen=True)
class Complement:
    inner: "ExtRegex"


@dataclass(frozen=True)
class Intersect:
    left: "ExtRegex"
    right: "ExtRegex"


ExtRegex = _U[EmptyLang, Epsilon, Lit, Union, Concat, Star, Complement, Intersect]


def children(e: ExtRegex) -> tuple:
    if isinstance(e, (Union, Concat, Intersect)):
        return (e.left, e.right)
    if isinstance(e, (Star, Complement)):
        return (e.inner,)
    return ()


def is_star_free_syntax(e: ExtRegex) -> bool:
    """True when no Star node occurs anywhere in the tree."""
    if isinstance(e, Star):
        return False
    return all(is_star_free_syntax(c) for c in children(e))


def symbols_of(e: ExtRegex) -> set[str]:
    if isinstance(e, Lit):
        return {e.symbol}
    out: set[str] = set()
    for c in children(e):
        out |= symbols_of(c)
    return out


def depth(e: ExtRegex) -> int:
    return 1 + max((depth(c) for c in children(e)), default=0)


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def error(self, message):
        raise RegexSyntaxError(message, self.text, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self):
        ch = self.peek()
        self.pos += 1
        return ch

    def parse(self) -> ExtRegex:
        e = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()!r}")
        return e

    def expr(self):
        e = self.inter()
        while self.peek() == "|":
            self.take()
            e = Union(e, self.inter())
        return e

    def inter(self):
        e = self.cat()
        while self.peek() == "&":
            self.take()
            e = Intersect(e, self.cat())
        return e

    def starts_unary(self, ch):
        return ch is not None and ch not in "|&)*"

    def cat(self):
        if not self.starts_unary(self.peek()):
            self.error("expected an expression" if self.peek() is None else f"unexpected {self.peek()!r}")
        e = self.unary()
        while self.starts_unary(self.peek()):
            e = Concat(e, self.unary())
        return e

    def unary(self):
        if self.peek() == "!":
            self.take()
            if not self.starts_unary(self.peek()):
                self.error("expected an operand after '!'")
            return Complement(self.unary())
        e = self.atom()
        while self.peek() == "*":
            self.take()
            e = Star(e)
        return e

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.take()
            e = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.take()
            return e
        if ch == "_":
            self.take()
            return Epsilon()
        if ch == "#":
            self.take()
            return EmptyLang()
        if ch is None:
            self.error("unexpected end of input")
        if ch not in self.alphabet:
            if ch in RESERVED:
                self.error(f"unexpected {ch!r}")
            raise UnknownSymbolError(ch, self.alphabet.symbols)
        self.take()
        return Lit(ch)


def parse_regex(text: str, alphabet: Alphabet) -> ExtRegex:
    return _Parser(text, alphabet).parse()


_PREC = {Union: 1, Intersect: 2, Concat: 3, Complement: 4, Star: 5}


def _prec(e) -> int:
    return _PREC.get(type(e), 6)


def print_regex(e: ExtRegex) -> str:
    """Render with the fewest parentheses that still reparse to ``e``."""

    def wrap(sub, ok):
        s = print_regex(sub)
        return s if ok else f"({s})"

    if isinstance(e, EmptyLang):
        return "#"
    if isinstance(e, Epsilon):
        return EPSILON_TEXT
    if isinstance(e, Lit):
        return e.symbol
    if isinstance(e, Star):
        return wrap(e.inner, _prec(e.inner) >= 5) + "*"
    if isinstance(e, Complement):
        return "!" + wrap(e.inner, _prec(e.inner) >= 4)
    p = _prec(e)
    op = {Union: "|", Intersect: "&", Concat: ""}[type(e)]
    return wrap(e.left, _prec(e.left) >= p) + op + wrap(e.right, _prec(e.right) > p)
