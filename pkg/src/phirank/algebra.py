"""Finite monoids, recognizing homomorphisms and syntactic monoids.

A language ``A`` over an alphabet is recognized by a homomorphism ``alpha``
into a finite monoid when it is a union of fibres of ``alpha``.  The
syntactic monoid is computed as the transformation monoid of the minimal
complete automaton, with elements numbered in BFS order of discovery.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

from .automata import Dfa, counterexample, minimize
from .core import Alphabet, format_word
from .errors import AlphabetMismatchError, MonoidLimitError

DEFAULT_MONOID_LIMIT = 100_000


@dataclass(frozen=True)
class FiniteMonoid:
    """Monoid given by its multiplication table ``table[x][y] = x*y``.

    Only the shape of the table is validated here; use
    :func:`check_monoid_axioms` for associativity and the identity laws.
    """

    identity: int
    table: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.table)
        n = len(rows)
        if n == 0:
            raise ValueError("a monoid has at least one element")
        if any(len(r) != n for r in rows):
            raise ValueError("multiplication table must be square")
        if any(not 0 <= v < n for r in rows for v in r):
            raise ValueError("table entry out of range")
        if not 0 <= self.identity < n:
            raise ValueError("identity out of range")
        object.__setattr__(self, "table", rows)

    @property
    def size(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def power(self, x: int, n: int) -> int:
        out = self.identity
        for _ in range(n):
            out = self.table[out][x]
        return out


def cyclic_group(n: int) -> FiniteMonoid:
    return FiniteMonoid(0, [[(i + j) % n for j in range(n)] for i in range(n)])


def trivial_monoid() -> FiniteMonoid:
    return FiniteMonoid(0, [[0]])


def monoid_axiom_violation(m: FiniteMonoid) -> Optional[tuple]:
    """Return ``("identity", x)`` or ``("associativity", x, y, z)`` for the
    first failing law, or None when ``m`` is a monoid."""
    t, e = m.table, m.identity
    for x in range(m.size):
        if t[e][x] != x or t[x][e] != x:
            return ("identity", x)
    for x in range(m.size):
        tx = t[x]
        for y in range(m.size):
            xy = tx[y]
            ty = t[y]
            for z in range(m.size):
                if t[xy][z] != tx[ty[z]]:
                    return ("associativity", x, y, z)
    return None


def check_monoid_axioms(m: FiniteMonoid) -> bool:
    return monoid_axiom_violation(m) is None


def aperiodicity_witness(m: FiniteMonoid) -> Optional[int]:
    """An element whose powers never stabilize, i.e. one generating a
    non-trivial cyclic group; None when ``m`` is aperiodic."""
    for x in range(m.size):
        p = x
        for _ in range(m.size):
            nxt = m.table[p][x]
            if nxt == p:
                break
            p = nxt
        else:
            return x
    return None


def is_aperiodic(m: FiniteMonoid) -> bool:
    return aperiodicity_witness(m) is None


@dataclass(frozen=True)
class MonoidHom:
    """Homomorphism from the free monoid on ``alphabet`` into ``target``."""

    alphabet: Alphabet
    target: FiniteMonoid
    gen_image: Mapping

    def __post_init__(self):
        image = dict(self.gen_image)
        if set(image) != set(self.alphabet):
            raise ValueError("gen_image must map exactly the alphabet symbols")
        if any(not 0 <= v < self.target.size for v in image.values()):
            raise ValueError("generator image out of range")
        object.__setattr__(self, "gen_image", image)

    def __call__(self, word: str) -> int:
        x = self.target.identity
        t = self.target.table
        for s in self.alphabet.check_word(word):
            x = t[x][self.gen_image[s]]
        return x


@dataclass(frozen=True)
class Recognizer:
    hom: MonoidHom
    accept_elems: frozenset

    def __post_init__(self):
        object.__setattr__(self, "accept_elems", frozenset(self.accept_elems))

    @property
    def alphabet(self) -> Alphabet:
        return self.hom.alphabet

    def accepts(self, word: str) -> bool:
        return self.hom(word) in self.accept_elems


@dataclass(frozen=True)
class SyntacticMonoidResult:
    monoid: FiniteMonoid
    eval: MonoidHom
    representative_words: tuple
    accept_elems: frozenset
    transformations: tuple = ()

    @property
    def size(self) -> int:
        return self.monoid.size

    def recognizer(self) -> Recognizer:
        return Recognizer(self.eval, self.accept_elems)

    def to_json(self) -> dict:
        return {
            "size": self.monoid.size,
            "identity": self.monoid.identity,
            "table": [list(r) for r in self.monoid.table],
            "gen_image": dict(sorted(self.eval.gen_image.items())),
            "accept": sorted(self.accept_elems),
            "representatives": [format_word(w) for w in self.representative_words],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def transition_monoid(d: Dfa, monoid_limit: int = DEFAULT_MONOID_LIMIT) -> SyntacticMonoidResult:
    """Transformation monoid of the minimal automaton of ``L(d)``.

    Elements are the state maps induced by words, discovered breadth-first
    from the identity by right-extension with each symbol in alphabet order,
    so every representative is the length-lexicographically least word
    inducing its map.
    """
    d = minimize(d)
    n = d.state_count
    gens = [tuple(d.delta[q][a] for q in range(n)) for a in range(len(d.alphabet))]
    identity = tuple(range(n))
    ids = {identity: 0}
    maps = [identity]
    words = [""]
    queue = deque([0])
    while queue:
        x = queue.popleft()
        f = maps[x]
        for a, sym in enumerate(d.alphabet):
            g = gens[a]
            h = tuple(g[f[q]] for q in range(n))
            if h not in ids:
                if len(maps) >= monoid_limit:
                    raise MonoidLimitError("transition monoid size", monoid_limit)
                ids[h] = len(maps)
                maps.append(h)
                words.append(words[x] + sym)
                queue.append(ids[h])

    # x*y means "act by x, then by y".
    table = [[ids[tuple(g[f[q]] for q in range(n))] for g in maps] for f in maps]
    monoid = FiniteMonoid(0, table)
    gen_image = {sym: ids[gens[a]] for a, sym in enumerate(d.alphabet)}
    accept = frozenset(i for i, f in enumerate(maps) if f[d.start] in d.accept)
    return SyntacticMonoidResult(
        monoid, MonoidHom(d.alphabet, monoid, gen_image), tuple(words), accept, tuple(maps)
    )


def syntactic_monoid(d: Dfa, monoid_limit: int = DEFAULT_MONOID_LIMIT) -> SyntacticMonoidResult:
    return transition_monoid(d, monoid_limit)


def recognizer_to_dfa(r: Recognizer) -> Dfa:
    """Automaton on the elements reachable from the identity."""
    m, hom = r.hom.target, r.hom
    gens = [hom.gen_image[s] for s in hom.alphabet]
    ids = {m.identity: 0}
    order = [m.identity]
    delta = []
    i = 0
    while i < len(order):
        x = order[i]
        row = []
        for g in gens:
            y = m.table[x][g]
            if y not in ids:
                ids[y] = len(order)
                order.append(y)
            row.append(ids[y])
        delta.append(row)
        i += 1
    accept = frozenset(ids[x] for x in order if x in r.accept_elems)
    return Dfa(hom.alphabet, 0, accept, delta)


def recognizer_counterexample(r: Recognizer, d: Dfa) -> Optional[tuple]:
    """Two words in one fibre of ``r.hom`` on which ``d`` disagrees.

    Returns None when ``L(d)`` is a union of fibres.
    """
    if r.alphabet != d.alphabet:
        raise AlphabetMismatchError(f"alphabets differ: {r.alphabet} vs {d.alphabet}")
    m, hom = r.hom.target, r.hom
    gens = [hom.gen_image[s] for s in hom.alphabet]
    start = (d.start, m.identity)
    word_of = {start: ""}
    queue = deque([start])
    witness: dict = {}  # element -> {accepted?: word}
    while queue:
        q, x = queue.popleft()
        w = word_of[(q, x)]
        seen = witness.setdefault(x, {})
        seen.setdefault(q in d.accept, w)
        if len(seen) == 2:
            return (seen[True], seen[False])
        for a, sym in enumerate(hom.alphabet):
            t = (d.delta[q][a], m.table[x][gens[a]])
            if t not in word_of:
                word_of[t] = w + sym
                queue.append(t)

    image = frozenset(x for x, seen in witness.items() if True in seen)
    probe = recognizer_to_dfa(Recognizer(hom, image))
    w = counterexample(probe, d)
    if w is not None:
        raise RuntimeError(f"fibres are uniform but the recognizer disagrees on {w!r}")
    return None


def verify_recognizer(r: Recognizer, d: Dfa) -> bool:
    return recognizer_counterexample(r, d) is None
