"""Seeded random extended expressions for tests and acceptance runs."""

from __future__ import annotations

import random

from .core import (
    Alphabet,
    Complement,
    Concat,
    EmptyLang,
    Epsilon,
    ExtRegex,
    Intersect,
    Lit,
    Star,
    Union,
)

ALPHABETS = (Alphabet("01"), Alphabet("012"))

_BINARY = (Union, Concat, Intersect)


def random_regex(rng: random.Random, alphabet: Alphabet, depth: int = 5, star: bool = True) -> ExtRegex:
    """Random tree of at most ``depth`` levels; no Star nodes unless ``star``."""
    if depth <= 1 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.8:
            return Lit(rng.choice(alphabet.symbols))
        return Epsilon() if r < 0.92 else EmptyLang()
    ops = ["union", "concat", "concat", "inter", "compl"] + (["star", "star"] if star else [])
    op = rng.choice(ops)
    if op == "star":
        return Star(random_regex(rng, alphabet, depth - 1, star))
    if op == "compl":
        return Complement(random_regex(rng, alphabet, depth - 1, star))
    cls = {"union": Union, "concat": Concat, "inter": Intersect}[op]
    return cls(random_regex(rng, alphabet, depth - 1, star), random_regex(rng, alphabet, depth - 1, star))


def corpus(seed: int = 0, count: int = 200, depth: int = 5, star: bool = True) -> list:
    """``count`` pairs ``(alphabet, expression)`` drawn from ``seed``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        alphabet = rng.choice(ALPHABETS)
        out.append((alphabet, random_regex(rng, alphabet, depth, star)))
    return out
