"""Decidable but non-regular example languages over ``{0,1,2}``.

``balanced01``
    words over ``{0,1}`` with equally many 0s and 1s.
``triple``
    the words ``0^n 1^n 2^n``.
``dcfl_seq``
    words ``u 2 v`` where ``u = (n_0, ..., n_{k-1})_*`` and
    ``v = (m_0, ..., m_{l-1})_*`` with ``l <= k`` and ``m_i = n_{k-i-1} + 1``
    for some ``i < l``.  Here ``(n_0, ..., n_{k-1})_*`` is the word
    ``0^{n_0} 1 0^{n_1} 1 ... 1 0^{n_{k-1}}`` (see :func:`encode_seq`).

Each oracle can fill a membership table ``T[i, j] = prefixes[i] + suffixes[j]
in A``.  The default fills it word by word; ``balanced01`` and ``triple``
also have vectorized tables built from per-word summaries, since probing
every prefix against every suffix is the expensive step of type counting.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import Alphabet

TERNARY = Alphabet("012")

# cells per vectorized block
_BLOCK = 1 << 22


@dataclass(frozen=True)
class MembershipOracle:
    name: str
    alphabet: Alphabet
    decide: Callable[[str], bool]
    batch: Optional[Callable[[Sequence[str], Sequence[str]], np.ndarray]] = None

    def __call__(self, word: str) -> bool:
        return bool(self.decide(word))

    def table(self, prefixes: Sequence[str], suffixes: Sequence[str]) -> np.ndarray:
        if self.batch is not None:
            return self.batch(prefixes, suffixes)
        return naive_table(self.decide, prefixes, suffixes)


def naive_table(decide, prefixes, suffixes) -> np.ndarray:
    out = np.zeros((len(prefixes), len(suffixes)), dtype=bool)
    for i, p in enumerate(prefixes):
        out[i] = [decide(p + s) for s in suffixes]
    return out


def _blocked(prefixes, suffixes, fill):
    out = np.empty((len(prefixes), len(suffixes)), dtype=bool)
    step = max(1, _BLOCK // max(1, len(suffixes)))
    for lo in range(0, len(prefixes), step):
        fill(out, lo, min(lo + step, len(prefixes)))
    return out


# -- balanced01 ----------------------------------------------------------------


def balanced01(word: str) -> bool:
    return "2" not in word and word.count("0") == word.count("1")


def _balance_summary(words):
    clean = np.fromiter(("2" not in w for w in words), dtype=bool, count=len(words))
    excess = np.fromiter((w.count("1") - w.count("0") for w in words), dtype=np.int32, count=len(words))
    return clean, excess


def balanced01_table(prefixes, suffixes):
    pc, pe = _balance_summary(prefixes)
    sc, se = _balance_summary(suffixes)

    def fill(out, lo, hi):
        out[lo:hi] = (pc[lo:hi, None] & sc[None, :]) & (pe[lo:hi, None] + se[None, :] == 0)

    return _blocked(prefixes, suffixes, fill)


# -- triple --------------------------------------------------------------------

_SORTED = re.compile(r"(0*)(1*)(2*)")


def triple(word: str) -> bool:
    n, r = divmod(len(word), 3)
    return r == 0 and word == "0" * n + "1" * n + "2" * n


def _triple_summary(words):
    """Per word: whether it is sorted (0*1*2*) and its three block lengths."""
    n = len(words)
    ok = np.zeros(n, dtype=bool)
    counts = np.zeros((3, n), dtype=np.int32)
    for i, w in enumerate(words):
        m = _SORTED.fullmatch(w)
        if m:
            ok[i] = True
            counts[0, i], counts[1, i], counts[2, i] = (len(g) for g in m.groups())
    return ok, counts


def triple_table(prefixes, suffixes):
    pok, (a, b, c) = _triple_summary(prefixes)
    sok, (d, e, f) = _triple_summary(suffixes)
    # p+s stays sorted iff p's later blocks do not precede s's earlier ones
    p_has_12 = (b > 0) | (c > 0)
    p_has_2 = c > 0
    s_has_0 = d > 0
    s_has_01 = (d > 0) | (e > 0)

    def fill(out, lo, hi):
        sl = slice(lo, hi)
        sorted_cat = (
            (pok[sl, None] & sok[None, :])
            & ~(p_has_12[sl, None] & s_has_0[None, :])
            & ~(p_has_2[sl, None] & s_has_01[None, :])
        )
        zeros = a[sl, None] + d[None, :]
        ones = b[sl, None] + e[None, :]
        twos = c[sl, None] + f[None, :]
        out[sl] = sorted_cat & (zeros == ones) & (ones == twos)

    return _blocked(prefixes, suffixes, fill)


# -- dcfl_seq ------------------------------------------------------------------


def encode_seq(ns: Sequence[int]) -> str:
    """The word ``(n_0, ..., n_{k-1})_*``; needs ``k >= 1``."""
    if not ns:
        raise ValueError("a sequence word encodes at least one component")
    return "1".join("0" * n for n in ns)


def decode_seq(word: str) -> list[int]:
    return [len(block) for block in word.split("1")]


def dcfl_seq(word: str) -> bool:
    if word.count("2") != 1:
        return False
    u, v = word.split("2")
    n = decode_seq(u)
    m = decode_seq(v)
    k, l = len(n), len(m)
    return l <= k and any(m[i] == n[k - i - 1] + 1 for i in range(l))


BUILTIN = {
    "balanced01": MembershipOracle("balanced01", TERNARY, balanced01, balanced01_table),
    "triple": MembershipOracle("triple", TERNARY, triple, triple_table),
    "dcfl_seq": MembershipOracle("dcfl_seq", TERNARY, dcfl_seq),
}


def get_oracle(name: str) -> MembershipOracle:
    try:
        return BUILTIN[name]
    except KeyError:
        raise KeyError(f"unknown oracle {name!r}; available: {', '.join(sorted(BUILTIN))}") from None
