"""Realized phi-types for ``phi(x; u) = "xu in A"``.

Two words have the same phi-type over the free monoid exactly when they lie
in the same Myhill-Nerode class (``a ~ b`` iff ``ac in A <=> bc in A`` for all
``c``).  A language is regular iff there are finitely many such classes, and
then their number (the state complexity of ``A``) is the phi-multiplicity of
``x = x``; the two-sided analogue counts the syntactic monoid.

For automaton-backed languages everything here is exact.  For languages
given only by a membership oracle the classes are approximated by probing
words of bounded length, which yields lower bounds, separation certificates
for non-regularity and, when the class count looks stable, a clearly
labelled empirical guess.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from itertools import islice
from typing import Optional, Sequence

import numpy as np

from .algebra import DEFAULT_MONOID_LIMIT, transition_monoid
from .automata import Dfa, minimize
from .core import Alphabet, count_words_up_to, format_word, words_of_length, words_up_to
from .errors import AlphabetMismatchError, ProbeLimitError, UnseparatedPairError
from .oracles import MembershipOracle, encode_seq, get_oracle

DEFAULT_PROBE_LIMIT = 100_000_000


class LanguageHandle:
    """A language over ``alphabet`` backed by a Dfa or a membership oracle."""

    def __init__(self, alphabet: Alphabet, dfa: Optional[Dfa] = None, oracle: Optional[MembershipOracle] = None):
        if (dfa is None) == (oracle is None):
            raise ValueError("exactly one of dfa and oracle must be given")
        backing = dfa if dfa is not None else oracle
        if backing.alphabet != alphabet:
            raise AlphabetMismatchError(f"alphabets differ: {alphabet} vs {backing.alphabet}")
        self.alphabet = alphabet
        self.dfa = dfa
        self.oracle = oracle

    @classmethod
    def from_dfa(cls, d: Dfa) -> "LanguageHandle":
        return cls(d.alphabet, dfa=d)

    @classmethod
    def from_oracle(cls, oracle) -> "LanguageHandle":
        if isinstance(oracle, str):
            oracle = get_oracle(oracle)
        return cls(oracle.alphabet, oracle=oracle)

    @property
    def name(self) -> str:
        return self.oracle.name if self.oracle is not None else "dfa"

    def __contains__(self, word: str) -> bool:
        self.alphabet.check_word(word)
        if self.dfa is not None:
            return self.dfa.accepts(word)
        return self.oracle(word)

    def table(self, prefixes: Sequence[str], suffixes: Sequence[str]) -> np.ndarray:
        """Boolean matrix of ``prefixes[i] + suffixes[j] in A``."""
        if self.oracle is not None:
            return self.oracle.table(prefixes, suffixes)
        d = self.dfa
        accept = np.zeros(d.state_count, dtype=bool)
        accept[list(d.accept)] = True
        starts = np.array([d.step(d.start, p) for p in prefixes], dtype=np.int64)
        maps = np.array(
            [[d.step(q, s) for q in range(d.state_count)] for s in suffixes], dtype=np.int64
        ).reshape(len(suffixes), d.state_count)
        return accept[maps[:, starts]].T


# -- class index --------------------------------------------------------------


@dataclass(frozen=True)
class PhiType:
    id: int
    sample: str
    signature: tuple

    def to_json(self, with_signature=True) -> dict:
        out = {"id": self.id, "sample": format_word(self.sample)}
        if with_signature:
            out["signature"] = "".join("1" if b else "0" for b in self.signature)
        return out


@dataclass(frozen=True)
class PhiTypeIndex:
    classes: tuple
    probe_suffixes: tuple
    complete: bool
    max_len: int

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def samples(self) -> list:
        return [c.sample for c in self.classes]

    def to_json(self) -> dict:
        return {
            "complete": self.complete,
            "max_len": self.max_len,
            "count": len(self.classes),
            "probe_suffixes": [format_word(s) for s in self.probe_suffixes],
            "classes": [c.to_json() for c in self.classes],
        }


def distinguishing_suffixes(d: Dfa) -> dict:
    """Length-lex least separating suffix for every pair of distinct states
    ``p < q`` of a minimal Dfa."""
    n = d.state_count
    out = {}
    frontier = []
    for p in range(n):
        for q in range(p + 1, n):
            if (p in d.accept) != (q in d.accept):
                out[(p, q)] = ""
                frontier.append((p, q))
    while frontier:
        found = []
        for p in range(n):
            for q in range(p + 1, n):
                if (p, q) in out:
                    continue
                for a, sym in enumerate(d.alphabet):
                    s, t = sorted((d.delta[p][a], d.delta[q][a]))
                    if s != t and (s, t) in out:
                        found.append(((p, q), sym + out[(s, t)]))
                        break
        for pair, w in found:
            out[pair] = w
        frontier = [pair for pair, _ in found]
    return out


def _length_lex(w: str, alphabet: Alphabet):
    return (len(w), [alphabet.index(s) for s in w])


def _dfa_classes(d: Dfa) -> PhiTypeIndex:
    d = minimize(d)
    samples = {d.start: ""}
    queue = deque([d.start])
    while queue:
        q = queue.popleft()
        for a, sym in enumerate(d.alphabet):
            t = d.delta[q][a]
            if t not in samples:
                samples[t] = samples[q] + sym
                queue.append(t)
    probes = sorted(set(distinguishing_suffixes(d).values()) | {""}, key=lambda w: _length_lex(w, d.alphabet))
    classes = tuple(
        PhiType(q, samples[q], tuple(d.step(q, s) in d.accept for s in probes))
        for q in range(d.state_count)
    )
    return PhiTypeIndex(classes, tuple(probes), True, -1)


def _check_probe_budget(alphabet: Alphabet, max_len: int, probe_limit: int):
    n = count_words_up_to(len(alphabet), max_len)
    if n * n > probe_limit:
        raise ProbeLimitError(f"membership probes for max_len={max_len} ({n}x{n})", probe_limit)
    return n


def _probe_table(h: LanguageHandle, max_len: int, probe_limit: int):
    _check_probe_budget(h.alphabet, max_len, probe_limit)
    words = list(words_up_to(h.alphabet, max_len))
    return words, h.table(words, words)


def _group_rows(table: np.ndarray) -> tuple[list, np.ndarray]:
    """First-occurrence row indices of the distinct rows, and each row's class."""
    packed = np.packbits(table, axis=1)
    ids: dict = {}
    firsts = []
    of = np.empty(len(table), dtype=np.int64)
    for i in range(len(table)):
        key = packed[i].tobytes()
        c = ids.get(key)
        if c is None:
            c = ids[key] = len(firsts)
            firsts.append(i)
        of[i] = c
    return firsts, of


def _oracle_index(words, table, max_len) -> PhiTypeIndex:
    firsts, _ = _group_rows(table)
    classes = tuple(PhiType(c, words[i], tuple(bool(b) for b in table[i])) for c, i in enumerate(firsts))
    return PhiTypeIndex(classes, tuple(words), False, max_len)


def theta_classes(h: LanguageHandle, max_len: int, probe_limit: int = DEFAULT_PROBE_LIMIT) -> PhiTypeIndex:
    """Right-congruence classes of the language behind ``h``.

    Dfa-backed handles give the exact classes (one per state of the minimal
    complete automaton, ``max_len`` is not needed).  Oracle-backed handles
    group the words of length ``<= max_len`` by their membership behaviour
    under suffixes of length ``<= max_len``; the count is a lower bound.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if h.dfa is not None:
        return _dfa_classes(h.dfa)
    words, table = _probe_table(h, max_len, probe_limit)
    return _oracle_index(words, table, max_len)


# -- certificates -------------------------------------------------------------


@dataclass(frozen=True)
class SeparationCertificate:
    """Words in pairwise distinct classes, with a separating suffix per pair.

    ``suffixes[i][j]`` is a word ``c`` such that exactly one of
    ``members[i] + c`` and ``members[j] + c`` is in the language; the
    diagonal is None.
    """

    members: tuple
    suffixes: tuple
    language: str = ""

    @property
    def k(self) -> int:
        return len(self.members)

    def verify(self, h: LanguageHandle) -> bool:
        for i, a in enumerate(self.members):
            for j, b in enumerate(self.members):
                if i == j:
                    if self.suffixes[i][j] is not None:
                        return False
                    continue
                c = self.suffixes[i][j]
                if c is None or ((a + c) in h) == ((b + c) in h):
                    return False
        return True

    def delta_formulas(self, h: LanguageHandle) -> list:
        """One conjunction of phi-literals per member.

        Formula ``i`` is a list of ``(c, polarity)`` meaning ``phi(x; c)`` if
        polarity else ``not phi(x; c)``.  Member ``i`` satisfies formula
        ``i``, and formulas ``i != j`` disagree on ``c = suffixes[i][j]``, so
        they are consistent and pairwise inconsistent.
        """
        out = []
        for i, a in enumerate(self.members):
            out.append([(self.suffixes[i][j], (a + self.suffixes[i][j]) in h) for j in range(self.k) if j != i])
        return out

    def to_json(self) -> dict:
        return {
            "language": self.language,
            "k": self.k,
            "members": [format_word(w) for w in self.members],
            "matrix": [[None if c is None else format_word(c) for c in row] for row in self.suffixes],
        }


def _certificate_from_table(h, members_idx, words, table) -> SeparationCertificate:
    rows = table[members_idx]
    k = len(members_idx)
    matrix = [[None] * k for _ in range(k)]
    for i in range(k):
        diff = rows[i + 1:] != rows[i]
        first = diff.argmax(axis=1)
        for off, col in enumerate(first):
            j = i + 1 + off
            matrix[i][j] = matrix[j][i] = words[col]
    members = tuple(words[i] for i in members_idx)
    return SeparationCertificate(members, tuple(tuple(r) for r in matrix), h.name)


def _chunks(it, size):
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield block


def separation_certificate(
    h: LanguageHandle, members: Sequence[str], max_suffix_len: int, chunk: int = 1 << 14
) -> SeparationCertificate:
    """Separate every pair of ``members`` by the length-lex least suffix of
    length ``<= max_suffix_len``; raise :class:`UnseparatedPairError` on the
    first pair no such suffix separates."""
    members = [h.alphabet.check_word(w) for w in members]
    if not members:
        raise ValueError("members must be non-empty")
    if len(set(members)) != len(members):
        raise ValueError("members must be pairwise distinct")
    k = len(members)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    found: dict = {}
    for n in range(max_suffix_len + 1):
        if len(found) == len(pairs):
            break
        for block in _chunks(words_of_length(h.alphabet, n), chunk):
            open_pairs = [p for p in pairs if p not in found]
            if not open_pairs:
                break
            t = h.table(members, block)
            left = np.array([i for i, _ in open_pairs])
            right = np.array([j for _, j in open_pairs])
            diff = t[left] != t[right]
            hit = diff.any(axis=1)
            first = diff.argmax(axis=1)
            for p, ok, col in zip(open_pairs, hit, first):
                if ok:
                    found[p] = block[col]
    for i, j in pairs:
        if (i, j) not in found:
            raise UnseparatedPairError(members[i], members[j], max_suffix_len)
    matrix = [[None] * k for _ in range(k)]
    for (i, j), c in found.items():
        matrix[i][j] = matrix[j][i] = c
    return SeparationCertificate(tuple(members), tuple(tuple(r) for r in matrix), h.name)


# -- rank report --------------------------------------------------------------


@dataclass(frozen=True)
class RankReport:
    rank_zero: bool
    empirical: bool
    multiplicity_phi: Optional[int]
    multiplicity_phi_prime: Optional[int]
    index: PhiTypeIndex
    witness: Optional[SeparationCertificate] = None
    class_counts: tuple = ()
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "rank_zero": self.rank_zero,
            "empirical": self.empirical,
            "mult_phi": self.multiplicity_phi,
            "mult_phi_prime": self.multiplicity_phi_prime,
            "classes": [c.to_json(with_signature=False) for c in self.index.classes],
        }
        if self.class_counts:
            out["class_counts"] = list(self.class_counts)
        if self.witness is not None:
            out["certificate"] = self.witness.to_json()
        if self.note:
            out["note"] = self.note
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _class_automaton(h, words, table) -> Optional[Dfa]:
    """Automaton on the probed classes, or None if some successor of a
    class sample matches no probed class."""
    firsts, of = _group_rows(table)
    by_row = {table[i].tobytes(): c for c, i in enumerate(firsts)}
    position = {w: i for i, w in enumerate(words)}
    delta = []
    for i in firsts:
        row = []
        for sym in h.alphabet:
            w = words[i] + sym
            if w in position:
                row.append(int(of[position[w]]))
                continue
            sig = h.table([w], words)[0]
            c = by_row.get(sig.tobytes())
            if c is None:
                return None
            row.append(c)
        delta.append(row)
    accept = frozenset(c for c, i in enumerate(firsts) if table[i, 0])
    return Dfa(h.alphabet, int(of[0]), accept, delta)


def rank_report(
    h: LanguageHandle,
    max_len: int,
    probe_limit: int = DEFAULT_PROBE_LIMIT,
    monoid_limit: int = DEFAULT_MONOID_LIMIT,
) -> RankReport:
    """Decide whether ``R_phi(x = x)`` is zero, with multiplicities.

    With a Dfa the answer is exact: rank zero, ``mult_phi`` is the minimal
    state count and ``mult_phi_prime`` the syntactic monoid size.  With an
    oracle, rank zero is reported (as ``empirical``) only if the probed class
    count is constant over the last ``ceil(max_len / 2)`` probe lengths and
    the induced class automaton agrees with the oracle on every word of
    length ``<= max_len``.  Otherwise the probed classes are returned as a
    separation certificate, a finite fragment of an infinite family of
    pairwise inconsistent phi-formulas.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if h.dfa is not None:
        index = _dfa_classes(h.dfa)
        monoid = transition_monoid(h.dfa, monoid_limit)
        return RankReport(True, False, len(index), monoid.size, index)

    words, table = _probe_table(h, max_len, probe_limit)
    k = len(h.alphabet)
    counts = []
    for length in range(max_len + 1):
        n = count_words_up_to(k, length)
        counts.append(len(_group_rows(table[:n, :n])[0]))
    index = _oracle_index(words, table, max_len)
    tail = counts[-max(1, math.ceil(max_len / 2)):]
    if len(set(tail)) == 1:
        automaton = _class_automaton(h, words, table)
        if automaton is not None and all(automaton.accepts(w) == bool(table[i, 0]) for i, w in enumerate(words)):
            monoid = transition_monoid(automaton, monoid_limit)
            return RankReport(
                True, True, len(index), monoid.size, index, None, tuple(counts),
                "heuristic: class count stable and class automaton consistent up to max_len",
            )
    firsts, _ = _group_rows(table)
    witness = _certificate_from_table(h, firsts, words, table)
    return RankReport(False, False, None, None, index, witness, tuple(counts))


# -- the tree of psi_sigma formulas --------------------------------------------


def psi_param(i: int, value: int) -> str:
    """Parameter ``2 1^i 0^(value+1)``; ``phi(x; psi_param(i, v))`` says the
    ``i``-th component of ``x`` counted from the end is ``v``."""
    return "2" + "1" * i + "0" * (value + 1)


@dataclass(frozen=True)
class WitnessNode:
    sigma: tuple
    realizer: str
    params: tuple
    children: tuple = ()

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "realizer": format_word(self.realizer),
            "params": list(self.params),
            "children": [c.to_json() for c in self.children],
        }


@dataclass(frozen=True)
class WitnessTree:
    depth: int
    branching: int
    root: WitnessNode

    @property
    def nodes(self) -> list:
        return list(self.root.walk())

    def __len__(self) -> int:
        return sum(1 for _ in self.root.walk())

    def to_json(self) -> dict:
        return {"depth": self.depth, "branching": self.branching, "nodes": len(self), "root": self.root.to_json()}


def verify_witness_tree(tree: WitnessTree, oracle: Optional[MembershipOracle] = None) -> list:
    """Problems found in ``tree``; an empty list means it checks out.

    Every realizer must satisfy all conjuncts of its psi_sigma, and no child
    realizer may satisfy the last conjunct of a sibling.
    """
    member = oracle or get_oracle("dcfl_seq")
    problems = []
    for node in tree.root.walk():
        for p in node.params:
            if not member(node.realizer + p):
                problems.append(f"sigma={node.sigma}: realizer fails conjunct {p}")
        kids = node.children
        if len({c.sigma[-1] for c in kids}) != len(kids):
            problems.append(f"sigma={node.sigma}: children repeat a last coordinate")
        for a in kids:
            for b in kids:
                if a is not b and member(a.realizer + b.params[-1]):
                    problems.append(f"siblings {a.sigma} and {b.sigma} are consistent")
    return problems


def witness_tree(depth: int, branching: int) -> WitnessTree:
    """Full ``branching``-ary tree of psi_sigma formulas for ``dcfl_seq``.

    Node ``sigma`` carries the parameters ``2 1^i 0^(sigma_i + 1)`` and the
    realizer ``(n_0, ..., n_{k-1})_*`` with ``k = len(sigma)`` and
    ``n_{k-i-1} = sigma_i``, i.e. the components of sigma in reverse.
    """
    if depth < 1 or branching < 2:
        raise ValueError("witness_tree needs depth >= 1 and branching >= 2")

    def build(sigma):
        realizer = encode_seq(sigma[::-1]) if sigma else ""
        params = tuple(psi_param(i, v) for i, v in enumerate(sigma))
        kids = ()
        if len(sigma) < depth:
            kids = tuple(build(sigma + (n,)) for n in range(branching))
        return WitnessNode(sigma, realizer, params, kids)

    tree = WitnessTree(depth, branching, build(()))
    problems = verify_witness_tree(tree)
    if problems:
        raise RuntimeError("witness tree failed verification: " + "; ".join(problems[:3]))
    return tree


# -- two-type bound -----------------------------------------------------------


@dataclass(frozen=True)
class TwoTypeResult:
    ok: bool
    violation: Optional[str]
    max_types: int
    parameters_checked: int


def two_type_bound(
    max_len: int, h: Optional[LanguageHandle] = None, bound: int = 2, probe_limit: int = DEFAULT_PROBE_LIMIT
) -> TwoTypeResult:
    """Check that each satisfiable ``phi(x; c)`` is realized in at most
    ``bound`` probed classes, over words and parameters of length
    ``<= max_len``.

    The rows of the probe table are the class signatures and its columns the
    parameters, so a single table answers every parameter at once.
    """
    if h is None:
        h = LanguageHandle.from_oracle("triple")
    words, table = _probe_table(h, max_len, probe_limit)
    _, of = _group_rows(table)
    worst = 0
    checked = 0
    for col, c in enumerate(words):
        hits = of[table[:, col]]
        if hits.size == 0:
            continue
        checked += 1
        types = np.unique(hits).size
        worst = max(worst, types)
        if types > bound:
            return TwoTypeResult(False, c, worst, checked)
    return TwoTypeResult(True, None, worst, checked)


def two_type_bound_check(max_len: int, h: Optional[LanguageHandle] = None) -> bool:
    return two_type_bound(max_len, h).ok
