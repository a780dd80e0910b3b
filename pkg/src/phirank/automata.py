"""Finite automata over an :class:`~phirank.core.Alphabet`.

Every :class:`Dfa` is complete: ``delta[q][i]`` is defined for every state
``q`` and every symbol index ``i``, so the dead class of a language is an
explicit sink state.  Minimized automata are numbered canonically, in BFS
order from the start state with symbols taken in alphabet order.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Mapping, Optional

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
from .errors import AlphabetMismatchError, StateLimitError

DEFAULT_STATE_LIMIT = 1_000_000


@dataclass(frozen=True)
class Dfa:
    alphabet: Alphabet
    start: int
    accept: frozenset
    delta: tuple

    def __post_init__(self):
        n = len(self.delta)
        if n == 0:
            raise ValueError("a Dfa needs at least one state")
        if not 0 <= self.start < n:
            raise ValueError(f"start state {self.start} out of range")
        object.__setattr__(self, "accept", frozenset(self.accept))
        if any(not 0 <= q < n for q in self.accept):
            raise ValueError("accepting state out of range")
        rows = tuple(tuple(row) for row in self.delta)
        k = len(self.alphabet)
        for q, row in enumerate(rows):
            if len(row) != k:
                raise ValueError(f"state {q} has {len(row)} transitions, expected {k}")
            if any(not 0 <= t < n for t in row):
                raise ValueError(f"transition target out of range in state {q}")
        object.__setattr__(self, "delta", rows)

    @property
    def state_count(self) -> int:
        return len(self.delta)

    def step(self, q: int, word: str) -> int:
        index = self.alphabet.index
        for s in word:
            q = self.delta[q][index(s)]
        return q

    def accepts(self, word: str) -> bool:
        return self.step(self.start, word) in self.accept

    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet.symbols),
            "states": self.state_count,
            "start": self.start,
            "accept": sorted(self.accept),
            "delta": [list(row) for row in self.delta],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Dfa":
        d = cls(Alphabet(data["alphabet"]), data["start"], frozenset(data["accept"]), data["delta"])
        if "states" in data and data["states"] != d.state_count:
            raise ValueError(f"'states' is {data['states']} but delta has {d.state_count} rows")
        return d

    def to_dot(self) -> str:
        return to_dot(self)


def run(d: Dfa, word: str) -> bool:
    return d.accepts(word)


# -- NFA and Thompson construction -------------------------------------------


@dataclass(frozen=True)
class Nfa:
    """Automaton with epsilon moves; ``None`` labels an epsilon edge."""

    alphabet: Alphabet
    state_count: int
    start: int
    accept: frozenset
    transitions: Mapping  # (state, symbol or None) -> frozenset of states

    def __post_init__(self):
        if self.state_count < 1 or not 0 <= self.start < self.state_count:
            raise ValueError("invalid start state")
        if any(not 0 <= q < self.state_count for q in self.accept):
            raise ValueError("accepting state out of range")
        for (q, sym), targets in self.transitions.items():
            if not 0 <= q < self.state_count or any(not 0 <= t < self.state_count for t in targets):
                raise ValueError("transition out of range")
            if sym is not None and sym not in self.alphabet:
                raise ValueError(f"unknown transition symbol {sym!r}")


class _NfaBuilder:
    def __init__(self, alphabet, state_limit):
        self.alphabet = alphabet
        self.state_limit = state_limit
        self.count = 0
        self.edges: dict = {}

    def new(self):
        self.count += 1
        if self.count > self.state_limit:
            raise StateLimitError("NFA state count", self.state_limit)
        return self.count - 1

    def edge(self, p, sym, q):
        self.edges.setdefault((p, sym), set()).add(q)

    def fragment(self, e):
        s, f = self.new(), self.new()
        if isinstance(e, EmptyLang):
            pass
        elif isinstance(e, Epsilon):
            self.edge(s, None, f)
        elif isinstance(e, Lit):
            self.alphabet.index(e.symbol)
            self.edge(s, e.symbol, f)
        elif isinstance(e, Union):
            for sub in (e.left, e.right):
                a, b = self.fragment(sub)
                self.edge(s, None, a)
                self.edge(b, None, f)
        elif isinstance(e, Concat):
            a, b = self.fragment(e.left)
            c, d = self.fragment(e.right)
            self.edge(s, None, a)
            self.edge(b, None, c)
            self.edge(d, None, f)
        elif isinstance(e, Star):
            a, b = self.fragment(e.inner)
            self.edge(s, None, a)
            self.edge(s, None, f)
            self.edge(b, None, a)
            self.edge(b, None, f)
        elif isinstance(e, (Complement, Intersect)):
            # Boolean operators need deterministic operands.
            self.embed(s, f, compile(e, self.alphabet, self.state_limit))
        else:
            raise TypeError(f"not an expression node: {e!r}")
        return s, f

    def embed(self, s, f, d: Dfa):
        live = _live_states(d)
        if d.start not in live:
            return
        ids = {q: self.new() for q in sorted(live)}
        self.edge(s, None, ids[d.start])
        for q in live:
            for i, sym in enumerate(self.alphabet):
                t = d.delta[q][i]
                if t in live:
                    self.edge(ids[q], sym, ids[t])
            if q in d.accept:
                self.edge(ids[q], None, f)


def thompson(e: ExtRegex, alphabet: Alphabet, state_limit: int = DEFAULT_STATE_LIMIT) -> Nfa:
    b = _NfaBuilder(alphabet, state_limit)
    s, f = b.fragment(e)
    edges = {k: frozenset(v) for k, v in b.edges.items()}
    return Nfa(alphabet, b.count, s, frozenset([f]), edges)


def _live_states(d: Dfa) -> set:
    """States from which some accepting state is reachable."""
    back = [[] for _ in range(d.state_count)]
    for q, row in enumerate(d.delta):
        for t in row:
            back[t].append(q)
    live = set(d.accept)
    todo = list(live)
    while todo:
        q = todo.pop()
        for p in back[q]:
            if p not in live:
                live.add(p)
                todo.append(p)
    return live


def determinize(nfa: Nfa, state_limit: int = DEFAULT_STATE_LIMIT) -> Dfa:
    """Subset construction; the empty subset becomes the sink."""
    eps: dict = {}
    moves: dict = {}
    for (q, sym), targets in nfa.transitions.items():
        if sym is None:
            eps.setdefault(q, set()).update(targets)
        else:
            moves.setdefault((q, sym), set()).update(targets)

    def closure(states):
        out = set(states)
        todo = list(states)
        while todo:
            q = todo.pop()
            for t in eps.get(q, ()):
                if t not in out:
                    out.add(t)
                    todo.append(t)
        return frozenset(out)

    start = closure([nfa.start])
    ids = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        current = order[i]
        row = []
        for sym in nfa.alphabet:
            nxt = set()
            for q in current:
                nxt.update(moves.get((q, sym), ()))
            target = closure(nxt)
            if target not in ids:
                if len(order) >= state_limit:
                    raise StateLimitError("DFA state count", state_limit)
                ids[target] = len(order)
                order.append(target)
            row.append(ids[target])
        delta.append(row)
        i += 1
    accept = frozenset(ids[s] for s in order if s & nfa.accept)
    return Dfa(nfa.alphabet, 0, accept, delta)


def compile(e: ExtRegex, alphabet: Alphabet, state_limit: int = DEFAULT_STATE_LIMIT) -> Dfa:
    """Minimal complete Dfa for an extended expression over ``alphabet``."""
    if isinstance(e, Complement):
        return minimize(complement(compile(e.inner, alphabet, state_limit)))
    if isinstance(e, Intersect):
        left = compile(e.left, alphabet, state_limit)
        right = compile(e.right, alphabet, state_limit)
        return minimize(product(left, right, "and", state_limit))
    return minimize(determinize(thompson(e, alphabet, state_limit), state_limit))


# -- Boolean operations ------------------------------------------------------

_OPS: dict[str, Callable[[bool, bool], bool]] = {
    "and": lambda a, b: a and b,
    "or": lambda a, b: a or b,
    "xor": lambda a, b: a != b,
    "diff": lambda a, b: a and not b,
}


def _same_alphabet(d1: Dfa, d2: Dfa):
    if d1.alphabet != d2.alphabet:
        raise AlphabetMismatchError(f"alphabets differ: {d1.alphabet} vs {d2.alphabet}")


def complement(d: Dfa) -> Dfa:
    return Dfa(d.alphabet, d.start, frozenset(range(d.state_count)) - d.accept, d.delta)


def product(d1: Dfa, d2: Dfa, op: str = "and", state_limit: int = DEFAULT_STATE_LIMIT) -> Dfa:
    """Reachable part of the product automaton, accepting by ``op``."""
    _same_alphabet(d1, d2)
    try:
        combine = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown product operation {op!r}; expected one of {sorted(_OPS)}") from None
    k = len(d1.alphabet)
    start = (d1.start, d2.start)
    ids = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        p, q = order[i]
        row = []
        for a in range(k):
            t = (d1.delta[p][a], d2.delta[q][a])
            if t not in ids:
                if len(order) >= state_limit:
                    raise StateLimitError("product state count", state_limit)
                ids[t] = len(order)
                order.append(t)
            row.append(ids[t])
        delta.append(row)
        i += 1
    accept = frozenset(
        n for n, (p, q) in enumerate(order) if combine(p in d1.accept, q in d2.accept)
    )
    return Dfa(d1.alphabet, 0, accept, delta)


def counterexample(d1: Dfa, d2: Dfa) -> Optional[str]:
    """Length-lexicographically least word accepted by exactly one of the two."""
    _same_alphabet(d1, d2)
    start = (d1.start, d2.start)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        p, q = pair
        if (p in d1.accept) != (q in d2.accept):
            letters = []
            while parent[pair] is not None:
                pair, sym = parent[pair]
                letters.append(sym)
            return "".join(reversed(letters))
        for a, sym in enumerate(d1.alphabet):
            t = (d1.delta[p][a], d2.delta[q][a])
            if t not in parent:
                parent[t] = (pair, sym)
                queue.append(t)
    return None


def equivalent(d1: Dfa, d2: Dfa) -> bool:
    return counterexample(d1, d2) is None


# -- minimization -------------------------------------------------------------


def reachable(d: Dfa) -> list:
    """Reachable states in canonical BFS order."""
    seen = {d.start}
    order = [d.start]
    i = 0
    while i < len(order):
        for t in d.delta[order[i]]:
            if t not in seen:
                seen.add(t)
                order.append(t)
        i += 1
    return order


def canonical(d: Dfa) -> Dfa:
    """Drop unreachable states and renumber in BFS order."""
    order = reachable(d)
    ids = {q: n for n, q in enumerate(order)}
    delta = [[ids[t] for t in d.delta[q]] for q in order]
    accept = frozenset(ids[q] for q in order if q in d.accept)
    return Dfa(d.alphabet, 0, accept, delta)


def _quotient(d: Dfa, block_of: list) -> Dfa:
    n = max(block_of) + 1
    delta = [None] * n
    for q in range(d.state_count):
        b = block_of[q]
        if delta[b] is None:
            delta[b] = [block_of[t] for t in d.delta[q]]
    accept = frozenset(block_of[q] for q in d.accept)
    return canonical(Dfa(d.alphabet, block_of[d.start], accept, delta))


def minimize(d: Dfa) -> Dfa:
    """Hopcroft partition refinement on the reachable part of ``d``."""
    d = canonical(d)
    n, k = d.state_count, len(d.alphabet)
    inverse = [[[] for _ in range(n)] for _ in range(k)]
    for q, row in enumerate(d.delta):
        for a, t in enumerate(row):
            inverse[a][t].append(q)

    finals = [q for q in range(n) if q in d.accept]
    others = [q for q in range(n) if q not in d.accept]
    blocks = [set(b) for b in (finals, others) if b]
    block_of = [0] * n
    for b, members in enumerate(blocks):
        for q in members:
            block_of[q] = b
    work = set()
    if len(blocks) == 2:
        work.add(0 if len(blocks[0]) <= len(blocks[1]) else 1)

    while work:
        splitter = list(blocks[work.pop()])
        for a in range(k):
            hit: dict = {}
            for t in splitter:
                for p in inverse[a][t]:
                    hit.setdefault(block_of[p], set()).add(p)
            for b, inside in hit.items():
                if len(inside) == len(blocks[b]):
                    continue
                outside = blocks[b] - inside
                blocks[b] = inside
                new = len(blocks)
                blocks.append(outside)
                for q in outside:
                    block_of[q] = new
                if b in work:
                    work.add(new)
                else:
                    work.add(b if len(inside) <= len(outside) else new)
    return _quotient(d, block_of)


def moore_minimize(d: Dfa) -> Dfa:
    """Naive Moore refinement; slower, kept as an independent cross-check."""
    d = canonical(d)
    cls = [1 if q in d.accept else 0 for q in range(d.state_count)]
    while True:
        keys = [(cls[q],) + tuple(cls[t] for t in d.delta[q]) for q in range(d.state_count)]
        ids: dict = {}
        new = [ids.setdefault(key, len(ids)) for key in keys]
        if len(ids) == len(set(cls)):
            return _quotient(d, new)
        cls = new


# -- export -------------------------------------------------------------------


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(d: Dfa, name: str = "dfa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  __start [shape=point];"]
    for q in range(d.state_count):
        shape = "doublecircle" if q in d.accept else "circle"
        lines.append(f"  {q} [shape={shape}];")
    lines.append(f"  __start -> {d.start};")
    for q, row in enumerate(d.delta):
        labels: dict = {}
        for a, t in enumerate(row):
            labels.setdefault(t, []).append(d.alphabet.symbols[a])
        for t, syms in labels.items():
            lines.append(f"  {q} -> {t} [label={_dot_quote(','.join(syms))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(d: Dfa) -> str:
    return json.dumps(d.to_json(), sort_keys=True)

