"""Braid words, mixed braid groups and the coset groupoid.

Strand positions are 0-indexed from the left. A word is a sequence of
(position, sign) pairs; sign +1 means the strand at `position` passes over
its right-hand neighbour. The surface syntax is 1-indexed: "s1 s2 s1^-1".
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .ktheory import FunctorMatrix, generator_matrix_at, identity_matrix
from .toric import PartitionGamma, canonical_coset, phase

_TOKEN = re.compile(r"^s(\d+)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class BraidWord:
    letters: tuple = ()   # (position, sign)

    @classmethod
    def parse(cls, text: str | None, k: int | None = None) -> "BraidWord":
        letters = []
        for tok in (text or "").replace("*", " ").split():
            if tok in ("e", "1"):
                continue
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad braid token {tok!r}")
            p = int(m.group(1)) - 1
            e = int(m.group(2)) if m.group(2) is not None else 1
            if p < 0:
                raise ValueError(f"generator index must be at least 1 in {tok!r}")
            letters += [(p, 1 if e > 0 else -1)] * abs(e)
        w = cls(tuple(letters))
        if k is not None:
            w.check(k)
        return w

    def check(self, k: int) -> "BraidWord":
        for p, s in self.letters:
            if not 0 <= p < k or s not in (1, -1):
                raise ValueError(f"letter {(p, s)} invalid for {k + 1} strands")
        return self

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"s{p + 1}" + ("" if s > 0 else "^-1") for p, s in self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple((p, -s) for p, s in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)


def transposition(n: int, p: int) -> tuple:
    out = list(range(n))
    out[p], out[p + 1] = out[p + 1], out[p]
    return tuple(out)


def compose(f: Sequence[int], g: Sequence[int]) -> tuple:
    """(f o g)(x) = f(g(x))."""
    return tuple(f[x] for x in g)


def word_perm(w: BraidWord, k: int) -> tuple:
    """Endpoint permutation, read left to right; an ordering o becomes o o perm."""
    perm = tuple(range(k + 1))
    for p, _ in w.letters:
        perm = compose(perm, transposition(k + 1, p))
    return perm


def is_mixed(w: BraidWord, G: PartitionGamma) -> bool:
    perm = word_perm(w, G.k)
    return all(G.gamma[perm[x]] == G.gamma[x] for x in range(G.k + 1))


def act(G: PartitionGamma, coset: Sequence[int], p: int) -> tuple:
    o = list(coset)
    o[p], o[p + 1] = o[p + 1], o[p]
    return canonical_coset(G, o)


@dataclass(frozen=True)
class Crossing:
    position: int
    labels: tuple      # (left, right) before the crossing
    sign: int
    source: tuple
    target: tuple


@dataclass(frozen=True)
class GroupoidArrow:
    G: PartitionGamma
    source: tuple
    crossings: tuple
    target: tuple

    @property
    def word(self) -> BraidWord:
        return BraidWord(tuple((c.position, c.sign) for c in self.crossings))

    def label_sequence(self) -> list[tuple]:
        return [c.labels for c in self.crossings]

    def is_loop(self) -> bool:
        return self.source == self.target

    def inverse(self) -> "GroupoidArrow":
        return lift_word(self.G, self.target, self.word.inverse())

    def then(self, other: "GroupoidArrow") -> "GroupoidArrow":
        if other.source != self.target:
            raise ValueError("arrows do not compose")
        return GroupoidArrow(self.G, self.source, self.crossings + other.crossings, other.target)

    def describe(self) -> str:
        src = "".join(map(str, self.source))
        if not self.crossings:
            return f"id[{src}]"
        parts = [f"t{'' if c.sign > 0 else '^-1'}({c.labels[0]},{c.labels[1]})"
                 for c in self.crossings]
        return f"[{src}] " + " ".join(parts) + f" -> [{''.join(map(str, self.target))}]"

    def to_json(self) -> dict:
        return {"gamma": self.G.label(), "source": list(self.source), "target": list(self.target),
                "word": str(self.word),
                "crossings": [{"position": c.position, "labels": list(c.labels), "sign": c.sign}
                              for c in self.crossings]}


def lift_word(G: PartitionGamma, base: Sequence[int], w: BraidWord) -> GroupoidArrow:
    w.check(G.k)
    start = canonical_coset(G, base)
    cur = start
    out = []
    for p, s in w.letters:
        nxt = act(G, cur, p)
        out.append(Crossing(p, (cur[p], cur[p + 1]), s, cur, nxt))
        cur = nxt
    return GroupoidArrow(G, start, tuple(out), cur)


def groupoid_generators(G: PartitionGamma, coset: Sequence[int]) -> list[GroupoidArrow]:
    return [lift_word(G, coset, BraidWord(((p, 1),))) for p in range(G.k)]


@dataclass(frozen=True)
class Relation:
    kind: str           # "braid" or "commute"
    positions: tuple
    lhs: GroupoidArrow
    rhs: GroupoidArrow

    def describe(self) -> str:
        return f"{self.kind}{tuple(p + 1 for p in self.positions)} at {''.join(map(str, self.lhs.source))}"


def enumerate_relations(G: PartitionGamma, cosets: Sequence[Sequence[int]] | None = None) -> list[Relation]:
    from .toric import all_cosets
    k = G.k
    if cosets is None:
        cosets = all_cosets(G)
    seen = set()
    out = []
    for c in cosets:
        c = canonical_coset(G, c)
        for p in range(k - 1):
            a = BraidWord(((p, 1), (p + 1, 1), (p, 1)))
            b = BraidWord(((p + 1, 1), (p, 1), (p + 1, 1)))
            key = ("braid", (p, p + 1), c)
            if key not in seen:
                seen.add(key)
                out.append(Relation("braid", (p, p + 1), lift_word(G, c, a), lift_word(G, c, b)))
        for p in range(k):
            for q in range(p + 2, k):
                key = ("commute", (p, q), c)
                if key not in seen:
                    seen.add(key)
                    out.append(Relation("commute", (p, q),
                                        lift_word(G, c, BraidWord(((p, 1), (q, 1)))),
                                        lift_word(G, c, BraidWord(((q, 1), (p, 1))))))
    out.sort(key=lambda r: (r.lhs.source, r.kind, r.positions))
    return out


@lru_cache(maxsize=None)
def crossing_matrix(G: PartitionGamma, source: tuple, p: int, sign: int) -> FunctorMatrix:
    """Matrix of one elementary crossing; a negative crossing inverts the positive one coming back."""
    if sign > 0:
        return generator_matrix_at(G, source, p + 1)
    back = act(G, source, p)
    return generator_matrix_at(G, back, p + 1).inverse()


def word_matrix(arrow: GroupoidArrow) -> FunctorMatrix:
    M = identity_matrix(phase(arrow.G, arrow.source))
    for c in arrow.crossings:
        M = crossing_matrix(arrow.G, c.source, c.position, c.sign) @ M
    return M
