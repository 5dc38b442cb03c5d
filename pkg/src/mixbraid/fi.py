"""Root configurations, large-radius regions and braid extraction from paths.

A point of the FI space is a labelled tuple of nonzero roots zeta_0..zeta_k.
Labels in one part of the partition are interchangeable. Strand position 0
is the root of largest modulus.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .braids import BraidWord, GroupoidArrow, lift_word
from .quiver import check_permutation
from .toric import PartitionGamma, canonical_coset, parse_gamma

EPS = 1e-9


class RefinePath(ValueError):
    """Two magnitude swaps cannot be told apart between neighbouring samples."""

    def __init__(self, msg: str, sample: int | None = None):
        super().__init__(msg if sample is None else f"{msg} (between samples {sample} and {sample + 1})")
        self.sample = sample


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, z) -> "GaussianRational":
        if isinstance(z, GaussianRational):
            return z
        if isinstance(z, (list, tuple)):
            return cls(Fraction(z[0]), Fraction(z[1]))
        z = complex(z)
        return cls(Fraction(z.real).limit_denominator(10 ** 9), Fraction(z.imag).limit_denominator(10 ** 9))

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __sub__(self, o: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


@dataclass(frozen=True)
class FiPoint:
    G: PartitionGamma
    roots: tuple
    exact: bool = False

    @classmethod
    def make(cls, G: PartitionGamma, roots: Sequence, exact: bool = False) -> "FiPoint":
        if len(roots) != G.k + 1:
            raise ValueError(f"need {G.k + 1} roots, got {len(roots)}")
        if exact:
            return cls(G, tuple(GaussianRational.of(z) for z in roots), True)
        return cls(G, tuple(complex(z) for z in roots), False)

    def as_complex(self) -> list[complex]:
        return [complex(z) for z in self.roots]

    def log_abs(self) -> list[float]:
        return [math.log(abs(z)) for z in self.as_complex()]

    def polynomials(self) -> list[list[complex]]:
        """Monic coefficient lists (highest degree first) of f_t, one per part."""
        out = []
        for part in self.G.parts:
            coeffs = [1 + 0j]
            for x in part:
                r = complex(self.roots[x])
                coeffs = [a - r * b for a, b in zip(coeffs + [0], [0] + coeffs)]
            out.append(coeffs)
        return out

    def to_json(self) -> dict:
        if self.exact:
            roots = [[str(z.re), str(z.im)] for z in self.roots]
        else:
            roots = [[z.real, z.imag] for z in self.roots]
        return {"gamma": self.G.label(), "k": self.G.k, "exact": self.exact, "roots": roots}


def _close(a, b, exact: bool, eps: float) -> bool:
    if exact:
        return (a - b).is_zero()
    return abs(a - b) <= eps * max(abs(a), abs(b))


def validate_point(p: FiPoint, eps: float = EPS) -> list[str]:
    """Violations of the root conditions; an empty list means the point is valid.

    Tolerances are relative, so the verdict does not change under a global
    rescaling of the roots.
    """
    out = []
    for x, z in enumerate(p.roots):
        if p.exact:
            if z.is_zero():
                out.append(f"zero root at label {x}")
        else:
            if not cmath.isfinite(z):
                out.append(f"infinite root at label {x}")
            elif z == 0:
                out.append(f"zero root at label {x}")
    k = p.G.k
    for a in range(k + 1):
        for b in range(a + 1, k + 1):
            za, zb = p.roots[a], p.roots[b]
            if not p.exact and not (cmath.isfinite(za) and cmath.isfinite(zb)):
                continue
            if _close(za, zb, p.exact, eps):
                if p.G.gamma[a] == p.G.gamma[b]:
                    out.append(f"repeated root: labels {a},{b} in part {p.G.gamma[a]}")
                else:
                    out.append(f"shared root: labels {a} and {b} across parts")
    return out


def magnitude_order(p: FiPoint) -> list[int]:
    """Labels sorted by decreasing modulus (ties broken by label)."""
    if p.exact:
        key = [z.norm2() for z in p.roots]
    else:
        key = [abs(z) for z in p.roots]
    return sorted(range(len(key)), key=lambda x: (-key[x], x))


def lr_classify(p: FiPoint, gap: float = 1.0) -> tuple | None:
    order = magnitude_order(p)
    logs = p.log_abs()
    for a, b in zip(order, order[1:]):
        if logs[a] - logs[b] <= gap:
            return None
    return canonical_coset(p.G, order)


def cover_project(p: FiPoint, coarse: PartitionGamma) -> FiPoint:
    if not coarse.coarsens(p.G):
        raise ValueError(f"{coarse} does not coarsen {p.G}")
    return FiPoint(coarse, p.roots, p.exact)


@dataclass
class FiPath:
    G: PartitionGamma
    samples: list
    exact: bool = False
    negative_region: bool = True

    @classmethod
    def from_roots(cls, G, rows, exact=False, negative_region=True) -> "FiPath":
        return cls(G, [FiPoint.make(G, r, exact) for r in rows], exact, negative_region)

    def reverse(self) -> "FiPath":
        return FiPath(self.G, list(reversed(self.samples)), self.exact, self.negative_region)

    def concat(self, other: "FiPath") -> "FiPath":
        return FiPath(self.G, self.samples + other.samples[1:], self.exact,
                      self.negative_region and other.negative_region)

    def check(self, eps: float = EPS) -> None:
        for n, s in enumerate(self.samples):
            bad = validate_point(s, eps)
            if bad:
                raise ValueError(f"sample {n}: {'; '.join(bad)}")
            if self.negative_region and any(complex(z).real >= 0 for z in s.roots):
                raise ValueError(f"sample {n} leaves the region Re < 0")

    def to_json(self) -> dict:
        return {"gamma": self.G.label(), "k": self.G.k, "exact": self.exact,
                "negative_region": self.negative_region,
                "samples": [s.to_json()["roots"] for s in self.samples]}

    @classmethod
    def from_json(cls, data: dict) -> "FiPath":
        k = int(data["k"])
        G = parse_gamma(data.get("gamma"), k)
        exact = bool(data.get("exact", False))
        rows = []
        for sample in data["samples"]:
            if exact:
                rows.append([[Fraction(str(a)), Fraction(str(b))] for a, b in sample])
            else:
                rows.append([complex(float(a), float(b)) for a, b in sample])
        return cls.from_roots(G, rows, exact, bool(data.get("negative_region", True)))

    @classmethod
    def load(cls, path: str) -> "FiPath":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def base_point(G: PartitionGamma, coset: Sequence[int], gap: float = 3.0) -> list[complex]:
    """Roots on the negative real axis, moduli e^{gap (k - position)} along the ordering."""
    k = G.k
    roots = [0j] * (k + 1)
    for p, x in enumerate(coset):
        roots[x] = -math.exp(gap * (k - p))
    return roots


def synth_generator_path(G: PartitionGamma, coset: Sequence[int], i: int, j: int,
                         samples: int = 24, sign: int = 1, gap: float = 3.0,
                         delta: float = 0.4, exact: bool = False) -> FiPath:
    """Path swapping the moduli of adjacent roots i (left) and j (right).

    The two roots first turn away from the negative axis, exchange their
    log-moduli monotonically, then turn back. With sign +1 the left root
    has the larger argument while the moduli pass each other.
    """
    coset = check_permutation(coset, G.k)
    p = coset.index(i)
    if p + 1 > G.k or coset[p + 1] != j:
        raise ValueError(f"labels {i},{j} are not adjacent in {coset}")
    k = G.k
    logs = [0.0] * (k + 1)
    for q, x in enumerate(coset):
        logs[x] = gap * (k - q)
    args = [math.pi] * (k + 1)
    rows = []
    third = max(samples // 3, 3) | 1   # odd, so no sample sits on a tie

    def emit():
        rows.append([-math.exp(logs[x]) if args[x] == math.pi else
                     cmath.rect(math.exp(logs[x]), args[x]) for x in range(k + 1)])

    emit()
    li, lj = logs[i], logs[j]
    for n in range(1, third + 1):
        s = n / third
        args[i] = math.pi + sign * delta * s
        args[j] = math.pi - sign * delta * s
        emit()
    for n in range(1, third + 1):
        s = n / third
        logs[i] = li + (lj - li) * s
        logs[j] = lj + (li - lj) * s
        emit()
    for n in range(1, third + 1):
        s = 1 - n / third
        args[i] = math.pi + sign * delta * s if s else math.pi
        args[j] = math.pi - sign * delta * s if s else math.pi
        emit()
    return FiPath.from_roots(G, rows, exact)


def _crossings_float(a: FiPoint, b: FiPoint, eps: float):
    la, lb = a.log_abs(), b.log_abs()
    za, zb = a.as_complex(), b.as_complex()
    n = len(la)
    arg0 = [cmath.phase(z) for z in za]
    darg = [math.remainder(cmath.phase(w) - cmath.phase(z), 2 * math.pi) for z, w in zip(za, zb)]
    events = []
    for x in range(n):
        for y in range(x + 1, n):
            d0 = la[x] - la[y]
            d1 = lb[x] - lb[y]
            if abs(d0) <= eps and abs(d1) <= eps:
                raise RefinePath(f"labels {x},{y} keep equal moduli")
            # an exact tie counts as x below y
            if (d0 > 0) != (d1 > 0):
                t = d0 / (d0 - d1)
                ax = arg0[x] + t * darg[x]
                ay = arg0[y] + t * darg[y]
                events.append((t, x, y, math.remainder(ax - ay, 2 * math.pi)))
    events.sort()
    return events


def _crossings_exact(a: FiPoint, b: FiPoint):
    na = [z.norm2() for z in a.roots]
    nb = [z.norm2() for z in b.roots]
    n = len(na)
    events = []
    for x in range(n):
        for y in range(x + 1, n):
            d0, d1 = na[x] - na[y], nb[x] - nb[y]
            if d0 == 0 and d1 == 0:
                raise RefinePath(f"labels {x},{y} keep equal moduli")
            if (d0 > 0) != (d1 > 0):
                # arguments compared exactly at both ends; they must agree
                s0 = _cross(a.roots[x], a.roots[y])
                s1 = _cross(b.roots[x], b.roots[y])
                if s0 == 0 or s1 == 0 or (s0 > 0) != (s1 > 0):
                    raise RefinePath(f"argument order of labels {x},{y} changes across a swap")
                events.append((None, x, y, s0))
    if len(events) > 1:
        raise RefinePath("more than one modulus swap in one exact step")
    return events


def _cross(z: GaussianRational, w: GaussianRational) -> Fraction:
    # Im(conj(w) z) > 0 iff arg z > arg w, for roots in a common open half plane
    return w.re * z.im - w.im * z.re


def path_to_arrow(G: PartitionGamma, path: FiPath, gap: float | None = None,
                  eps: float = EPS) -> GroupoidArrow:
    """Groupoid arrow traced out by a sampled path.

    Within each step log-moduli and arguments move linearly. Swaps are taken
    in order of their crossing time; a crossing is left over right when the
    root that was larger has the larger argument as the moduli meet.
    """
    if not path.samples:
        raise ValueError("empty path")
    path.check(eps)
    first = path.samples[0]
    start = magnitude_order(first) if gap is None else None
    if gap is not None:
        c = lr_classify(first, gap)
        if c is None:
            raise ValueError("path does not start in a large-radius region")
        start = magnitude_order(first)
    order = list(start)
    letters = []
    for n, (a, b) in enumerate(zip(path.samples, path.samples[1:])):
        try:
            events = _crossings_exact(a, b) if path.exact else _crossings_float(a, b, eps)
        except RefinePath as err:
            raise RefinePath(str(err), n) from None
        for e0, e1 in zip(events, events[1:]):
            if e0[0] is not None and abs(e1[0] - e0[0]) <= eps:
                raise RefinePath("simultaneous modulus swaps", n)
        for _, x, y, diff in events:
            px, py = order.index(x), order.index(y)
            if abs(px - py) != 1:
                raise RefinePath(f"labels {x},{y} swap without being adjacent", n)
            p = min(px, py)
            left = order[p]
            # diff compares arg(x) - arg(y); orient it as left minus right
            d = diff if left == x else -diff
            if not path.exact and abs(d) <= eps:
                raise RefinePath(f"labels {x},{y} meet with equal arguments", n)
            letters.append((p, 1 if d > 0 else -1))
            order[p], order[p + 1] = order[p + 1], order[p]
    arrow = lift_word(G, start, BraidWord(tuple(letters)))
    if gap is not None:
        end = lr_classify(path.samples[-1], gap)
        if end is not None and end != arrow.target:
            raise ValueError(f"extracted target {arrow.target} disagrees with end region {end}")
    return arrow


def winding_vector(path: FiPath) -> list[Fraction]:
    """Net number of turns of each root about the origin."""
    n = path.G.k + 1
    total = [0.0] * n
    for a, b in zip(path.samples, path.samples[1:]):
        for x, (z, w) in enumerate(zip(a.as_complex(), b.as_complex())):
            total[x] += math.remainder(cmath.phase(w) - cmath.phase(z), 2 * math.pi)
    return [Fraction(round(t / (2 * math.pi) * 10 ** 6), 10 ** 6) for t in total]


def word_path(G: PartitionGamma, base: Sequence[int], w: BraidWord, samples: int = 24,
              gap: float = 3.0, exact: bool = False) -> FiPath:
    """Concatenated generator paths realising a braid word from a base ordering.

    Roots keep their labels along the way, so after a same-part swap the
    ordering is a non-canonical representative of the coset.
    """
    cur = list(check_permutation(base, G.k))
    path = FiPath.from_roots(G, [base_point(G, cur, gap)], exact)
    for p, s in w.check(G.k).letters:
        seg = synth_generator_path(G, cur, cur[p], cur[p + 1], samples, sign=s, gap=gap, exact=exact)
        path = path.concat(seg)
        cur[p], cur[p + 1] = cur[p + 1], cur[p]
    return path
