"""Integer Grothendieck groups of phases and the functor matrices between them.

Characters of the GIT torus are written in the tau-dual basis, so a line
bundle O(chi) is an integer vector of length k and a K-class is a finite
integer combination of them. The K-group of a phase is the Laurent ring
Z[x^+-] modulo the ideal generated by the Koszul classes
prod_{rho in C} (1 - x^{-w_rho}) of its unstable components C.
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .lattice import (IntMat, MonomialVector, det, identity, integer_kernel, integer_solve,
                      matmul, matvec, rank, rational_inverse, rational_solve, row_span_basis,
                      smith_normal_form, transpose, unimodular_inverse)
from .toric import (PartitionGamma, PhaseData, cone_coefficients, embed_ray, lattice_basis,
                    ordering_from_sequence, part_sequence, phase, sub_problem,
                    wall_classification, wall_target)

KClass = MonomialVector

DEFAULT_PAD = 2
PAD_STEP = 2
DEFAULT_MAX_PAD = 10


class BoxPolicyError(RuntimeError):
    """Raised when a computation does not close up inside the largest allowed box."""


def graded_key(chi: Sequence[int]) -> tuple:
    # total size first, then fewer negative entries, then larger leading entries
    return (sum(abs(c) for c in chi), sum(1 for c in chi if c < 0), tuple(-c for c in chi))


def character_class(chi: Sequence[int], coeff: int = 1) -> KClass:
    return KClass.monomial(tuple(chi), coeff)


def koszul_class(ph: PhaseData, C: Sequence[int]) -> KClass:
    C = tuple(sorted(C))
    if C not in ph.components:
        raise ValueError(f"{C} is not an unstable component of {ph.name()}")
    sp = sub_problem(ph.G)
    out = KClass.monomial((0,) * ph.k)
    for rho in C:
        w = sp.weight(rho)
        out = out * (KClass.monomial((0,) * ph.k) - KClass.monomial(tuple(-x for x in w)))
    return out


def window_characters(constraints: Sequence[tuple], k: int | None = None,
                      extra: Sequence[tuple] = ()) -> list[tuple]:
    """Characters chi with offset <= <chi, tau> < offset + width for every constraint.

    `extra` holds further (vector, lower, upper_exclusive) bounds. Raises if the
    constraints do not cut out a bounded region.
    """
    rows = [(tuple(t), lo, lo + w) for t, lo, w in constraints]
    rows += [(tuple(v), lo, hi) for v, lo, hi in extra]
    if k is None:
        k = len(rows[0][0]) if rows else 0
    if any(w <= 0 for _, _, w in constraints):
        raise ValueError("window widths must be positive")
    if k == 0:
        return [()]
    vecs = [list(r[0]) for r in rows]
    if rank(vecs) < k:
        raise ValueError("window constraints do not bound a box")
    # pick k independent rows and bound chi = T^{-1} y over the box of y
    chosen = []
    for i, v in enumerate(vecs):
        if rank([vecs[j] for j in chosen] + [v]) > len(chosen):
            chosen.append(i)
        if len(chosen) == k:
            break
    T = [vecs[i] for i in chosen]
    Tinv = rational_inverse(T)
    lo_b, hi_b = [], []
    for row in Tinv:
        lo = hi = Fraction(0)
        for c, i in zip(row, chosen):
            a, b = rows[i][1], rows[i][2] - 1
            lo += min(c * a, c * b)
            hi += max(c * a, c * b)
        lo_b.append(int(lo.__floor__()))
        hi_b.append(int(hi.__ceil__()))
    out = []
    for chi in product(*(range(a, b + 1) for a, b in zip(lo_b, hi_b))):
        if all(lo <= sum(x * y for x, y in zip(chi, v)) < hi for v, lo, hi in rows):
            out.append(chi)
    return sorted(out)


def phase_window(ph: PhaseData, offsets: Sequence[int] | None = None) -> list[tuple]:
    """Window of a phase: all strata at the given offsets, width eta."""
    strata = ph.strata
    if offsets is None:
        offsets = [0] * len(strata)
    if len(offsets) != len(strata):
        raise ValueError(f"need {len(strata)} offsets, got {len(offsets)}")
    return window_characters([(st.tau_coords, o, st.eta) for st, o in zip(strata, offsets)], ph.k)


# --- presentations ---------------------------------------------------------------

@dataclass
class KoszulPresentation:
    """K-group of a phase with a certified integer basis.

    `mult[i]` and `mult_inv[i]` are the matrices of multiplication by x_i
    and x_i^{-1} on basis coordinates. They commute, kill every Koszul class,
    and move the unit class onto the basis, which is what makes the map
    c -> coordinates well defined on the whole Laurent ring.
    """
    phase: PhaseData
    kappas: list
    pad: int
    basis: list
    unit: tuple
    mult: list
    mult_inv: list
    seeds: int = 0
    relations: int = 0
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def box(self) -> tuple:
        """Character box [lower, upper] the presentation was certified in."""
        k = self.phase.k
        return (-self.pad,) * k, (1 + self.pad,) * k

    def coords_of_character(self, chi: Sequence[int]) -> tuple:
        chi = tuple(chi)
        # walk back towards the origin until a cached character, then forward
        trail = []
        cur = chi
        while cur not in self._cache:
            i = next((j for j, c in enumerate(cur) if c != 0), None)
            if i is None:
                self._cache[cur] = self.unit
                break
            trail.append((cur, i, 1 if cur[i] > 0 else -1))
            cur = cur[:i] + (cur[i] - trail[-1][2],) + cur[i + 1:]
        v = self._cache[cur]
        for ch, i, step in reversed(trail):
            v = matvec(self.mult[i] if step > 0 else self.mult_inv[i], v)
            self._cache[ch] = v
        return v

    def reduce(self, c: KClass) -> tuple:
        acc = [0] * self.rank
        for chi, a in c.items():
            v = self.coords_of_character(chi)
            for j in range(self.rank):
                acc[j] += a * v[j]
        return tuple(acc)

    def class_of_coords(self, v: Sequence[int]) -> KClass:
        return KClass({b: x for b, x in zip(self.basis, v)})


class _BoxPropagator:
    """Unit-coefficient propagation of character values through box relations.

    Characters of the box are numbered in mixed radix. Each relation is a
    shifted Koszul class lying inside the box. A relation with one unknown
    term whose coefficient is +-1 fixes that term; all such relations are
    solved together in one vectorized round. Values are integer vectors over
    the seed characters. Relations with every term known leave residuals,
    which are relations among the seeds.
    """

    def __init__(self, kappas, lo, hi):
        self.lo = list(lo)
        dims = [h - l + 1 for l, h in zip(lo, hi)]
        self.dims = dims
        self.size = int(np.prod(dims)) if dims else 1
        strides = []
        acc = 1
        for d in reversed(dims):
            strides.append(acc)
            acc *= d
        self.strides = list(reversed(strides))
        width = max((len(kap) for kap in kappas), default=1)
        idx_blocks, co_blocks = [], []
        for kap in kappas:
            terms = kap.items()
            exps = np.array([e for e, _ in terms], dtype=np.int64).reshape(len(terms), len(dims))
            cos = np.array([c for _, c in terms], dtype=np.int64)
            # shifts chi with chi + e inside the box for every term e
            rng = [np.arange(l - exps[:, i].min(), h - exps[:, i].max() + 1)
                   for i, (l, h) in enumerate(zip(lo, hi))]
            if any(len(r) == 0 for r in rng):
                continue
            grid = np.stack(np.meshgrid(*rng, indexing="ij"), -1).reshape(-1, len(dims))
            pos = (grid[:, None, :] + exps[None, :, :] - np.array(lo)) @ np.array(self.strides)
            pad = width - len(terms)
            if pad:
                pos = np.concatenate([pos, np.full((len(pos), pad), self.size)], 1)
            idx_blocks.append(pos)
            co_blocks.append(np.broadcast_to(np.concatenate([cos, np.zeros(pad, np.int64)]),
                                             pos.shape))
        if idx_blocks:
            self.T = np.concatenate(idx_blocks)
            self.C = np.concatenate(co_blocks)
        else:
            self.T = np.zeros((0, width), np.int64)
            self.C = np.zeros((0, width), np.int64)
        self.known = np.zeros(self.size + 1, bool)
        self.known[self.size] = True   # padding slot, value zero
        self.val = np.zeros((self.size + 1, 8), np.int64)
        self.seeds: list = []

    @property
    def relations(self) -> int:
        return len(self.T)

    def index(self, chi) -> int:
        return sum((c - l) * s for c, l, s in zip(chi, self.lo, self.strides))

    def add_seed(self, chi) -> None:
        n = len(self.seeds)
        if n == self.val.shape[1]:
            self.val = np.concatenate([self.val, np.zeros_like(self.val)], 1)
        self.seeds.append(tuple(chi))
        i = self.index(chi)
        self.val[i, n] = 1
        self.known[i] = True
        self.run()

    def run(self) -> None:
        T, C = self.T, self.C
        while True:
            unk = ~self.known[T]
            cnt = unk.sum(1)
            rows = np.nonzero(cnt == 1)[0]
            if len(rows) == 0:
                return
            col = unk[rows].argmax(1)
            u = T[rows, col]
            c = C[rows, col]
            ok = (c == 1) | (c == -1)
            rows, u, c = rows[ok], u[ok], c[ok]
            if len(rows) == 0:
                return
            u, first = np.unique(u, return_index=True)
            rows, c = rows[first], c[first]
            tot = np.einsum("rt,rts->rs", C[rows], self.val[T[rows]])
            self.val[u] = -c[:, None] * tot
            self.known[u] = True
            if np.abs(self.val).max() > 2 ** 40:
                raise OverflowError("propagated values too large")

    def value(self, chi) -> list:
        i = self.index(chi)
        if not self.known[i]:
            raise KeyError(chi)
        return [int(x) for x in self.val[i, :len(self.seeds)]]

    def is_known(self, chi) -> bool:
        return bool(self.known[self.index(chi)])

    def residuals(self) -> list:
        full = self.known[self.T].all(1)
        T, C = self.T[full], self.C[full]
        n = len(self.seeds)
        res = np.einsum("rt,rts->rs", C, self.val[T][:, :, :n])
        res = res[np.any(res != 0, 1)]
        if len(res) == 0:
            return []
        return [list(map(int, r)) for r in np.unique(res, axis=0)]


def _build(ph: PhaseData, pad: int) -> KoszulPresentation | None:
    # requested characters are the candidate cube [0,1]^k; the box pads it
    k = ph.k
    kappas = [koszul_class(ph, C) for C in ph.components]
    prop = _BoxPropagator(kappas, [-pad] * k, [1 + pad] * k)
    region = _region(k, pad)
    prop.add_seed((0,) * k)
    for chi in region:
        if not prop.is_known(chi):
            prop.add_seed(chi)
    nseed = len(prop.seeds)
    res = prop.residuals()
    if res:
        U, D, V = smith_normal_form(_hnf_rows(res))
        diag = [D[i][i] for i in range(min(len(D), nseed)) if D[i][i] != 0]
    else:
        V, diag = identity(nseed), []
    if any(d != 1 for d in diag):
        return None  # torsion in the truncated quotient: treat as a box failure
    r0 = len(diag)
    free = nseed - r0

    # basis candidates: characters whose unit neighbours all lie in the region
    cands = [chi for chi in region if all(2 - pad <= c <= pad - 1 for c in chi)]
    vals = prop.val[[prop.index(chi) for chi in region], :nseed]
    proj = vals @ np.array([row[r0:] for row in V], dtype=np.int64).reshape(nseed, free)
    img = {chi: tuple(int(x) for x in row) for chi, row in zip(region, proj)}
    basis = _choose_basis(cands, img, free)
    if basis is None:
        return None
    B = transpose([list(img[b]) for b in basis])
    Binv = unimodular_inverse(B)

    def coords(chi):
        return matvec(Binv, img[chi])

    n = free
    unit = coords((0,) * k)
    mult, mult_inv = [], []
    for i in range(k):
        e = [0] * k
        e[i] = 1
        cols_p, cols_m = [], []
        for b in basis:
            up = tuple(x + y for x, y in zip(b, e))
            dn = tuple(x - y for x, y in zip(b, e))
            cols_p.append(coords(up))
            cols_m.append(coords(dn))
        mult.append(transpose([list(c) for c in cols_p]))
        mult_inv.append(transpose([list(c) for c in cols_m]))
    # certification
    I = identity(n)
    for i in range(k):
        if matmul(mult[i], mult_inv[i]) != I or matmul(mult_inv[i], mult[i]) != I:
            return None
        for j in range(i):
            if matmul(mult[i], mult[j]) != matmul(mult[j], mult[i]):
                return None
    pres = KoszulPresentation(ph, kappas, pad, list(basis), unit, mult, mult_inv,
                              seeds=nseed, relations=prop.relations)
    # kappa(A) = 0 as a matrix, tested column by column: kappa * x^b reduces to 0
    zero = (0,) * n
    for kap in kappas:
        for b in basis:
            if pres.reduce(kap.shift(b)) != zero:
                return None
    for j, b in enumerate(basis):
        e = tuple(int(i == j) for i in range(n))
        if pres.coords_of_character(b) != e:
            return None
    return pres


@lru_cache(maxsize=None)
def _region(k: int, pad: int) -> tuple:
    return tuple(sorted(product(range(1 - pad, pad + 1), repeat=k), key=graded_key))


def _hnf_rows(rows: list) -> IntMat:
    # shrink a tall residual list to an equivalent square-ish generating set
    return row_span_basis(rows) or [[0] * len(rows[0])]


def _choose_basis(cands, img, free) -> list | None:
    if free == 0:
        return []
    # greedy by rank, then fall back to an ordered search for a unimodular set
    chosen: list = []
    for chi in cands:
        trial = chosen + [chi]
        if rank([list(img[c]) for c in trial]) == len(trial):
            chosen = trial
            if len(chosen) == free:
                break
    if len(chosen) == free and abs(det([list(img[c]) for c in chosen])) == 1:
        return chosen
    pool = cands[: max(3 * free + 3, 12)]
    for combo in combinations(pool, free):
        if abs(det([list(img[c]) for c in combo])) == 1:
            return list(combo)
    return None


_lock = threading.Lock()
_presentations: dict = {}
_max_pad = DEFAULT_MAX_PAD


def set_max_pad(pad: int) -> None:
    global _max_pad
    if pad < DEFAULT_PAD:
        raise ValueError("maximum padding below the starting padding")
    _max_pad = pad


def presentation(ph: PhaseData) -> KoszulPresentation:
    with _lock:
        hit = _presentations.get(ph.key)
    if hit is not None:
        return hit
    pad = DEFAULT_PAD
    pres = None
    while pad <= _max_pad:
        pres = _build(ph, pad)
        if pres is not None:
            break
        pad += PAD_STEP
    if pres is None:
        raise BoxPolicyError(f"no certified presentation for {ph.name()} up to padding {_max_pad}")
    with _lock:
        _presentations.setdefault(ph.key, pres)
    return pres


def phase_basis(ph: PhaseData) -> list[tuple]:
    return list(presentation(ph).basis)


def reduce_class(ph: PhaseData, c: KClass, basis: Sequence[Sequence[int]] | None = None) -> tuple:
    pres = presentation(ph)
    v = pres.reduce(c)
    if basis is None or [tuple(b) for b in basis] == pres.basis:
        return v
    return _change_basis(pres, basis, v)


def _change_basis(pres: KoszulPresentation, basis, v) -> tuple:
    if len(basis) != pres.rank:
        raise ValueError(f"basis needs {pres.rank} characters, got {len(basis)}")
    B = transpose([list(pres.coords_of_character(b)) for b in basis])
    if abs(det(B)) != 1:
        raise ValueError("characters do not form a Z-basis")
    return matvec(unimodular_inverse(B), v)


# --- functor matrices ------------------------------------------------------------

@dataclass(frozen=True)
class FunctorMatrix:
    source: str
    target: str
    source_basis: tuple
    target_basis: tuple
    matrix: tuple

    @classmethod
    def make(cls, src: PhaseData, tgt: PhaseData, M) -> "FunctorMatrix":
        return cls(src.name(), tgt.name(), tuple(phase_basis(src)), tuple(phase_basis(tgt)),
                   tuple(tuple(r) for r in M))

    def rows(self) -> IntMat:
        return [list(r) for r in self.matrix]

    def det(self) -> int:
        return det(self.rows())

    def __matmul__(self, other: "FunctorMatrix") -> "FunctorMatrix":
        """self after other."""
        if other.target != self.source:
            raise ValueError(f"cannot compose {self.source}<-{self.target} after {other.target}")
        M = matmul(self.rows(), other.rows())
        return FunctorMatrix(other.source, self.target, other.source_basis, self.target_basis,
                             tuple(tuple(r) for r in M))

    def inverse(self) -> "FunctorMatrix":
        M = unimodular_inverse(self.rows())
        return FunctorMatrix(self.target, self.source, self.target_basis, self.source_basis,
                             tuple(tuple(r) for r in M))

    def is_identity(self) -> bool:
        return self.rows() == identity(len(self.matrix))

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target,
                "source_basis": [list(b) for b in self.source_basis],
                "target_basis": [list(b) for b in self.target_basis],
                "matrix": self.rows()}


def identity_matrix(ph: PhaseData) -> FunctorMatrix:
    return FunctorMatrix.make(ph, ph, identity(presentation(ph).rank))


def twist_matrix(ph: PhaseData, chi: Sequence[int]) -> FunctorMatrix:
    pres = presentation(ph)
    cols = [pres.coords_of_character(tuple(a + b for a, b in zip(chi, bj))) for bj in pres.basis]
    return FunctorMatrix.make(ph, ph, transpose([list(c) for c in cols]))


def _slab(tau: Sequence[int], m: int, radius: int) -> list[tuple]:
    k = len(tau)
    pts = [chi for chi in product(range(-radius, radius + 1), repeat=k)
           if m <= sum(a * b for a, b in zip(chi, tau)) < m + 2]
    return sorted(pts, key=graded_key)


def window_lifts(src: PhaseData, tau: Sequence[int], m: int,
                 rng: random.Random | None = None) -> list[KClass]:
    """For each source basis class, a K-class on window characters reducing to it."""
    pres = presentation(src)
    n = pres.rank
    for radius in range(1, _max_pad + 1):
        slab = _slab(tau, m, radius)
        if not slab:
            continue
        # try a short prefix first, then the whole slab
        for size in (min(len(slab), 4 * n), len(slab)):
            chars = slab[:size]
            A = transpose([list(pres.coords_of_character(c)) for c in chars])
            sols = []
            for j in range(n):
                e = [int(i == j) for i in range(n)]
                x = integer_solve(A, e)
                if x is None:
                    break
                sols.append(list(x))
            if len(sols) < n:
                continue
            if rng is not None:
                K = integer_kernel(A, len(chars))
                for x in sols:
                    for kv in K:
                        c = rng.randint(-2, 2)
                        if c:
                            for t in range(len(x)):
                                x[t] += c * kv[t]
            return [KClass({ch: a for ch, a in zip(chars, x) if a}) for x in sols]
    raise BoxPolicyError(f"no window lift for {src.name()} at offset {m}")


def psi_matrix(G: PartitionGamma, coset: Sequence[int], i: int, m: int,
               rng: random.Random | None = None) -> FunctorMatrix:
    src = phase(G, coset)
    tgt = wall_target(G, coset, i)
    info = wall_classification(G, coset, i)
    lifts = window_lifts(src, info.tau_coords, m, rng)
    ptgt = presentation(tgt)
    cols = [ptgt.reduce(u) for u in lifts]
    return FunctorMatrix.make(src, tgt, transpose([list(c) for c in cols]))


def generator_matrix_at(G: PartitionGamma, coset: Sequence[int], i: int,
                        rng: random.Random | None = None) -> FunctorMatrix:
    """Matrix of the crossing at positions i-1, i (wall i), left over right."""
    info = wall_classification(G, coset, i)
    if info.case == "a":
        return psi_matrix(G, coset, i, 0, rng)
    p0 = psi_matrix(G, coset, i, 0, rng)
    pm = psi_matrix(G, coset, i, -1, rng)
    return pm.inverse() @ p0


def generator_matrix(G: PartitionGamma, coset: Sequence[int], i_label: int, j_label: int,
                     rng: random.Random | None = None) -> FunctorMatrix:
    coset = tuple(coset)
    p = coset.index(i_label)
    if p + 1 >= len(coset) or coset[p + 1] != j_label:
        raise ValueError(f"labels {i_label},{j_label} are not adjacent (left, right) in {coset}")
    return generator_matrix_at(G, coset, p + 1, rng)


# --- Cartier data and restriction ---------------------------------------------------

@lru_cache(maxsize=None)
def character_lift(G: PartitionGamma) -> tuple:
    """Integer matrix L (coords x k) with W L = I, columns from integer_solve."""
    sp = sub_problem(G)
    cols = []
    for i in range(G.k):
        e = [int(j == i) for j in range(G.k)]
        x = integer_solve(sp.W, e)
        cols.append(x)
    return tuple(tuple(r) for r in transpose([list(c) for c in cols]))


def divisor_of(G: PartitionGamma, chi: Sequence[int]) -> tuple:
    L = character_lift(G)
    return matvec(L, chi)


_cone_cache: dict = {}


def _cone_functionals(ph: PhaseData) -> tuple:
    """Per maximal cone, the integer matrix taking chi to its cone functional."""
    hit = _cone_cache.get(ph.key)
    if hit is not None:
        return hit
    sp = sub_problem(ph.G)
    L = [list(r) for r in character_lift(ph.G)]
    Bt = transpose(lattice_basis(sp.rays))
    out = []
    for s in ph.simplices:
        cols = sorted(s)
        Rc = [[int(x) for x in rational_solve(Bt, sp.rays[c])] for c in cols]
        if abs(det(Rc)) != 1:
            raise ValueError(f"non-unimodular cone in {ph.name()}: unsupported phase")
        out.append(matmul(unimodular_inverse(Rc), [L[c] for c in cols]))
    _cone_cache[ph.key] = tuple(out)
    return _cone_cache[ph.key]


def cartier_localization(ph: PhaseData, chi: Sequence[int]) -> list[tuple]:
    """Per maximal cone, the functional matching the lifted divisor on that cone's rays.

    The lift of chi to coordinate exponents is fixed (an integer right
    inverse of W), and functionals are written on a fixed basis of the
    lattice spanned by all rays.
    """
    if ph.is_orbifold:
        raise ValueError("Cartier localization needs a manifold phase")
    return [tuple(matvec(M, chi)) for M in _cone_functionals(ph)]


def localization_vector(ph: PhaseData, c: KClass) -> tuple:
    """Rank and first-order Cartier data of a class, cone by cone."""
    out = []
    total_rank = sum(a for _, a in c.items())
    data = {chi: cartier_localization(ph, chi) for chi, _ in c.items()}
    width = len(cartier_localization(ph, (0,) * ph.k)[0])
    for ci in range(len(ph.simplices)):
        acc = [0] * width
        for chi, a in c.items():
            acc = [u + a * x for u, x in zip(acc, data[chi][ci])]
        out.append((total_rank, tuple(acc)))
    return tuple(out)


def pullback_character(fine: PartitionGamma, coarse: PartitionGamma, coset: Sequence[int],
                       chi: Sequence[int]) -> tuple:
    """Character on the coarse phase obtained by restricting O(chi) from the fine phase."""
    if not coarse.coarsens(fine):
        raise ValueError(f"{coarse} does not coarsen {fine}")
    fph = phase(fine, coset)
    sf, sc = sub_problem(fine), sub_problem(coarse)
    d = divisor_of(fine, chi)
    dd = []
    for ray in sc.rays:
        pt = embed_ray(fine, coarse, ray)
        _, coeffs = cone_coefficients(sf.rays, fph.simplices, pt)
        val = sum(x * d[c] for c, x in coeffs)
        if val.denominator != 1:
            raise ValueError("restricted divisor is not integral")
        dd.append(int(val))
    return matvec(sc.W, dd)


@lru_cache(maxsize=None)
def pullback_matrix(fine: PartitionGamma, coarse: PartitionGamma, seq: tuple) -> tuple:
    coset = ordering_from_sequence(fine, seq)
    cols = []
    for i in range(fine.k):
        e = [int(j == i) for j in range(fine.k)]
        cols.append(pullback_character(fine, coarse, coset, e))
    return tuple(tuple(r) for r in transpose([list(c) for c in cols]))


def restriction_matrix(fine: PartitionGamma, coarse: PartitionGamma,
                       coset: Sequence[int]) -> FunctorMatrix:
    if not coarse.coarsens(fine):
        raise ValueError(f"{coarse} does not coarsen {fine}")
    src = phase(fine, coset)
    tgt = phase(coarse, coset)
    L = pullback_matrix(fine, coarse, part_sequence(fine, coset))
    ptgt = presentation(tgt)
    cols = [ptgt.coords_of_character(matvec(L, b)) for b in phase_basis(src)]
    return FunctorMatrix.make(src, tgt, transpose([list(c) for c in cols]))
