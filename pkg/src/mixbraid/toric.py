"""Sliced toric data of X_Gamma and its phases.

A partition Gamma of the labels [0,k] gives coordinates v_t^d (t a part,
0 <= d <= N_t) with rays (d, N_t - d, e_t). Phases are indexed by cosets,
which we store as canonical orderings of the labels (position -> label).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import gcd, lcm
from typing import Iterable, Sequence

from .lattice import (IntMat, det, hermite_normal_form, integer_solve,
                      rational_inverse, rational_solve, transpose)
from .quiver import check_permutation


# --- partitions ---------------------------------------------------------------

@dataclass(frozen=True)
class PartitionGamma:
    k: int
    parts: tuple
    gamma: tuple

    @property
    def s(self) -> int:
        return len(self.parts) - 1

    @property
    def N(self) -> tuple:
        return tuple(len(p) for p in self.parts)

    def n(self, i: int, t: int) -> int:
        """How many labels of part t lie in [0, i-1]."""
        return sum(1 for x in self.parts[t] if x < i)

    def m(self, i: int, t: int) -> int:
        base = self.N[t] - self.n(i, t)
        return base - 1 if self.gamma[i] == t else base

    def label(self) -> str:
        sep = "," if self.k >= 10 else ""
        return "|".join(sep.join(str(x) for x in p) for p in self.parts)

    def is_fin(self) -> bool:
        return all(len(p) == 1 for p in self.parts)

    def coarsens(self, finer: "PartitionGamma") -> bool:
        """True if every part of `finer` sits inside a part of self."""
        if finer.k != self.k:
            return False
        return all(len({self.gamma[x] for x in p}) == 1 for p in finer.parts)

    def moment_map_metadata(self) -> list[str]:
        # the slice X_Gamma sits where mu-type differences vanish inside each part
        return [f"z{a}=z{b}" for p in self.parts for a, b in zip(p, p[1:])]

    def __str__(self) -> str:
        return "(" + ")(".join("".join(map(str, p)) for p in self.parts) + ")"


def partition_stats(k: int, parts: Iterable[Iterable[int]]) -> PartitionGamma:
    parts = [tuple(sorted(int(x) for x in p)) for p in parts]
    if any(not p for p in parts):
        raise ValueError("empty part")
    flat = [x for p in parts for x in p]
    if len(flat) != len(set(flat)):
        raise ValueError("parts overlap")
    if sorted(flat) != list(range(k + 1)):
        raise ValueError(f"parts do not cover [0,{k}]")
    parts.sort(key=min)
    gamma = [0] * (k + 1)
    for t, p in enumerate(parts):
        for x in p:
            gamma[x] = t
    return PartitionGamma(k, tuple(parts), tuple(gamma))


def parse_gamma(text: str | None, k: int) -> PartitionGamma:
    """Parse "01|234" (or "0,1|2,3,4"); "fin"/"crs" name the extremes."""
    if text is None or text.strip() in ("", "fin"):
        return fin(k)
    text = text.strip()
    if text == "crs":
        return crs(k)
    parts = []
    for chunk in text.split("|"):
        chunk = chunk.strip().strip("()")
        if "," in chunk:
            parts.append([int(x) for x in chunk.split(",") if x.strip()])
        else:
            parts.append([int(ch) for ch in chunk])
    return partition_stats(k, parts)


def fin(k: int) -> PartitionGamma:
    return partition_stats(k, [[i] for i in range(k + 1)])


def crs(k: int) -> PartitionGamma:
    return partition_stats(k, [list(range(k + 1))])


def all_partitions(k: int) -> list[PartitionGamma]:
    out = []

    def rec(i, blocks):
        if i == k + 1:
            out.append(partition_stats(k, blocks))
            return
        for b in blocks:
            b.append(i)
            rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        rec(i + 1, blocks)
        blocks.pop()

    rec(0, [])
    return sorted(out, key=lambda g: (len(g.parts), g.parts))


def coarsening_pairs(k: int) -> list[tuple[PartitionGamma, PartitionGamma]]:
    ps = all_partitions(k)
    return [(f, c) for f in ps for c in ps if c.coarsens(f)]


# --- cosets -------------------------------------------------------------------

def part_sequence(G: PartitionGamma, ordering: Sequence[int]) -> tuple:
    return tuple(G.gamma[x] for x in ordering)


def ordering_from_sequence(G: PartitionGamma, seq: Sequence[int]) -> tuple:
    """Canonical representative: inside a part, labels increase left to right."""
    pools = [list(p) for p in G.parts]
    return tuple(pools[t].pop(0) for t in seq)


def canonical_coset(G: PartitionGamma, ordering: Sequence[int]) -> tuple:
    ordering = check_permutation(ordering, G.k)
    return ordering_from_sequence(G, part_sequence(G, ordering))


def all_cosets(G: PartitionGamma) -> list[tuple]:
    seqs = sorted(set(permutations(G.gamma)))
    return [ordering_from_sequence(G, s) for s in seqs]


def parse_coset(text: str | None, k: int) -> tuple:
    if text is None or not text.strip():
        return tuple(range(k + 1))
    text = text.strip()
    if "," in text:
        vals = [int(x) for x in text.split(",")]
    else:
        vals = [int(ch) for ch in text]
    return check_permutation(vals, k)


# --- sliced toric data ----------------------------------------------------------

@dataclass(frozen=True)
class SubProblem:
    G: PartitionGamma
    coords: tuple            # (t, d) pairs, t-major
    rays: tuple              # rows of P~
    tau: tuple               # k rows, one per tau_i, over the coordinates

    @property
    def W(self) -> IntMat:
        return [list(r) for r in self.tau]

    def index(self, t: int, d: int) -> int:
        return self.coords.index((t, d))

    def labels(self) -> list[str]:
        return [f"v{t}^{d}" for t, d in self.coords]

    def weight(self, rho: int) -> tuple:
        return tuple(r[rho] for r in self.tau)

    def to_json(self) -> dict:
        return {"k": self.G.k, "gamma": self.G.label(), "coordinates": self.labels(),
                "P": [list(r) for r in self.rays], "W": self.W}


def _coords(G: PartitionGamma) -> tuple:
    return tuple((t, d) for t in range(G.s + 1) for d in range(G.N[t] + 1))


def tau_for_sequence(G: PartitionGamma, seq: Sequence[int]) -> list[list[int]]:
    """The adjacent-simplex kernel vectors tau_1..tau_k for a part sequence."""
    coords = _coords(G)
    idx = {c: i for i, c in enumerate(coords)}
    k = G.k
    counts = []
    run = [0] * (G.s + 1)
    for q in range(k + 1):
        counts.append(tuple(run))
        run[seq[q]] += 1
    out = []
    for i in range(1, k + 1):
        v = [0] * len(coords)
        A, B = seq[i - 1], seq[i]
        nA, nB = counts[i - 1][A], counts[i][B]
        v[idx[(A, nA + 1)]] += 1
        v[idx[(A, nA)]] -= 1
        v[idx[(B, nB + 1)]] -= 1
        v[idx[(B, nB)]] += 1
        out.append(v)
    return out


@lru_cache(maxsize=None)
def sub_problem(G: PartitionGamma) -> SubProblem:
    coords = _coords(G)
    rays = []
    for t, d in coords:
        z = [0] * (G.s + 1)
        z[t] = 1
        rays.append(tuple([d, G.N[t] - d] + z))
    tau = tau_for_sequence(G, G.gamma)
    return SubProblem(G, coords, tuple(rays), tuple(tuple(r) for r in tau))


def lifted_vartheta(G: PartitionGamma, vartheta: Sequence) -> list:
    """Value on v_t^d: the sum of the d largest vartheta in part t."""
    sp = sub_problem(G)
    out = []
    for t, d in sp.coords:
        vals = sorted((vartheta[x] for x in G.parts[t]), reverse=True)
        out.append(sum(vals[:d]))
    return out


def standard_vartheta(ordering: Sequence[int]) -> list[int]:
    """A vartheta strictly decreasing along the given label ordering."""
    k = len(ordering) - 1
    vt = [0] * (k + 1)
    for p, lab in enumerate(ordering):
        vt[lab] = k - p
    return vt


# --- phases ---------------------------------------------------------------------

@dataclass(frozen=True)
class StratumData:
    component: tuple          # coordinate indices
    tau_vector: tuple         # destabilizing cocharacter on coordinates
    tau_coords: tuple         # same, in the tau basis
    fixed_zero: tuple         # coordinates cut out by the fixed locus
    eta: int

    def to_json(self, labels=None) -> dict:
        name = (lambda i: labels[i]) if labels else (lambda i: i)
        return {"component": [name(i) for i in self.component],
                "tau": list(self.tau_coords), "eta": self.eta,
                "fixed_locus_zero": [name(i) for i in self.fixed_zero]}


@dataclass(frozen=True)
class PhaseData:
    G: PartitionGamma
    coset: tuple
    sequence: tuple
    simplices: tuple
    wall: int | None = None        # set for the orbifold phase beyond a case (b) wall
    components: tuple = field(default=(), compare=False)
    strata: tuple = field(default=(), compare=False)

    @property
    def k(self) -> int:
        return self.G.k

    @property
    def is_orbifold(self) -> bool:
        return self.wall is not None

    @property
    def key(self) -> tuple:
        return (self.G.parts, self.sequence, self.wall)

    def name(self) -> str:
        base = f"{self.G}[{''.join(map(str, self.coset)) if self.k < 10 else self.coset}]"
        return base + (f"~orb{self.wall}" if self.wall else "")

    def to_json(self) -> dict:
        sp = sub_problem(self.G)
        lab = sp.labels()
        return {"gamma": self.G.label(), "coset": list(self.coset),
                "orbifold_wall": self.wall,
                "rays": {lab[i]: list(r) for i, r in enumerate(sp.rays)},
                "simplices": [[lab[i] for i in sorted(s)] for s in self.simplices],
                "strata": [st.to_json(lab) for st in self.strata]}


def simplices_for_sequence(G: PartitionGamma, seq: Sequence[int]) -> list[frozenset]:
    sp = sub_problem(G)
    idx = {c: i for i, c in enumerate(sp.coords)}
    run = [0] * (G.s + 1)
    out = []
    for q in range(G.k + 1):
        s = {idx[(t, run[t])] for t in range(G.s + 1)}
        s.add(idx[(seq[q], run[seq[q]] + 1)])
        out.append(frozenset(s))
        run[seq[q]] += 1
    return out


def minimal_nonfaces(n: int, simplices: Sequence[frozenset]) -> list[tuple]:
    masks = [sum(1 << i for i in s) for s in simplices]

    def is_face(m):
        return any(m & s == m for s in masks)

    out = []
    for m in range(1, 1 << n):
        if is_face(m):
            continue
        if all(is_face(m & ~(1 << i)) for i in range(n) if m >> i & 1):
            out.append(tuple(i for i in range(n) if m >> i & 1))
    return sorted(out)


@lru_cache(maxsize=None)
def _simplex_inverse(rays: tuple, simplex: frozenset) -> tuple:
    """(columns, integer adjugate, det) for the simplex rays with the u slot dropped.

    Rays satisfy u + v = sum N_t z_t, so the u slot is redundant on their span.
    """
    cols = sorted(simplex)
    A = [[rays[c][j] for c in cols] for j in range(1, len(rays[0]))]
    d = det(A)
    inv = rational_inverse(A)
    adj = tuple(tuple(int(x * d) for x in row) for row in inv)
    return tuple(cols), adj, d


def cone_coefficients(rays, simplices, point) -> tuple[frozenset, list]:
    """A simplex whose cone contains the point, with the (nonnegative) coefficients."""
    rays = tuple(tuple(r) for r in rays)
    point = tuple(point)
    for s in simplices:
        cols, adj, d = _simplex_inverse(rays, s)
        num = [sum(a * b for a, b in zip(row, point[1:])) for row in adj]
        if d < 0:
            num, d = [-x for x in num], -d
        if any(x < 0 for x in num):
            continue
        coeffs = [Fraction(x, d) for x in num]
        recon = [sum(c * rays[col][j] for c, col in zip(coeffs, cols)) for j in range(len(point))]
        if recon == list(point):
            return s, list(zip(cols, coeffs))
    raise ValueError(f"point {point} lies in no cone")


def primitive_relation(rays: Sequence[Sequence[int]], simplices: Sequence[frozenset],
                       C: Sequence[int]) -> list[int]:
    """Integral primitive relation: sum over C of rays = combination on the minimal cone."""
    target = [sum(rays[r][j] for r in C) for j in range(len(rays[0]))]
    try:
        _, sol = cone_coefficients(rays, simplices, target)
    except ValueError:
        raise RuntimeError(f"no cone contains the sum over {tuple(C)}") from None
    den = lcm(*(x.denominator for _, x in sol)) if sol else 1
    vec = [0] * len(rays)
    for c, x in sol:
        vec[c] += int(x * den)
    for r in C:
        vec[r] -= den
    g = 0
    for x in vec:
        g = gcd(g, x)
    return [x // g for x in vec]


def _strata(G: PartitionGamma, simplices, components) -> tuple:
    sp = sub_problem(G)
    tauT = transpose([list(r) for r in sp.tau])
    out = []
    for C in components:
        vec = primitive_relation(sp.rays, simplices, C)
        neg = tuple(i for i, x in enumerate(vec) if x < 0)
        if neg != tuple(C):
            raise RuntimeError(f"component {C} has no consistent destabilizing subgroup")
        coords = integer_solve(tauT, vec)
        if coords is None:
            raise RuntimeError(f"relation for {C} is not in the tau lattice")
        eta = sum(-vec[r] for r in C)
        fixed = tuple(i for i, x in enumerate(vec) if x != 0)
        out.append(StratumData(tuple(C), tuple(vec), tuple(coords), fixed, eta))
    return tuple(out)


@lru_cache(maxsize=None)
def _phase_cached(G: PartitionGamma, seq: tuple, wall: int | None) -> PhaseData:
    sp = sub_problem(G)
    simp = simplices_for_sequence(G, seq)
    if wall is not None:
        if not 1 <= wall <= G.k:
            raise ValueError("wall index out of range")
        if seq[wall - 1] != seq[wall]:
            raise ValueError("no orbifold phase across a case (a) wall")
        A = seq[wall]
        nA = sum(1 for t in seq[:wall - 1] if t == A)
        mid = sp.coords.index((A, nA + 1))
        merged = (simp[wall - 1] | simp[wall]) - {mid}
        simp = simp[:wall - 1] + [merged] + simp[wall + 1:]
    comps = minimal_nonfaces(len(sp.coords), simp)
    strata = _strata(G, simp, comps)
    return PhaseData(G, ordering_from_sequence(G, seq), seq, tuple(simp), wall,
                     tuple(comps), strata)


def phase(G: PartitionGamma, sigma: Sequence[int]) -> PhaseData:
    sigma = check_permutation(sigma, G.k)
    return _phase_cached(G, part_sequence(G, sigma), None)


def orbifold_phase(G: PartitionGamma, sigma: Sequence[int], wall: int) -> PhaseData:
    sigma = check_permutation(sigma, G.k)
    return _phase_cached(G, part_sequence(G, sigma), wall)


def unstable_components(ph: PhaseData) -> list[StratumData]:
    return list(ph.strata)


# --- walls ----------------------------------------------------------------------

@dataclass(frozen=True)
class WallInfo:
    case: str                 # "a" or "b"
    wall: int
    labels: tuple             # labels at positions wall-1, wall
    tau_vector: tuple         # oriented positive on the source phase
    tau_coords: tuple
    family_dim: int
    orbifold_isotropy: int | None

    def to_json(self) -> dict:
        return {"case": self.case, "wall": self.wall, "labels": list(self.labels),
                "tau": list(self.tau_coords), "family_dimension": self.family_dim,
                "orbifold_isotropy": self.orbifold_isotropy}


def wall_classification(G: PartitionGamma, coset: Sequence[int], i: int) -> WallInfo:
    coset = check_permutation(coset, G.k)
    if not 1 <= i <= G.k:
        raise ValueError(f"wall index {i} outside [1,{G.k}]")
    seq = part_sequence(G, coset)
    vec = tau_for_sequence(G, seq)[i - 1]
    sp = sub_problem(G)
    coords = integer_solve(transpose([list(r) for r in sp.tau]), vec)
    same = seq[i - 1] == seq[i]
    return WallInfo("b" if same else "a", i, (coset[i - 1], coset[i]), tuple(vec),
                    tuple(coords), G.s if same else G.s - 1, 2 if same else None)


def wall_target(G: PartitionGamma, coset: Sequence[int], i: int) -> PhaseData:
    """Phase on the far side of wall i: flopped manifold phase or orbifold phase."""
    info = wall_classification(G, coset, i)
    if info.case == "b":
        return orbifold_phase(G, coset, i)
    sw = list(coset)
    sw[i - 1], sw[i] = sw[i], sw[i - 1]
    return phase(G, sw)


# --- checks used by tests and the CLI --------------------------------------------

def lattice_basis(vectors: Sequence[Sequence[int]]) -> IntMat:
    H, _ = hermite_normal_form([list(v) for v in vectors])
    return [r for r in H if any(r)]


def simplex_volumes(G: PartitionGamma, simplices) -> list[int]:
    """Index of each simplex's ray lattice inside the lattice of all rays."""
    sp = sub_problem(G)
    B = lattice_basis(sp.rays)
    Bt = transpose(B)
    out = []
    for s in simplices:
        rows = []
        for c in sorted(s):
            x = rational_solve(Bt, sp.rays[c])
            rows.append([int(v) for v in x])
        out.append(abs(det(rows)))
    return out


def concavity_margins(G: PartitionGamma, simplices, vartheta) -> list[Fraction]:
    """For each simplex S and ray r outside S: L_S(r) - lifted value at r.

    L_S is the linear function agreeing with the lifted vartheta on S. All
    margins are positive exactly when the lift is strictly concave on the fan.
    """
    sp = sub_problem(G)
    vals = lifted_vartheta(G, vartheta)
    out = []
    for s in simplices:
        cols = sorted(s)
        A = [[sp.rays[c][j] for c in cols] for j in range(len(sp.rays[0]))]
        for r in range(len(sp.coords)):
            if r in s:
                continue
            x = rational_solve(A, sp.rays[r])
            out.append(sum(xi * vals[c] for xi, c in zip(x, cols)) - vals[r])
    return out


def lifted_pairing(G: PartitionGamma, vartheta, vec: Sequence[int]):
    return sum(a * b for a, b in zip(lifted_vartheta(G, vartheta), vec))


def embed_ray(fine: PartitionGamma, coarse: PartitionGamma, vec: Sequence[int]) -> tuple:
    """Image of a coarse lattice vector in the fine lattice (z slots copied per fine part)."""
    out = [vec[0], vec[1]]
    for p in fine.parts:
        out.append(vec[2 + coarse.gamma[p[0]]])
    return tuple(out)
