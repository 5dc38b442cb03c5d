"""Ambient GIT data of the doubled affine A_k quiver.

Coordinates are ordered b_0, a_0, b_1, a_1, ..., b_k, a_k. Rays live in
Z^{2+(k+1)} with coordinates (u, v, z_0, ..., z_k).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import IntMat, matmul


def b_index(i: int) -> int:
    return 2 * i


def a_index(i: int) -> int:
    return 2 * i + 1


def coordinate_labels(k: int) -> list[str]:
    out = []
    for i in range(k + 1):
        out += [f"b{i}", f"a{i}"]
    return out


def check_permutation(sigma, k: int) -> tuple[int, ...]:
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(k + 1)):
        raise ValueError(f"{sigma} is not a permutation of [0,{k}]")
    return sigma


@dataclass(frozen=True)
class AmbientProblem:
    k: int
    labels: list = field(hash=False)
    Q: IntMat = field(hash=False)
    P: IntMat = field(hash=False)

    @property
    def alpha(self) -> list[tuple]:
        return [tuple(self.P[a_index(i)]) for i in range(self.k + 1)]

    @property
    def beta(self) -> list[tuple]:
        return [tuple(self.P[b_index(i)]) for i in range(self.k + 1)]

    def invariant_monomials(self) -> dict[str, dict[str, int]]:
        """Exponent vectors of u, v, z_i on the coordinates."""
        k = self.k
        out = {"u": {f"a{i}": 1 for i in range(k + 1)},
               "v": {f"b{i}": 1 for i in range(k + 1)}}
        for i in range(k + 1):
            out[f"z{i}"] = {f"a{i}": 1, f"b{i}": 1}
        return out

    def moment_maps(self) -> dict[str, dict[str, int]]:
        """mu_i = z_i - z_{i-1}, as functionals on the z coordinates."""
        k = self.k
        return {f"mu{i}": {f"z{i}": 1, f"z{(i - 1) % (k + 1)}": -1} for i in range(k + 1)}

    def to_json(self) -> dict:
        return {"k": self.k, "coordinates": self.labels, "Q": self.Q, "P": self.P,
                "ray_coordinates": ["u", "v"] + [f"z{i}" for i in range(self.k + 1)],
                "Q_rows": [f"vertex{i}" for i in list(range(1, self.k + 1)) + [0]]}


def quiver_row(k: int, i: int) -> list[int]:
    row = [0] * (2 * (k + 1))
    j = (i - 1) % (k + 1)
    row[a_index(j)] += 1
    row[b_index(i)] += 1
    row[a_index(i)] -= 1
    row[b_index(j)] -= 1
    return row


def ambient_data(k: int) -> AmbientProblem:
    if k < 1:
        raise ValueError("k must be at least 1")
    Q = [quiver_row(k, i) for i in list(range(1, k + 1)) + [0]]
    P = []
    for i in range(k + 1):
        z = [0] * (k + 1)
        z[i] = 1
        P.append([0, 1] + z)  # b_i
        P.append([1, 0] + z)  # a_i
    return AmbientProblem(k, coordinate_labels(k), Q, P)


def check_ambient(prob: AmbientProblem) -> None:
    k = prob.k
    Q, P = prob.Q, prob.P
    if any(any(x) for x in matmul(Q, P)):
        raise AssertionError("P o Q != 0")
    for c in range(2 * (k + 1)):
        if sum(Q[r][c] for r in range(k + 1)) != 0:
            raise AssertionError("column sum of Q nonzero")
    for ray in P:
        if ray[0] + ray[1] != sum(ray[2:]) or sum(ray[2:]) != 1:
            raise AssertionError("ray off the height-one hyperplane")


def ambient_fan(k: int, sigma) -> list[frozenset]:
    """Maximal simplices as sets of coordinate indices.

    Simplex p is {alpha_sigma(0..p), beta_sigma(p..k)}.
    """
    sigma = check_permutation(sigma, k)
    out = []
    for p in range(k + 1):
        s = {a_index(sigma[q]) for q in range(p + 1)}
        s |= {b_index(sigma[q]) for q in range(p, k + 1)}
        out.append(frozenset(s))
    return out


@dataclass(frozen=True)
class StabilityCharacter:
    theta: tuple
    vartheta: tuple

    @classmethod
    def from_vartheta(cls, vartheta) -> "StabilityCharacter":
        vt = tuple(vartheta)
        k = len(vt) - 1
        theta = [vt[k] - vt[0]] + [vt[i - 1] - vt[i] for i in range(1, k + 1)]
        return cls(tuple(theta), vt)

    def chamber(self) -> tuple[int, ...] | None:
        """Labels ordered by decreasing vartheta; None on a wall."""
        vt = self.vartheta
        if len(set(vt)) != len(vt):
            return None
        return tuple(sorted(range(len(vt)), key=lambda i: -vt[i]))

    def is_standard(self) -> bool:
        return self.chamber() == tuple(range(len(self.vartheta)))
