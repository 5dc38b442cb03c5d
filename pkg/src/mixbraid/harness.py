"""Batch checks: braid relations, intertwining squares and the path pipeline."""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import ktheory
from .braids import (BraidWord, act, crossing_matrix, enumerate_relations, lift_word,
                     word_matrix)
from .fi import FiPath, path_to_arrow, winding_vector
from .ktheory import FunctorMatrix, generator_matrix_at, restriction_matrix
from .toric import (PartitionGamma, all_cosets, all_partitions, canonical_coset,
                    coarsening_pairs)

SCHEMA_VERSION = 1


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class VerificationReport:
    kind: str
    config: dict
    outcomes: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def failures(self) -> list:
        return [o for o in self.outcomes if o["status"] != "pass"]

    @property
    def status(self) -> str:
        return "fail" if self.failures else "pass"

    def merge(self, other: "VerificationReport") -> None:
        self.outcomes += other.outcomes
        self.seconds += other.seconds

    def summary(self) -> str:
        n = len(self.outcomes)
        lines = [f"{self.kind}: {n - len(self.failures)}/{n} passed ({self.seconds:.1f}s) -> {self.status}"]
        for o in self.failures[:10]:
            lines.append(f"  FAIL {o['name']}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "kind": self.kind, "status": self.status,
                "config": self.config, "outcomes": self.outcomes,
                "timing_seconds": round(self.seconds, 3)}


def box_policy() -> dict:
    return {"start_padding": ktheory.DEFAULT_PAD, "step": ktheory.PAD_STEP,
            "max_padding": ktheory._max_pad}


class _Clock:
    def __init__(self, budget: float | None):
        self.t0 = time.monotonic()
        self.budget = budget

    def tick(self, what: str) -> None:
        if self.budget is not None and time.monotonic() - self.t0 > self.budget:
            raise BudgetExceeded(f"time budget of {self.budget}s exceeded at {what}")

    def elapsed(self) -> float:
        return time.monotonic() - self.t0


def _randomized(rng: random.Random | None):
    """Generator-matrix function, optionally with fresh random window lifts."""
    if rng is None:
        return lambda G, c, p, s: crossing_matrix(G, c, p, s)

    def f(G, c, p, s):
        if s > 0:
            return generator_matrix_at(G, c, p + 1, rng)
        return generator_matrix_at(G, act(G, c, p), p + 1, rng).inverse()
    return f


def _arrow_matrix(arrow, gen) -> FunctorMatrix:
    from .ktheory import identity_matrix
    from .toric import phase
    M = identity_matrix(phase(arrow.G, arrow.source))
    for c in arrow.crossings:
        M = gen(arrow.G, c.source, c.position, c.sign) @ M
    return M


def _check_relations(G: PartitionGamma, cosets, seed, budget) -> VerificationReport:
    clock = _Clock(budget)
    rng = random.Random(seed) if seed is not None else None
    gen = _randomized(rng)
    rep = VerificationReport("relations", {})
    for rel in enumerate_relations(G, cosets):
        clock.tick(rel.describe())
        a = _arrow_matrix(rel.lhs, gen)
        b = _arrow_matrix(rel.rhs, gen)
        ok = a.matrix == b.matrix and a.target == b.target
        out = {"name": f"{G.label()} {rel.describe()}", "status": "pass" if ok else "fail"}
        if not ok:
            out.update(lhs=rel.lhs.describe(), rhs=rel.rhs.describe(),
                       lhs_matrix=a.to_json(), rhs_matrix=b.to_json())
        rep.outcomes.append(out)
    rep.seconds = clock.elapsed()
    return rep


def _pool_map(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futs = [ex.submit(fn, *j) for j in jobs]
        return [f.result() for f in futs]


def verify_relations(k: int, G: PartitionGamma | None = None, cosets: Sequence | None = None,
                     seed: int | None = None, workers: int = 1,
                     budget: float | None = None) -> VerificationReport:
    """All braid and far-commutation relations, as exact matrix identities.

    With G None every partition of [0,k] is checked. A seed re-randomizes the
    window lifts behind each generator.
    """
    parts = [G] if G is not None else all_partitions(k)
    t0 = time.monotonic()
    jobs = []
    for g in parts:
        cs = list(cosets) if cosets is not None else all_cosets(g)
        # split per coset so a pool can spread the work
        for c in cs:
            jobs.append((g, [c], seed, budget))
    reps = _pool_map(_check_relations, jobs, workers)
    rep = VerificationReport("relations", {"k": k, "gamma": [g.label() for g in parts],
                                           "cosets": [list(c) for c in cosets] if cosets else "all",
                                           "box_policy": box_policy(), "seed": seed})
    for r in reps:
        rep.outcomes += r.outcomes
    rep.outcomes.sort(key=lambda o: o["name"])
    rep.seconds = time.monotonic() - t0
    return rep


def _check_intertwining(fine, coarse, cosets, budget) -> VerificationReport:
    clock = _Clock(budget)
    rep = VerificationReport("intertwining", {})
    for c in cosets:
        for p in range(fine.k):
            clock.tick(f"{fine}->{coarse} at {c}")
            Tf = generator_matrix_at(fine, c, p + 1)
            cc = canonical_coset(coarse, c)
            Tc = generator_matrix_at(coarse, cc, p + 1)
            lhs = restriction_matrix(fine, coarse, act(fine, c, p)) @ Tf
            rhs = Tc @ restriction_matrix(fine, coarse, c)
            ok = lhs.matrix == rhs.matrix and lhs.target == rhs.target
            name = f"{fine.label()}->{coarse.label()} [{''.join(map(str, c))}] t({c[p]},{c[p + 1]})"
            out = {"name": name, "status": "pass" if ok else "fail"}
            if not ok:
                out.update(lhs_matrix=lhs.to_json(), rhs_matrix=rhs.to_json())
            rep.outcomes.append(out)
    rep.seconds = clock.elapsed()
    return rep


def verify_intertwining(k: int, fine: PartitionGamma | None = None,
                        coarse: PartitionGamma | None = None, workers: int = 1,
                        budget: float | None = None) -> VerificationReport:
    """Restriction after a fine generator equals the coarse generator after restriction."""
    if fine is not None and coarse is not None:
        if not coarse.coarsens(fine):
            raise ValueError(f"{coarse} does not coarsen {fine}")
        pairs = [(fine, coarse)]
    else:
        pairs = [(f, c) for f, c in coarsening_pairs(k)
                 if (fine is None or f == fine) and (coarse is None or c == coarse)]
    t0 = time.monotonic()
    jobs = [(f, c, [cs], budget) for f, c in pairs for cs in all_cosets(f)]
    reps = _pool_map(_check_intertwining, jobs, workers)
    rep = VerificationReport("intertwining", {"k": k, "pairs": [[f.label(), c.label()] for f, c in pairs],
                                              "box_policy": box_policy()})
    for r in reps:
        rep.outcomes += r.outcomes
    rep.outcomes.sort(key=lambda o: o["name"])
    rep.seconds = time.monotonic() - t0
    return rep


def pipeline(path: FiPath, G: PartitionGamma | None = None, gap: float | None = 1.0,
             eps: float = 1e-9) -> dict:
    """Path -> groupoid arrow -> K-theory matrix, plus the net winding of each root."""
    G = G or path.G
    arrow = path_to_arrow(G, path, gap, eps)
    M = word_matrix(arrow)
    return {"schema_version": SCHEMA_VERSION, "arrow": arrow.to_json(), "matrix": M.to_json(),
            "twist_vector": [str(x) for x in winding_vector(path)]}


def direct_word(G: PartitionGamma, base, w: BraidWord) -> dict:
    arrow = lift_word(G, base, w)
    return {"arrow": arrow.to_json(), "matrix": word_matrix(arrow).to_json()}
