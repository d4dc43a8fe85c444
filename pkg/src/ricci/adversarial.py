"""Hard instance families and a query-count experiment harness.

Two classes of ternary matching instances are hard to tell apart with few
queries: a class with one weight-1 pair (or a weight-1 perfect matching)
among weight-3 pairs, and the all-weight-3 instance. The harness draws a
hidden instance from a 50/50 mix, lets a concrete strategy decide which class
it came from, and records the queries it spent.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
from dataclasses import dataclass, field

import numpy as np

from .emd import MpmctInstance
from .errors import DomainError
from .oracle import EXHAUSTED, BipartiteSession

SINGLE_LIGHT = "single_light_edge"
ALL_HEAVY = "all_heavy"
PERMUTATION = "permutation_matching"
KINDS = (SINGLE_LIGHT, ALL_HEAVY, PERMUTATION)

CLASS_LIGHT = "G1"
CLASS_HEAVY = "G2"

CSV_COLUMNS = ("trial", "family", "correct", "pair_q", "wneigh_q", "seldeg_q")


@dataclass(frozen=True)
class InstanceFamily:
    kind: str
    n: int
    parameters: tuple = ()

    def build(self) -> MpmctInstance:
        if self.kind == SINGLE_LIGHT:
            return gen_single_light(self.n, *self.parameters)
        if self.kind == ALL_HEAVY:
            return gen_all_heavy(self.n)
        if self.kind == PERMUTATION:
            return gen_permutation(self.n, self.parameters)
        raise DomainError(f"unknown family {self.kind!r}")


def gen_single_light(n: int, i: int, j: int) -> MpmctInstance:
    """All weights 3 except ``w(u_i, v_j) = 1`` (1-based indices)."""
    if n < 1 or not (1 <= i <= n and 1 <= j <= n):
        raise DomainError(f"index ({i}, {j}) out of range for n={n}")
    w = np.full((n, n), 3, dtype=np.int64)
    w[i - 1, j - 1] = 1
    return MpmctInstance.from_matrix(w)


def gen_all_heavy(n: int) -> MpmctInstance:
    if n < 1:
        raise DomainError("n must be at least 1")
    return MpmctInstance.from_matrix(np.full((n, n), 3, dtype=np.int64))


def gen_permutation(n: int, pi) -> MpmctInstance:
    """Weight 1 on ``(u_i, v_pi(i))``, 3 elsewhere; ``pi`` is a permutation of 1..n."""
    pi = [int(p) for p in pi]
    if n < 1 or sorted(pi) != list(range(1, n + 1)):
        raise DomainError(f"{pi!r} is not a permutation of 1..{n}")
    w = np.full((n, n), 3, dtype=np.int64)
    w[np.arange(n), np.asarray(pi) - 1] = 1
    return MpmctInstance.from_matrix(w)


def gen_bounded_random(n: int, d: int, rng, keep=0.5) -> MpmctInstance:
    """Random instance whose weight-1 and weight-2 classes each have degree <= d.

    Each class is a union of ``d`` random partial perfect matchings, each pair
    kept with probability ``keep``; pairs already taken keep their first weight.
    """
    if n < 1 or d < 0:
        raise DomainError("need n >= 1 and d >= 0")
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    w = np.full((n, n), 3, dtype=np.int64)
    for s in (1, 2):
        for _ in range(d):
            perm = list(range(n))
            rng.shuffle(perm)
            for i, j in enumerate(perm):
                if rng.random() < keep and w[i, j] == 3:
                    w[i, j] = s
    return MpmctInstance.from_matrix(w)


def pair_scan(session: BipartiteSession, rng: random.Random) -> str:
    """Query pairs in random order; answer the light class at the first weight below 3."""
    pairs = [(x, y) for x in session.left_nodes() for y in session.right_nodes()]
    rng.shuffle(pairs)
    for x, y in pairs:
        if session.pair_query(x, y) < 3:
            return CLASS_LIGHT
    return CLASS_HEAVY


def wneigh_scan(session: BipartiteSession, rng: random.Random) -> str:
    """Ask each left node, in random order, for a weight-1 neighbor."""
    left = session.left_nodes()
    rng.shuffle(left)
    for x in left:
        if session.weighted_neighbor_query(x, 1) is not EXHAUSTED:
            return CLASS_LIGHT
    return CLASS_HEAVY


STRATEGIES = {"pair_scan": pair_scan, "wneigh_scan": wneigh_scan}

# family mix name -> kind of the light class (None: heavy instances only)
MIXES = {"single_light": SINGLE_LIGHT, "permutation": PERMUTATION, "all_heavy": None}


def draw_family(mix: str, n: int, rng: random.Random) -> tuple[str, InstanceFamily]:
    if mix not in MIXES:
        raise DomainError(f"unknown family mix {mix!r}")
    light = MIXES[mix]
    if light is None or rng.random() < 0.5:
        return CLASS_HEAVY, InstanceFamily(ALL_HEAVY, n)
    if light == SINGLE_LIGHT:
        return CLASS_LIGHT, InstanceFamily(SINGLE_LIGHT, n, (rng.randint(1, n), rng.randint(1, n)))
    pi = list(range(1, n + 1))
    rng.shuffle(pi)
    return CLASS_LIGHT, InstanceFamily(PERMUTATION, n, tuple(pi))


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    family: str
    correct: bool
    pair_q: int
    wneigh_q: int
    seldeg_q: int


@dataclass
class ExperimentReport:
    strategy: str
    mix: str
    n: int
    records: list = field(default_factory=list)

    def column(self, name: str) -> list[int]:
        return [getattr(r, name) for r in self.records]

    def summary(self) -> dict:
        out = {"strategy": self.strategy, "mix": self.mix, "n": self.n, "trials": len(self.records)}
        out["accuracy"] = sum(r.correct for r in self.records) / max(1, len(self.records))
        for name in ("pair_q", "wneigh_q", "seldeg_q"):
            col = self.column(name) or [0]
            q = statistics.quantiles(col, n=20, method="inclusive") if len(col) > 1 else [col[0]] * 19
            out[name] = {"mean": statistics.fmean(col), "p50": q[9], "p90": q[17], "max": max(col)}
        # Weighted-neighbor thresholds n/6 and (deg(v) - 1)/2 are both
        # reported; deg(v) = n + 1 in the realized gadget.
        out["threshold_pair"] = self.n ** 2 / 6
        out["threshold_wneigh_sixth"] = self.n / 6
        out["threshold_wneigh_half_degree"] = ((self.n + 1) - 1) / 2
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.records:
            w.writerow([r.trial, r.family, int(r.correct), r.pair_q, r.wneigh_q, r.seldeg_q])
        return buf.getvalue()


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


def run_experiment(strategy, family_mix: str, trials: int, seed: int, n: int = 20) -> ExperimentReport:
    """Run ``trials`` independent hidden-instance trials of ``strategy``.

    Args:
        strategy: Name in :data:`STRATEGIES` or a callable ``(session, rng) -> "G1" | "G2"``.
        family_mix: ``"single_light"``, ``"permutation"`` or ``"all_heavy"``.
        trials: Number of trials.
        seed: Master seed; trial ``t`` uses a generator derived from ``(seed, t)``.
        n: Instance size.
    """
    if isinstance(strategy, str):
        if strategy not in STRATEGIES:
            raise DomainError(f"unknown strategy {strategy!r}")
        name, fn = strategy, STRATEGIES[strategy]
    else:
        name, fn = getattr(strategy, "__name__", "custom"), strategy
    if family_mix not in MIXES:
        raise DomainError(f"unknown family mix {family_mix!r}")
    report = ExperimentReport(name, family_mix, n)
    for t in range(trials):
        rng = trial_rng(seed, t)
        truth, fam = draw_family(family_mix, n, rng)
        session = BipartiteSession.from_instance(fam.build(), rng)
        answer = fn(session, rng)
        c = session.counters
        report.records.append(
            TrialRecord(t, fam.kind, answer == truth, c.pair, c.weighted_neighbor, c.selective_degree)
        )
    return report
