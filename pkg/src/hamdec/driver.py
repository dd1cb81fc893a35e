"""Analysis reports and the Monte Carlo engine.

`analyze` decides the two geometric conditions for a step-graphon and
combines them into a verdict:

  * both hold (connected skeleton, odd cycle, interior concentration
    vector): sampled graphs admit Hamiltonian decompositions with
    probability tending to one;
  * the odd-cycle condition fails or the vector is exterior: the property
    provably fails;
  * boundary membership with an odd cycle: inconclusive, the limit need
    not be 0 or 1.

`montecarlo` estimates the decomposition probability at a fixed n: per
trial it samples a graph, runs the exact existence oracle, and separately
attempts the full constructive pipeline (interior check, loopless-odd
normalization, tally build, decomposition, realization).  Constructive
successes are witnesses, so they never exceed oracle successes.  Trials
are independent with derived seeds; reports are deterministic.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ._seeds import derive
from .construct import (
    ConstructionError,
    build_balanced_matrix,
    build_decomposition,
)
from .model import (
    DisconnectedSkeletonError,
    Partition,
    StepGraphon,
    concentration,
    connected_components,
    has_odd_cycle,
    incidence,
    skeleton,
)
from .polytope import Membership, MembershipCertificate, positive_certificate
from .realize import graph_has_decomposition, realize
from .sampling import SampledGraph, assign_blocks, empirical_concentration, sample_graph
from .refine import ensure_loopless_odd_cycle


class Verdict(str, enum.Enum):
    PREDICTS_H = "predicts-h"
    PREDICTS_NOT_H = "predicts-not-h"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class AnalysisReport:
    connected: bool
    condition_a: bool
    condition_b_status: Membership | None
    verdict: Verdict
    certificate: MembershipCertificate | None
    components: tuple["AnalysisReport", ...] = ()

    def to_dict(self) -> dict:
        out = {
            "connected": self.connected,
            "condition_a": self.condition_a,
            "condition_b_status": (
                self.condition_b_status.value if self.condition_b_status else None
            ),
            "verdict": self.verdict.value,
        }
        if self.certificate is not None and self.certificate.margin is not None:
            out["margin"] = str(self.certificate.margin)
            out["coefficients"] = [str(c) for c in self.certificate.coefficients]
        if self.components:
            out["components"] = [c.to_dict() for c in self.components]
        return out


def _component_graphon(w: StepGraphon, nodes: frozenset[int]) -> StepGraphon:
    """The induced sub-graphon on a component, intervals renormalized."""
    members = sorted(nodes)
    lengths = [concentration(w.partition)[i] for i in members]
    total = sum(lengths)
    bps = [Fraction(0)]
    for ln in lengths:
        bps.append(bps[-1] + ln / total)
    bps[-1] = Fraction(1)
    values = tuple(tuple(w.values[i][j] for j in members) for i in members)
    return StepGraphon(Partition(tuple(bps)), values)


def analyze(w: StepGraphon) -> AnalysisReport:
    """Decide both conditions and produce the verdict.

    Disconnected skeletons get one sub-report per component (each analyzed
    as its own renormalized graphon) and an overall inconclusive verdict;
    the split is informational only.
    """
    s = skeleton(w)
    comps = connected_components(s)
    cond_a = has_odd_cycle(s)
    if len(comps) > 1:
        subs = tuple(analyze(_component_graphon(w, c)) for c in comps)
        return AnalysisReport(False, cond_a, None, Verdict.INCONCLUSIVE, None, subs)
    cert = positive_certificate(incidence(s), concentration(w.partition))
    if not cond_a or cert.status is Membership.EXTERIOR:
        verdict = Verdict.PREDICTS_NOT_H
    elif cert.status is Membership.INTERIOR:
        verdict = Verdict.PREDICTS_H
    else:
        verdict = Verdict.INCONCLUSIVE
    return AnalysisReport(True, cond_a, cert.status, verdict, cert)


@dataclass(frozen=True)
class TrialResult:
    trial: int
    seed: int
    oracle: bool
    constructive: bool
    x_interior: bool


@dataclass(frozen=True)
class MonteCarloReport:
    n: int
    trials: int
    successes_oracle: int
    successes_constructive: int
    estimate: float
    ci_low: float
    ci_high: float
    master_seed: int
    rows: tuple[TrialResult, ...] = field(repr=False, default=())

    def to_csv(self) -> str:
        lines = ["trial,seed,n,oracle,constructive,x_interior"]
        for r in self.rows:
            lines.append(
                f"{r.trial},{r.seed},{self.n},{int(r.oracle)},"
                f"{int(r.constructive)},{int(r.x_interior)}"
            )
        return "\n".join(lines) + "\n"


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def constructive_attempt(
    w: StepGraphon, g: SampledGraph, seed: int, attempts: int = 32
) -> tuple[bool, bool]:
    """Run the full constructive pipeline on a sampled graph.

    Returns (succeeded, empirical_vector_was_interior).  Pipeline failures
    of any stage count as False; they are expected at small n or for
    graphons missing the conditions, not exceptional.
    """
    s = skeleton(w)
    try:
        x = empirical_concentration(g, s.node_count)
        cert = positive_certificate(incidence(s), x)
    except (ValueError, DisconnectedSkeletonError):
        return False, False
    interior = cert.status is Membership.INTERIOR
    if not interior:
        return False, False
    try:
        wn = ensure_loopless_odd_cycle(w)
        sn = skeleton(wn)
        blocks = assign_blocks(wn, g.coords)
        gn = SampledGraph(g.n, g.coords, blocks, g.edges)
        xn = empirical_concentration(gn, sn.node_count)
        tally = build_balanced_matrix(xn, g.n, sn)
        pattern = build_decomposition(tally, tally.row_sums(), sn)
        outcome = realize(tally, pattern, gn, sn, derive(seed, "realize"), attempts)
        return outcome.ok, True
    except (ValueError, ConstructionError, DisconnectedSkeletonError):
        return False, True


def run_trial(w: StepGraphon, n: int, master_seed: int, trial: int, attempts: int = 32) -> TrialResult:
    seed = derive(master_seed, "trial", trial)
    g = sample_graph(w, n, seed)
    oracle = graph_has_decomposition(g)
    constructive, interior = constructive_attempt(w, g, seed, attempts)
    return TrialResult(trial, seed, oracle, constructive, interior)


def _trial_args(job):
    w, n, master_seed, trial, attempts = job
    return run_trial(w, n, master_seed, trial, attempts)


def montecarlo(
    w: StepGraphon,
    n: int,
    trials: int,
    master_seed: int,
    attempts: int = 32,
    jobs: int | None = None,
) -> MonteCarloReport:
    """Estimate the decomposition probability at size n over seeded trials.

    Each trial derives its own seed from (master_seed, trial index), so the
    report is reproducible and trials can run in parallel (`jobs` processes,
    or the HAMDEC_JOBS environment override).
    """
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be positive")
    if jobs is None:
        jobs = int(os.environ.get("HAMDEC_JOBS", "1"))
    args = [(w, n, master_seed, t, attempts) for t in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_trial_args, args, chunksize=max(1, trials // (4 * jobs))))
    else:
        rows = [run_trial(*a) for a in args]
    rows.sort(key=lambda r: r.trial)
    oko = sum(r.oracle for r in rows)
    okc = sum(r.constructive for r in rows)
    lo, hi = wilson_interval(oko, trials)
    return MonteCarloReport(
        n=n,
        trials=trials,
        successes_oracle=oko,
        successes_constructive=okc,
        estimate=oko / trials,
        ci_low=lo,
        ci_high=hi,
        master_seed=master_seed,
        rows=tuple(rows),
    )
