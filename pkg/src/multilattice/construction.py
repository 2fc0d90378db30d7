"""
Probabilistic construction of multiple rank-1 lattices
======================================================

Given an enumerated index set A with |A| >= 2 and parameters c > 1,
delta in (0, 1), the construction proceeds greedily:

1.  l_max = ceil( (c/(c-1))**2 * (log|A| - log delta) / 2 ).
2.  eta = floor( c * (|A| - 1) ), an exact integer threshold; candidate
    moduli are the l_max smallest primes p > eta whose componentwise
    residues k mod p are pairwise distinct over A (automatic once p
    exceeds the componentwise span of A).
3.  Repeatedly draw g uniformly from {1, ..., n_t}^d on the seeded
    substream for the current draw index.  A draw is accepted when its
    aliasing-free set covers at least one still-uncovered frequency;
    otherwise the same prime slot is redrawn.  The loop stops when every
    frequency is covered, when l_max lattices have been accepted, or when
    the total number of draws exceeds retry_cap_factor * l_max (the plan
    is then flagged uncovered instead of looping forever).

On the coverage event the total point count satisfies
N <= 2 c l_max (|A| - 1), and the guarantee requires
eta >= max(span(A), 4 l_max log l_max); a warning is emitted when that
assumption fails.  With delta = 1/2 the assumption holds for every index
set once c > 121.078.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cross import HyperbolicCross
from .lattice import (
    AliasingTable,
    Rank1Lattice,
    aliasing_indicators,
    brute_force_dual_box,
)
from .primes import primes_above
from .rng import generator, uniform_ints_one_based

__all__ = [
    "PlanParams",
    "MultiLatticePlan",
    "PlanReport",
    "AssumptionWarning",
    "C_SUFFICIENT",
    "l_max_of",
    "eta_of",
    "candidate_primes",
    "build_plan",
    "verify_plan",
    "full_coverage_single_lattice",
]

# Sufficient constant for the eta >= 4 l_max log l_max assumption at delta = 1/2.
C_SUFFICIENT = 121.078


class AssumptionWarning(UserWarning):
    """The coverage guarantee's assumptions do not hold for these parameters."""


@dataclass(frozen=True)
class PlanParams:
    """Construction parameters: c > 1, delta in (0, 1), seed, and retry cap."""

    c: float = 122.0
    delta: float = 0.5
    seed: int = 0
    retry_cap_factor: int = 10

    def __post_init__(self):
        if not self.c > 1:
            raise ValueError(f"c must exceed 1, got {self.c}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.retry_cap_factor < 1:
            raise ValueError("retry_cap_factor must be >= 1")


@dataclass(frozen=True)
class MultiLatticePlan:
    """
    An accepted collection of lattices with per-frequency coverage counts.

    ``xi[i]`` counts the lattices for which the i-th frequency of the cross
    is aliasing-free; ``covered`` means min(xi) >= 1.
    """

    lattices: tuple[Rank1Lattice, ...]
    tables: tuple[AliasingTable, ...]
    xi: np.ndarray
    covered: bool
    l_max: int
    eta: int
    total_points: int
    draws_used: int
    seed: int
    c: float
    delta: float
    assumption_ok: bool = True

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=np.int64)
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)

    @property
    def num_lattices(self) -> int:
        return len(self.lattices)

    def uncovered_ordinals(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.xi == 0)[0]]

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "c": self.c,
            "delta": self.delta,
            "l_max": self.l_max,
            "eta": self.eta,
            "lattices": [lat.to_json_dict() for lat in self.lattices],
            "xi": [int(x) for x in self.xi],
            "covered": self.covered,
            "total_points": self.total_points,
            "draws_used": self.draws_used,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def l_max_of(cardinality: int, c: float, delta: float) -> int:
    """ceil( (c/(c-1))**2 * (log(cardinality) - log(delta)) / 2 )."""
    if cardinality < 2:
        raise ValueError(f"need at least 2 frequencies, got {cardinality}")
    factor = (c / (c - 1.0)) ** 2
    return int(math.ceil(factor * (math.log(cardinality) - math.log(delta)) / 2.0))


def eta_of(cardinality: int, c: float) -> int:
    """
    floor(c * (cardinality - 1)) as an exact integer.

    Primes are required to satisfy the strict comparison p > eta, which for
    integer p is exactly the real-threshold condition p > c * (|A| - 1).
    """
    return int(Fraction(c) * (cardinality - 1))


def candidate_primes(cross: HyperbolicCross, eta: int, l_max: int, window_cap: int = 10**6) -> list[int]:
    """
    The l_max smallest primes p > eta whose componentwise residues are
    pairwise distinct over the cross.  Distinctness is automatic for
    p > span and verified by residue-tuple deduplication otherwise.
    """
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    arr = cross.as_array()
    out: list[int] = []
    for p in primes_above(eta, window_cap=window_cap):
        if p <= cross.span:
            residues = arr % p
            distinct = len(np.unique(residues, axis=0)) == cross.cardinality
            if not distinct:
                continue
        out.append(p)
        if len(out) == l_max:
            return out
    raise RuntimeError("unreachable")


def build_plan(cross: HyperbolicCross, params: PlanParams) -> MultiLatticePlan:
    """
    Run the greedy probabilistic construction on an enumerated cross.

    Draw i (counting every attempt, accepted or not) takes its generating
    vector from the substream (seed, i), so redraws are reproducible and
    independent of how earlier draws were consumed.
    """
    card = cross.cardinality
    if card < 2:
        raise ValueError(f"construction needs |A| >= 2, got {card}")
    l_max = l_max_of(card, params.c, params.delta)
    eta = eta_of(card, params.c)
    primes = candidate_primes(cross, eta, l_max)

    assumption_ok = eta >= max(cross.span, 4.0 * l_max * math.log(l_max) if l_max > 1 else 0.0)
    if not assumption_ok:
        warnings.warn(
            f"coverage guarantee assumption fails: eta = {eta} < "
            f"max(span = {cross.span}, 4 l_max log l_max = "
            f"{4.0 * l_max * math.log(max(l_max, 1)):.2f})",
            AssumptionWarning,
            stacklevel=2,
        )

    lattices: list[Rank1Lattice] = []
    tables: list[AliasingTable] = []
    covered_mask = np.zeros(card, dtype=bool)
    draws = 0
    max_draws = params.retry_cap_factor * l_max
    t = 0
    while int(covered_mask.sum()) < card and t < l_max and draws < max_draws:
        n_t = primes[t]
        g = tuple(uniform_ints_one_based(params.seed, draws, n_t, cross.dim))
        draws += 1
        lat = Rank1Lattice(n_t, g)
        table = aliasing_indicators(cross, lat, lattice_index=t)
        newly = table.indicators & ~covered_mask
        if newly.any():
            covered_mask |= table.indicators
            lattices.append(lat)
            tables.append(table)
            t += 1
        # else: redraw for the same prime slot

    xi = np.zeros(card, dtype=np.int64)
    for table in tables:
        xi += table.indicators.astype(np.int64)
    covered = bool((xi >= 1).all())
    if not covered and draws >= max_draws:
        warnings.warn(
            f"retry cap of {max_draws} draws exhausted with "
            f"{card - int(covered_mask.sum())} frequencies uncovered",
            AssumptionWarning,
            stacklevel=2,
        )
    return MultiLatticePlan(
        lattices=tuple(lattices),
        tables=tuple(tables),
        xi=xi,
        covered=covered,
        l_max=l_max,
        eta=eta,
        total_points=sum(lat.n for lat in lattices),
        draws_used=draws,
        seed=params.seed,
        c=params.c,
        delta=params.delta,
        assumption_ok=bool(assumption_ok),
    )


@dataclass
class PlanReport:
    """Verification outcome for a constructed plan."""

    covered: bool
    uncovered_ordinals: list[int]
    budget_ok: bool
    budget_bound: int
    total_points: int
    eta_ge_span: bool
    eta_ge_llog: bool
    c_above_sufficient: bool | None
    dual_check_violations: int
    translates_disjoint: bool
    checked_pairs: int

    @property
    def all_ok(self) -> bool:
        ok = (
            self.covered
            and self.budget_ok
            and self.eta_ge_span
            and self.eta_ge_llog
            and self.dual_check_violations == 0
            and self.translates_disjoint
        )
        if self.c_above_sufficient is not None:
            ok = ok and self.c_above_sufficient
        return ok

    def to_json_dict(self) -> dict:
        return {
            "covered": self.covered,
            "uncovered_ordinals": self.uncovered_ordinals,
            "budget_ok": self.budget_ok,
            "budget_bound": self.budget_bound,
            "total_points": self.total_points,
            "eta_ge_span": self.eta_ge_span,
            "eta_ge_llog": self.eta_ge_llog,
            "c_above_sufficient": self.c_above_sufficient,
            "dual_check_violations": self.dual_check_violations,
            "translates_disjoint": self.translates_disjoint,
            "checked_pairs": self.checked_pairs,
            "all_ok": self.all_ok,
        }


def verify_plan(
    cross: HyperbolicCross,
    plan: MultiLatticePlan,
    check_radius: int = 0,
    max_sampled_frequencies: int = 64,
) -> PlanReport:
    """
    Check coverage, the point budget N <= 2 c l_max (|A| - 1), the guarantee
    assumptions, and (when check_radius > 0) spot-check on brute-forced dual
    vectors that translates of aliasing-free frequencies leave the cross and
    stay disjoint.
    """
    card = cross.cardinality
    budget_bound = int(math.ceil(2.0 * plan.c * plan.l_max * (card - 1)))
    eta_ge_span = plan.eta >= cross.span
    llog = 4.0 * plan.l_max * math.log(plan.l_max) if plan.l_max > 1 else 0.0
    eta_ge_llog = plan.eta >= llog
    c_above = plan.c > C_SUFFICIENT if plan.delta == 0.5 else None

    violations = 0
    disjoint = True
    checked = 0
    if check_radius > 0:
        rng = generator(plan.seed, 2**32)  # sampling substream, clear of draw indices
        for t, (lat, table) in enumerate(zip(plan.lattices, plan.tables)):
            duals = brute_force_dual_box(lat, check_radius)
            if not duals:
                continue
            free = np.nonzero(table.indicators)[0]
            if len(free) > max_sampled_frequencies:
                free = rng.choice(free, size=max_sampled_frequencies, replace=False)
            seen: set[tuple[int, ...]] = set()
            for i in sorted(int(x) for x in free):
                k = cross.indices[i]
                for ell in duals:
                    shifted = tuple(a + b for a, b in zip(k, ell))
                    checked += 1
                    if shifted in cross:
                        violations += 1
                    if shifted in seen:
                        disjoint = False
                    seen.add(shifted)
    return PlanReport(
        covered=plan.covered,
        uncovered_ordinals=plan.uncovered_ordinals(),
        budget_ok=plan.total_points <= budget_bound,
        budget_bound=budget_bound,
        total_points=plan.total_points,
        eta_ge_span=bool(eta_ge_span),
        eta_ge_llog=bool(eta_ge_llog),
        c_above_sufficient=c_above,
        dual_check_violations=violations,
        translates_disjoint=disjoint,
        checked_pairs=checked,
    )


def reconstruction_prime_floor(cross: HyperbolicCross) -> int:
    """
    A provable lower bound on the modulus of any lattice that is
    aliasing-free for the whole cross.

    For any axis pair, a dual vector with both components of magnitude at
    most sqrt(n) exists by pigeonhole; when both magnitudes fit inside the
    per-axis extents of the cross, the two corresponding axis frequencies
    collide.  Hence n must reach the square of the second-largest extent
    (and always the cardinality, since residues must be distinct).
    """
    card = cross.cardinality
    arr = cross.as_array()
    exts = sorted(
        (int(arr[:, j].max() - arr[:, j].min()) // 2 for j in range(cross.dim)),
        reverse=True,
    )
    floor = exts[1] ** 2 if cross.dim >= 2 else 0
    return max(card, cross.span + 1, floor)


def full_coverage_single_lattice(
    cross: HyperbolicCross,
    seed: int,
    draws_per_prime: int = 32,
    min_points: int | None = None,
) -> MultiLatticePlan:
    """
    A one-lattice plan whose single lattice is aliasing-free for the whole
    cross (all residues distinct), for comparisons against the multi-lattice
    construction.  Primes are scanned upward from ``min_points`` (default:
    the provable floor of :func:`reconstruction_prime_floor`), drawing a
    fixed number of random generating vectors per prime, so the accepted
    modulus sits near the smallest feasible size above the floor.
    """
    card = cross.cardinality
    if card < 2:
        raise ValueError(f"need |A| >= 2, got {card}")
    start = reconstruction_prime_floor(cross) if min_points is None else max(int(min_points), card)
    draws = 0
    for p in primes_above(start - 1):
        for _ in range(draws_per_prime):
            g = tuple(uniform_ints_one_based(seed, draws, p, cross.dim))
            draws += 1
            lat = Rank1Lattice(p, g)
            table = aliasing_indicators(cross, lat, lattice_index=0)
            if table.singleton_count == card:
                return MultiLatticePlan(
                    lattices=(lat,),
                    tables=(table,),
                    xi=np.ones(card, dtype=np.int64),
                    covered=True,
                    l_max=1,
                    eta=p - 1,
                    total_points=p,
                    draws_used=draws,
                    seed=seed,
                    c=float(p) / max(card - 1, 1),
                    delta=0.5,
                )
    raise RuntimeError("no fully aliasing-free single lattice found")
