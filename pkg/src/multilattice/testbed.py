"""
Known-coefficient test functions and convergence experiments
============================================================

Two kinds of ground truth:

- random trigonometric polynomials supported on an enumerated cross
  (reconstruction should be exact, which isolates the aliasing analysis
  from truncation effects);
- Bernoulli-polynomial product functions

      f(x) = prod_j (1 + gamma_j * phi_m(x_j)),

  with phi_1 = 2 pi^2 B_2 and phi_2 = -(2 pi^4 / 3) B_4, whose Fourier
  coefficients are fhat(k) = prod_{j in supp(k)} gamma_j / |k_j|**(2m):
  explicit polynomial decay 2m, closed-form point values, and closed-form
  L2 mass, so truncation and aliasing errors are measurable exactly.

``convergence_experiment`` sweeps the cross radius, reconstructs with
freshly built multi-lattice plans (optionally also with a single fully
aliasing-free lattice for comparison), and fits log-log error slopes
against the total point count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .approx import (
    SampledFunction,
    ShiftConfig,
    TrigPolynomial,
    linf_estimate_against,
    mult_coeffs,
    rms_l2_over_shifts,
)
from .construction import (
    MultiLatticePlan,
    PlanParams,
    build_plan,
    full_coverage_single_lattice,
)
from .cross import HyperbolicCross, enumerate_cross
from .rng import generator
from .weights import SmoothnessParams, WeightSpec, riemann_zeta, rnorm

__all__ = [
    "BernoulliProductFunction",
    "ConvergenceRow",
    "ExperimentConfig",
    "ExperimentResult",
    "random_on_cross_poly",
    "bernoulli_eval",
    "convergence_experiment",
]


def random_on_cross_poly(
    cross: HyperbolicCross, seed: int, unit_norm: bool = False
) -> TrigPolynomial:
    """
    Complex-Gaussian coefficients on every frequency of the cross; with
    ``unit_norm`` the polynomial is rescaled to weighted norm exactly 1.
    """
    if cross.cardinality == 0:
        raise ValueError("cross is empty")
    rng = generator(seed, 0)
    vals = rng.standard_normal(cross.cardinality) + 1j * rng.standard_normal(
        cross.cardinality
    )
    poly = TrigPolynomial(dict(zip(cross.indices, vals)))
    if unit_norm:
        norm = poly.korobov_norm(cross.params, cross.spec)
        poly = TrigPolynomial({k: v / norm for k, v in poly.terms.items()})
    return poly


def _phi(m: int, x: np.ndarray) -> np.ndarray:
    if m == 1:
        b2 = x * x - x + 1.0 / 6.0
        return 2.0 * math.pi**2 * b2
    if m == 2:
        b4 = x**4 - 2.0 * x**3 + x * x - 1.0 / 30.0
        return -(2.0 * math.pi**4 / 3.0) * b4
    raise ValueError(f"degree must be 1 or 2, got {m}")


@dataclass(frozen=True)
class BernoulliProductFunction:
    """
    f(x) = prod_j (1 + gamma_j * phi_m(x_j)) with coefficient decay 2m.

    fhat(k) = prod over the support of gamma_j / |k_j|**(2m); the L2 mass
    is prod_j (1 + 2 gamma_j**2 zeta(4m)).
    """

    dim: int
    degree: int
    gammas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        if self.degree not in (1, 2):
            raise ValueError("degree must be 1 or 2")
        if len(self.gammas) != self.dim:
            raise ValueError("need one gamma per dimension")
        if any(g < 0 for g in self.gammas):
            raise ValueError("gammas must be >= 0")

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        out = np.ones(len(points), dtype=np.complex128)
        for j in range(self.dim):
            out *= 1.0 + self.gammas[j] * _phi(self.degree, points[:, j])
        return out

    def coefficient(self, k) -> float:
        c = 1.0
        for j, kj in enumerate(k):
            if kj != 0:
                c *= self.gammas[j] / abs(kj) ** (2 * self.degree)
        return c

    def coeffs_on(self, indices) -> TrigPolynomial:
        """Exact coefficients restricted to the given frequencies."""
        return TrigPolynomial({tuple(k): self.coefficient(k) for k in indices})

    def coeff_poly_box(self, box_radius: int) -> TrigPolynomial:
        """Exact coefficients on the full box max|k_j| <= box_radius."""
        import itertools

        rng = range(-box_radius, box_radius + 1)
        return TrigPolynomial(
            {
                k: self.coefficient(k)
                for k in itertools.product(rng, repeat=self.dim)
            }
        )

    def l2_mass_total(self) -> float:
        """sum over all k of |fhat(k)|^2, in closed form."""
        z = riemann_zeta(4 * self.degree)
        out = 1.0
        for g in self.gammas:
            out *= 1.0 + 2.0 * g * g * z
        return out

    def l2_mass_outside(self, cross: HyperbolicCross) -> float:
        """sum over k outside the cross of |fhat(k)|^2, exactly."""
        on = sum(self.coefficient(k) ** 2 for k in cross.indices)
        return max(self.l2_mass_total() - on, 0.0)

    def eval_truncation_bound(self, box_radius: int) -> float:
        """
        Pointwise bound on |f(x) - (series truncated to the box)(x)|:
        each per-axis factor is off by at most 2 gamma_j * tail_K(2m), and
        factors are bounded by 1 + 2 gamma_j zeta(2m).
        """
        z2m = riemann_zeta(2 * self.degree)
        tail = z2m - sum(
            k ** (-2.0 * self.degree) for k in range(1, box_radius + 1)
        )
        bounds = [1.0 + 2.0 * g * z2m for g in self.gammas]
        out = 0.0
        for j, g in enumerate(self.gammas):
            prod_others = 1.0
            for i, b in enumerate(bounds):
                if i != j:
                    prod_others *= b
            out += 2.0 * g * tail * prod_others
        return out

    def korobov_norm(self, params: SmoothnessParams, spec: WeightSpec) -> float:
        """Weighted norm via the product structure (finite iff alpha < 2m - 1/2)."""
        # sum_k rnorm(k)^2 |fhat(k)|^2 has product form only for product
        # weights; fall back to a direct statement for that case.
        if spec.kind != "product":
            raise ValueError("closed-form norm implemented for product weights only")
        out = 1.0
        for j in range(self.dim):
            gj = self.gammas[j]
            wj = spec.product_gammas[j]
            if gj == 0.0:
                continue
            if wj == 0.0:
                return math.inf
            s = 4 * self.degree - 2 * params.alpha
            if s <= 1:
                return math.inf
            out *= 1.0 + 2.0 * riemann_zeta(s) * gj * gj / (wj * wj)
        return math.sqrt(out)


def bernoulli_eval(fn: BernoulliProductFunction, x) -> float:
    """Closed-form value at a single point."""
    return float(fn(np.asarray(x, dtype=np.float64)[None, :])[0].real)


@dataclass(frozen=True)
class ConvergenceRow:
    """One sweep entry: cross radius, costs, and measured errors."""

    m_radius: float
    cardinality: int
    num_lattices: int
    total_points: int
    err_linf: float
    err_l2_rms: float
    seed: int
    covered: bool = True

    def csv_line(self) -> str:
        return (
            f"{self.m_radius!r},{self.cardinality},{self.num_lattices},"
            f"{self.total_points},{self.err_linf!r},{self.err_l2_rms!r},{self.seed}"
        )


CSV_HEADER = "M,cardinality,L,N,err_linf,err_l2_rms,seed"


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Convergence sweep configuration.

    The test function keeps coefficient decay 2 * degree; pick ``alpha_eff``
    strictly below 2 * degree - 1/2 so the function has finite weighted norm
    at that smoothness (default margin 0.1 via :func:`default_alpha_eff`).
    Row r builds its plan with seed ``seed + r``.
    """

    dim: int
    alpha_eff: float
    spec: WeightSpec
    m_grid: tuple[float, ...]
    degree: int = 1
    fn_gammas: tuple[float, ...] | None = None
    c: float = 122.0
    delta: float = 0.5
    seed: int = 0
    num_shifts: int = 16
    grid_per_dim: int = 64
    compare_single: bool = True

    def function(self) -> BernoulliProductFunction:
        gam = self.fn_gammas if self.fn_gammas is not None else (1.0,) * self.dim
        return BernoulliProductFunction(dim=self.dim, degree=self.degree, gammas=gam)


def default_alpha_eff(degree: int, margin: float = 0.1) -> float:
    """Largest safe smoothness for a degree-m product function, minus a margin."""
    return 2.0 * degree - 0.5 - margin


@dataclass
class ExperimentResult:
    rows: list[ConvergenceRow]
    single_rows: list[ConvergenceRow] = field(default_factory=list)
    slope_l2: float | None = None
    slope_linf: float | None = None
    single_slope_l2: float | None = None
    fit_skipped_reason: str | None = None

    def summary_dict(self) -> dict:
        return {
            "slope_l2": self.slope_l2,
            "slope_linf": self.slope_linf,
            "single_slope_l2": self.single_slope_l2,
            "fit_skipped_reason": self.fit_skipped_reason,
            "rows": [row.csv_line() for row in self.rows],
            "single_rows": [row.csv_line() for row in self.single_rows],
        }


def _fit_slope(rows: list[ConvergenceRow], which: str) -> float | None:
    usable = [
        r
        for r in rows
        if r.covered and getattr(r, which) > 1e-12 and r.total_points > 0
    ]
    if len(usable) < 2:
        return None
    # fit on the last ceil(half) of the grid to dodge preasymptotic bias
    keep = usable[-math.ceil(len(usable) / 2) :]
    if len(keep) < 2:
        keep = usable[-2:]
    xs = np.log([r.total_points for r in keep])
    ys = np.log([getattr(r, which) for r in keep])
    return float(np.polyfit(xs, ys, 1)[0])


def _measure(
    fn: BernoulliProductFunction,
    cross: HyperbolicCross,
    plan: MultiLatticePlan,
    cfg: ExperimentConfig,
    row_seed: int,
) -> ConvergenceRow:
    sampled = SampledFunction(
        evaluator=fn,
        dim=cfg.dim,
        known_coefficients=fn.coeffs_on(cross.indices),
    )
    approx = mult_coeffs(sampled, plan, cross)
    linf = linf_estimate_against(fn, approx, cfg.dim, cfg.grid_per_dim)
    rms = rms_l2_over_shifts(
        sampled,
        plan,
        cross,
        ShiftConfig(num_shifts=cfg.num_shifts, seed=row_seed),
        off_cross_mass=fn.l2_mass_outside(cross),
    )
    return ConvergenceRow(
        m_radius=cross.params.m_radius,
        cardinality=cross.cardinality,
        num_lattices=plan.num_lattices,
        total_points=plan.total_points,
        err_linf=float(linf),
        err_l2_rms=float(rms),
        seed=row_seed,
        covered=plan.covered,
    )


def convergence_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Sweep the cross radius, reconstruct the product test function, and fit
    log-log error slopes against the total point count.  Rows with
    uncovered plans are kept but excluded from fits.
    """
    if list(cfg.m_grid) != sorted(cfg.m_grid):
        raise ValueError("m_grid must be increasing")
    norm_s = 4 * cfg.degree - 2 * cfg.alpha_eff
    if norm_s <= 1:
        raise ValueError(
            f"alpha_eff = {cfg.alpha_eff} too large for decay {2 * cfg.degree}: "
            "test function falls outside the target space"
        )
    fn = cfg.function()
    rows: list[ConvergenceRow] = []
    single_rows: list[ConvergenceRow] = []
    for idx, m_radius in enumerate(cfg.m_grid):
        row_seed = cfg.seed + idx
        params = SmoothnessParams(alpha=cfg.alpha_eff, m_radius=float(m_radius), dim=cfg.dim)
        cross = enumerate_cross(params, cfg.spec)
        plan = build_plan(cross, PlanParams(c=cfg.c, delta=cfg.delta, seed=row_seed))
        rows.append(_measure(fn, cross, plan, cfg, row_seed))
        if cfg.compare_single:
            # Classical reconstruction sizing: a single lattice that must be
            # aliasing-free for the whole cross is taken at Theta(|A|^2)
            # points, the general-purpose scale at which random generating
            # vectors separate all residues of an arbitrary index set.
            floor = cross.cardinality * (cross.cardinality - 1) // 2 + 1
            single = full_coverage_single_lattice(
                cross, seed=row_seed, min_points=floor
            )
            single_rows.append(_measure(fn, cross, single, cfg, row_seed))
    result = ExperimentResult(rows=rows, single_rows=single_rows)
    if all(r.err_l2_rms <= 1e-12 and r.err_linf <= 1e-12 for r in rows):
        result.fit_skipped_reason = "all errors at numerical zero; nothing to fit"
        return result
    result.slope_l2 = _fit_slope(rows, "err_l2_rms")
    result.slope_linf = _fit_slope(rows, "err_linf")
    if single_rows:
        result.single_slope_l2 = _fit_slope(single_rows, "err_l2_rms")
    return result
