"""
Fourier reconstruction from lattice samples
===========================================

Discrete Fourier coefficients of a sampled function are formed on a
frequency set by equal-weight sums over rank-1 lattice points.  On one
lattice the computed coefficient picks up every dual translate:

    fhat_n(k) = fhat(k) + sum over nonzero dual ell of fhat(k + ell).

The multiple-lattice estimator averages, for each frequency, the per-lattice
coefficients of exactly those lattices for which the frequency is
aliasing-free; a covered plan therefore reproduces any polynomial supported
on the set exactly.  The shifted variant samples at {y + shift} instead,
which multiplies each aliasing term by e^{2 pi i ell . shift} and leaves
the true coefficient untouched, making the estimator unbiased on covered
frequencies under a uniform random shift.

Coefficient sums use the exact residue phases e^{-2 pi i (i r mod n)/n}
from a shared root-of-unity table and fixed-order numpy reductions, so
results are bit-reproducible regardless of BLAS threading.  Sums are direct
O(n |A|) by design; this module targets desk-scale problems.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .cross import FrequencyIndex, HyperbolicCross
from .lattice import Rank1Lattice, lattice_points, residues_over_cross
from .construction import MultiLatticePlan
from .rng import uniform_unit_vector
from .weights import SmoothnessParams, WeightSpec, rnorm

__all__ = [
    "TrigPolynomial",
    "SampledFunction",
    "ShiftConfig",
    "single_lattice_coeffs",
    "mult_coeffs",
    "mult_coeffs_shifted",
    "uncovered_indices",
    "evaluate",
    "evaluate_many",
    "error_report",
    "rms_l2_over_shifts",
]


class TrigPolynomial:
    """
    A finite trigonometric polynomial: a map frequency -> complex coefficient.

    Terms with coefficient exactly 0 are kept if inserted explicitly; the
    constructor does not prune.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[FrequencyIndex, complex] | None = None):
        self.terms: dict[FrequencyIndex, complex] = {}
        if terms:
            dims = set()
            for k, v in terms.items():
                kk = tuple(int(c) for c in k)
                dims.add(len(kk))
                v = complex(v)
                if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                    raise ValueError(f"coefficient at {kk} is not finite")
                self.terms[kk] = v
            if len(dims) > 1:
                raise ValueError(f"mixed frequency dimensions {sorted(dims)}")

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, k) -> complex:
        return self.terms.get(tuple(k), 0j)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0j) - v
        return TrigPolynomial(out)

    def support(self) -> list[FrequencyIndex]:
        return sorted(self.terms)

    def l2_norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.terms.values()))

    def korobov_norm(self, params: SmoothnessParams, spec: WeightSpec) -> float:
        """sqrt(sum_k rnorm(k)^2 |c_k|^2); inf when mass sits on a zero-weight support."""
        total = 0.0
        for k, v in self.terms.items():
            if v == 0:
                continue
            r = rnorm(k, params, spec)
            if r == math.inf:
                return math.inf
            total += (r * abs(v)) ** 2
        return math.sqrt(total)

    def to_csv(self, stream, dim: int | None = None, header_comment: str | None = None):
        """Rows ``k_1,...,k_d,re,im`` in lexicographic frequency order."""
        ks = self.support()
        d = dim if dim is not None else (len(ks[0]) if ks else 0)
        if header_comment:
            stream.write(f"# {header_comment}\n")
        cols = ",".join(f"k_{j}" for j in range(1, d + 1))
        stream.write(f"{cols},re,im\n")
        for k in ks:
            v = self.terms[k]
            stream.write(",".join(str(int(c)) for c in k) + f",{v.real!r},{v.imag!r}\n")


Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass
class SampledFunction:
    """
    A function on [0, 1)^d available through point evaluations.

    ``evaluator`` maps an (m, d) array of points to m complex values.
    ``known_coefficients`` carries exact Fourier data when available
    (required by the Parseval-based error paths); ``korobov_norm`` is an
    optional stored norm value.
    """

    evaluator: Evaluator
    dim: int
    known_coefficients: TrigPolynomial | None = None
    korobov_norm: float | None = None

    @classmethod
    def from_trig_polynomial(cls, poly: TrigPolynomial, dim: int) -> "SampledFunction":
        return cls(
            evaluator=lambda pts: evaluate_many(poly, pts),
            dim=dim,
            known_coefficients=poly,
        )


@dataclass(frozen=True)
class ShiftConfig:
    """Number of random shifts R >= 1 and the seed for their substreams."""

    num_shifts: int
    seed: int = 0

    def __post_init__(self):
        if self.num_shifts < 1:
            raise ValueError(f"need at least one shift, got {self.num_shifts}")

    def shifts(self, dim: int) -> np.ndarray:
        """(R, d) array; shift r comes from substream (seed, r)."""
        return np.stack(
            [uniform_unit_vector(self.seed, r, dim) for r in range(self.num_shifts)]
        )


def _root_table(n: int) -> np.ndarray:
    """e^{-2 pi i m / n} for m = 0..n-1."""
    return np.exp(-2j * np.pi * np.arange(n) / n)


def _coeff_from_values(
    values: np.ndarray, roots: np.ndarray, residue: int, n: int
) -> complex:
    # (1/n) sum_i values_i * e^{-2 pi i (i * residue mod n)/n}, fixed-order sum
    idx = (np.arange(n, dtype=np.int64) * int(residue)) % n
    return complex((values * roots[idx]).sum() / n)


def single_lattice_coeffs(
    f: SampledFunction, lat: Rank1Lattice, cross: HyperbolicCross
) -> TrigPolynomial:
    """
    Discrete coefficients (1/n) sum_i f(y_i) e^{-2 pi i k . y_i} for every
    frequency k of the cross.
    """
    values = np.asarray(f.evaluator(lattice_points(lat)), dtype=np.complex128)
    roots = _root_table(lat.n)
    residues = residues_over_cross(cross.as_array(), lat)
    return TrigPolynomial(
        {
            k: _coeff_from_values(values, roots, r, lat.n)
            for k, r in zip(cross.indices, residues)
        }
    )


def _mult_coeffs_impl(
    f: SampledFunction,
    plan: MultiLatticePlan,
    cross: HyperbolicCross,
    shift: np.ndarray | None,
) -> TrigPolynomial:
    if len(plan.xi) != cross.cardinality:
        raise ValueError("plan was not built on this cross")
    card = cross.cardinality
    acc = np.zeros(card, dtype=np.complex128)
    arr = cross.as_array()
    for lat, table in zip(plan.lattices, plan.tables):
        pts = lattice_points(lat)
        if shift is not None:
            pts = np.mod(pts + shift[None, :], 1.0)
        values = np.asarray(f.evaluator(pts), dtype=np.complex128)
        roots = _root_table(lat.n)
        residues = residues_over_cross(arr, lat)
        active = np.nonzero(table.indicators)[0]
        if shift is None:
            for i in active:
                acc[i] += _coeff_from_values(values, roots, residues[i], lat.n)
        else:
            # e^{-2 pi i k.(y + shift)} = e^{-2 pi i k.shift} e^{-2 pi i k.y}
            phases = np.exp(-2j * np.pi * (arr[active].astype(np.float64) @ shift))
            for pos, i in enumerate(active):
                acc[i] += phases[pos] * _coeff_from_values(
                    values, roots, residues[i], lat.n
                )
    out: dict[FrequencyIndex, complex] = {}
    for i, k in enumerate(cross.indices):
        xi = int(plan.xi[i])
        out[k] = acc[i] / xi if xi > 0 else 0j
    return TrigPolynomial(out)


def mult_coeffs(
    f: SampledFunction, plan: MultiLatticePlan, cross: HyperbolicCross
) -> TrigPolynomial:
    """
    Multiple-lattice coefficients: for each frequency, the average of the
    per-lattice discrete coefficients over its aliasing-free lattices.
    Frequencies with no aliasing-free lattice get coefficient 0; list them
    with :func:`uncovered_indices`.
    """
    return _mult_coeffs_impl(f, plan, cross, None)


def mult_coeffs_shifted(
    f: SampledFunction,
    plan: MultiLatticePlan,
    cross: HyperbolicCross,
    shift: Sequence[float],
) -> TrigPolynomial:
    """Same estimator on the shifted points {y + shift} (componentwise mod 1)."""
    shift = np.asarray(shift, dtype=np.float64)
    if shift.shape != (cross.dim,):
        raise ValueError(f"shift must have shape ({cross.dim},), got {shift.shape}")
    return _mult_coeffs_impl(f, plan, cross, shift)


def uncovered_indices(plan: MultiLatticePlan, cross: HyperbolicCross) -> list[FrequencyIndex]:
    """Frequencies of the cross with no aliasing-free lattice in the plan."""
    return [cross.indices[i] for i in plan.uncovered_ordinals()]


def evaluate(p: TrigPolynomial, x: Sequence[float]) -> complex:
    """
    sum_k c_k e^{2 pi i k . x} with Kahan-compensated accumulation, in the
    fixed lexicographic term order.
    """
    x = np.asarray(x, dtype=np.float64)
    total = 0j
    comp = 0j
    for k in p.support():
        term = p.terms[k] * np.exp(2j * np.pi * float(np.dot(k, x)))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return complex(total)


def evaluate_many(p: TrigPolynomial, points: np.ndarray, chunk: int = 1024) -> np.ndarray:
    """
    Vectorized evaluation at an (m, d) array of points.

    Chunked elementwise phase accumulation with numpy pairwise sums only
    (no BLAS reductions), so outputs do not depend on thread counts.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    ks = p.support()
    if not ks:
        return np.zeros(len(points), dtype=np.complex128)
    karr = np.array(ks, dtype=np.float64)
    coeffs = np.array([p.terms[k] for k in ks], dtype=np.complex128)
    out = np.empty(len(points), dtype=np.complex128)
    for lo in range(0, len(points), chunk):
        block = points[lo : lo + chunk]
        phase = np.zeros((len(block), len(ks)), dtype=np.float64)
        for j in range(points.shape[1]):
            phase += block[:, j : j + 1] * karr[None, :, j]
        out[lo : lo + chunk] = (np.exp(2j * np.pi * phase) * coeffs[None, :]).sum(axis=1)
    return out


def _golden_polish(
    fn: Callable[[np.ndarray], float], x0: np.ndarray, half_width: float, sweeps: int = 3
) -> float:
    """Cyclic per-coordinate golden-section maximization around x0."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x = x0.copy()
    best = fn(x)
    for _ in range(sweeps):
        for j in range(len(x)):
            lo, hi = x[j] - half_width, x[j] + half_width
            a, b = lo, hi
            c = b - inv_phi * (b - a)
            d = a + inv_phi * (b - a)
            xc, xd = x.copy(), x.copy()
            xc[j], xd[j] = c, d
            fc, fd = fn(xc), fn(xd)
            for _ in range(40):
                if fc >= fd:
                    b, d = d, c
                    c = b - inv_phi * (b - a)
                    fd = fc
                    xc[j] = c
                    fc = fn(xc)
                else:
                    a, c = c, d
                    d = a + inv_phi * (b - a)
                    fc = fd
                    xd[j] = d
                    fd = fn(xd)
            mid = 0.5 * (a + b)
            xm = x.copy()
            xm[j] = mid
            fm = fn(xm)
            if fm > best:
                best = fm
                x = xm
    return best


def linf_estimate_against(
    truth_eval: Evaluator,
    approx_poly: TrigPolynomial,
    dim: int,
    grid_per_dim: int,
    grid_cap: int = 10**7,
) -> float:
    """
    Lower estimate of sup |truth - approx| over [0, 1)^d: maximum over the
    uniform grid with ``grid_per_dim`` points per axis, then golden-section
    polish around the best grid cell.
    """
    if grid_per_dim**dim > grid_cap:
        raise ValueError(f"grid of {grid_per_dim}**{dim} points exceeds cap {grid_cap}")
    axes = [np.arange(grid_per_dim) / grid_per_dim] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    diff = np.abs(
        np.asarray(truth_eval(pts), dtype=np.complex128) - evaluate_many(approx_poly, pts)
    )
    best_idx = int(np.argmax(diff))
    x0 = pts[best_idx]

    def fn(x: np.ndarray) -> float:
        xm = np.mod(x, 1.0)
        t = np.asarray(truth_eval(xm[None, :]), dtype=np.complex128)[0]
        return abs(t - evaluate(approx_poly, xm))

    return _golden_polish(fn, x0, 1.0 / grid_per_dim)


def error_report(
    truth: TrigPolynomial,
    approx: TrigPolynomial,
    cross: HyperbolicCross,
    grid_per_dim: int,
) -> dict:
    """
    Exact L2 error by Parseval over the union of supports, and a grid-plus-
    polish lower estimate of the sup-norm error.
    """
    diff = truth - approx
    l2 = diff.l2_norm()
    truth_fn = SampledFunction.from_trig_polynomial(truth, cross.dim)
    linf = linf_estimate_against(truth_fn.evaluator, approx, cross.dim, grid_per_dim)
    return {"l2_exact": l2, "linf_estimate": linf}


def rms_l2_over_shifts(
    f: SampledFunction,
    plan: MultiLatticePlan,
    cross: HyperbolicCross,
    cfg: ShiftConfig,
    off_cross_mass: float | None = None,
) -> float:
    """
    sqrt( (1/R) sum_r ||f - A_shift_r(f)||_{L2}^2 ), every inner norm exact
    by Parseval against ``f.known_coefficients``:

        ||f - A(f)||^2 = sum of |fhat(k)|^2 off the cross
                       + sum over the cross of |fhat(k) - computed(k)|^2.

    ``off_cross_mass`` overrides the first term for functions whose
    coefficient table only covers the cross but whose total L2 mass is
    known in closed form (e.g. product-form test functions).
    """
    if f.known_coefficients is None:
        raise ValueError("rms_l2_over_shifts needs known_coefficients on f")
    truth = f.known_coefficients
    if off_cross_mass is None:
        off_cross_mass = sum(
            abs(v) ** 2 for k, v in truth.terms.items() if k not in cross
        )
    total = 0.0
    for shift in cfg.shifts(cross.dim):
        approx = _mult_coeffs_impl(f, plan, cross, shift)
        on = sum(abs(truth[k] - approx.terms[k]) ** 2 for k in cross.indices)
        total += off_cross_mass + on
    return math.sqrt(total / cfg.num_shifts)


def error_report_json(report: dict, uncovered_count: int) -> str:
    out = dict(report)
    out["uncovered_count"] = uncovered_count
    return json.dumps(out, sort_keys=True)
