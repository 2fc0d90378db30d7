"""
Weight families, frequency norms, and zeta-sum diagnostics
==========================================================

A weight family assigns a non-negative importance ``gamma_u`` to every
finite subset ``u`` of coordinate axes.  Four families are supported:

- ``product``:  gamma_u = prod_{j in u} gamma_j
- ``pod``:      gamma_u = Gamma_{|u|} * prod_{j in u} gamma_j
                (product and order-dependent)
- ``spod``:     gamma_u = sum over m in {1..sigma}^{|u|} of
                Gamma_{|m|_1} * prod_{j in u} gamma_{j, m_j}
                (smoothness-driven product and order-dependent)
- ``explicit``: a finite table of subset -> value entries; absent
                subsets have weight 0.

Every family fixes ``gamma_emptyset = 1``.

The weighted norm of a frequency vector ``k`` with support ``u`` is

    rnorm(k) = (1 / gamma_u) * prod_{j in u} |k_j|**alpha,

with ``rnorm(0) = 1`` and an ``inf`` sentinel when ``gamma_u = 0``
(frequencies on zero-weight supports carry no mass and are excluded
from index sets without special-casing).

The module also provides the Riemann zeta function, the subset sums

    sum_{u subset of [1:d]} gamma_u**lam * (2*zeta(alpha*lam))**|u|

that appear in all size/error bounds, and summability diagnostics for
strong polynomial tractability.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

__all__ = [
    "WeightSpec",
    "SmoothnessParams",
    "TheoryParams",
    "TractabilityReport",
    "weight_of",
    "rnorm",
    "riemann_zeta",
    "weighted_zeta_sum",
    "tractability_check",
]

_KINDS = ("product", "pod", "spod", "explicit")


def _as_subset(u: Iterable[int]) -> tuple[int, ...]:
    """Normalize a coordinate subset to a sorted tuple of distinct 1-based axes."""
    t = tuple(sorted(set(int(j) for j in u)))
    if t and t[0] < 1:
        raise ValueError(f"coordinate axes are 1-based, got {t}")
    return t


@dataclass(frozen=True)
class WeightSpec:
    """
    A weight family gamma_u over subsets of coordinate axes.

    Parameters
    ----------
    kind : str
        One of ``"product"``, ``"pod"``, ``"spod"``, ``"explicit"``.
    product_gammas : sequence of float, optional
        Per-axis weights gamma_j (product, pod, and the per-axis part of
        spod validation); length bounds the usable dimension.
    order_gammas : sequence of float, optional
        Order weights Gamma_0, Gamma_1, ... (pod/spod).  For pod the
        sequence must cover orders 0..d; for spod it must cover the
        largest reachable total order sigma*d.
    spod_table : sequence of sequences of float, optional
        Row j-1 holds gamma_{j,1..sigma} for axis j (spod only).
    spod_sigma : int, optional
        Number of smoothness levels sigma >= 1 (spod only).
    explicit_map : mapping from subset to float, optional
        Finite subset -> weight table (explicit only).  Subsets absent
        from the table have weight 0; the empty set may not be remapped
        away from 1.
    superset_bound_hook : callable, optional
        For spod only: a caller-declared function ``u -> float`` with
        ``hook(u) >= sup over w containing u of gamma_w``, used to prune
        support enumeration.  Product/pod/explicit supply bounds natively.
    """

    kind: str
    product_gammas: tuple[float, ...] = ()
    order_gammas: tuple[float, ...] = ()
    spod_table: tuple[tuple[float, ...], ...] = ()
    spod_sigma: int = 0
    explicit_map: Mapping[tuple[int, ...], float] = field(default_factory=dict)
    superset_bound_hook: Callable[[tuple[int, ...]], float] | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}; expected one of {_KINDS}")
        object.__setattr__(self, "product_gammas", tuple(float(g) for g in self.product_gammas))
        object.__setattr__(self, "order_gammas", tuple(float(g) for g in self.order_gammas))
        object.__setattr__(
            self, "spod_table", tuple(tuple(float(g) for g in row) for row in self.spod_table)
        )
        for g in self.product_gammas + self.order_gammas:
            if not math.isfinite(g) or g < 0:
                raise ValueError(f"weight values must be finite and >= 0, got {g}")
        for row in self.spod_table:
            if len(row) != self.spod_sigma:
                raise ValueError("each spod_table row must have sigma entries")
            for g in row:
                if not math.isfinite(g) or g < 0:
                    raise ValueError(f"weight values must be finite and >= 0, got {g}")
        if self.kind == "spod" and self.spod_sigma < 1:
            raise ValueError("spod requires sigma >= 1")
        norm_map = {}
        for u, v in dict(self.explicit_map).items():
            key = _as_subset(u)
            v = float(v)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"weight values must be finite and >= 0, got {v}")
            if key == () and v != 1.0:
                raise ValueError("the empty set always has weight 1")
            norm_map[key] = v
        object.__setattr__(self, "explicit_map", norm_map)

    # -- dimension bookkeeping -------------------------------------------

    def max_axis(self) -> int:
        """Largest axis index this spec can evaluate."""
        if self.kind in ("product", "pod"):
            return len(self.product_gammas)
        if self.kind == "spod":
            return len(self.spod_table)
        return max((max(u) for u in self.explicit_map if u), default=0)

    def check_dimension(self, d: int):
        if self.kind in ("product", "pod") and len(self.product_gammas) < d:
            raise IndexError(
                f"{self.kind} spec has {len(self.product_gammas)} per-axis weights, need {d}"
            )
        if self.kind == "pod" and len(self.order_gammas) < d + 1:
            raise IndexError(f"pod spec needs order weights Gamma_0..Gamma_{d}")
        if self.kind == "spod":
            if len(self.spod_table) < d:
                raise IndexError(f"spod table has {len(self.spod_table)} rows, need {d}")
            if len(self.order_gammas) < self.spod_sigma * d + 1:
                raise IndexError(
                    f"spod spec needs order weights Gamma_0..Gamma_{self.spod_sigma * d}"
                )

    # -- evaluation -------------------------------------------------------

    def weight_of(self, u: Iterable[int]) -> float:
        """Evaluate gamma_u for a subset of axes; gamma_emptyset = 1."""
        uu = _as_subset(u)
        if not uu:
            return 1.0
        if self.kind == "product":
            self._check_axes(uu)
            return math.prod(self.product_gammas[j - 1] for j in uu)
        if self.kind == "pod":
            self._check_axes(uu)
            if len(uu) >= len(self.order_gammas):
                raise IndexError(f"order weight Gamma_{len(uu)} not provided")
            return self.order_gammas[len(uu)] * math.prod(
                self.product_gammas[j - 1] for j in uu
            )
        if self.kind == "spod":
            return self._spod_weight(uu)
        return self.explicit_map.get(uu, 0.0)

    def _check_axes(self, uu: tuple[int, ...]):
        if uu and uu[-1] > self.max_axis():
            raise IndexError(f"axis {uu[-1]} out of range for spec of dimension {self.max_axis()}")

    def _spod_weight(self, uu: tuple[int, ...]) -> float:
        # Convolution over smoothness levels: gamma_u equals
        # sum_W Gamma_W * [x^W] prod_{j in u} (sum_m gamma_{j,m} x^m),
        # which avoids the sigma^|u| term-by-term sum.
        if uu[-1] > len(self.spod_table):
            raise IndexError(f"axis {uu[-1]} out of range for spod table")
        poly = [1.0]
        for j in uu:
            row = self.spod_table[j - 1]
            new = [0.0] * (len(poly) + self.spod_sigma)
            for a, ca in enumerate(poly):
                if ca == 0.0:
                    continue
                for m in range(1, self.spod_sigma + 1):
                    new[a + m] += ca * row[m - 1]
            poly = new
        top = len(poly) - 1
        if top >= len(self.order_gammas):
            raise IndexError(f"order weight Gamma_{top} not provided")
        return sum(self.order_gammas[w] * cw for w, cw in enumerate(poly) if cw != 0.0)

    # -- support pruning ---------------------------------------------------

    def superset_bound(self, u: Iterable[int], d: int) -> float:
        """
        An upper bound on sup over w with u subset of w subset of [1:d] of gamma_w.

        Used by the index-set enumerator to prune infeasible supports.
        """
        uu = _as_subset(u)
        if self.kind == "product":
            b = self.weight_of(uu)
            for j in range(1, d + 1):
                if j not in uu and self.product_gammas[j - 1] > 1.0:
                    b *= self.product_gammas[j - 1]
            return b
        if self.kind == "pod":
            # log-domain: Gamma_ell times the |u| fixed factors times the
            # (ell - |u|) largest remaining per-axis factors.
            fixed = sum(_log_or_neginf(self.product_gammas[j - 1]) for j in uu)
            rest = sorted(
                (self.product_gammas[j - 1] for j in range(1, d + 1) if j not in uu),
                reverse=True,
            )
            best = -math.inf
            extra = 0.0
            for ell in range(len(uu), d + 1):
                if ell > len(uu):
                    extra += _log_or_neginf(rest[ell - len(uu) - 1])
                if ell == 0:
                    best = 0.0  # gamma_emptyset = 1
                elif ell < len(self.order_gammas):
                    g = _log_or_neginf(self.order_gammas[ell])
                    best = max(best, g + fixed + extra)
            return math.exp(best) if best > -math.inf else 0.0
        if self.kind == "explicit":
            stored = max(
                (v for w, v in self.explicit_map.items() if set(uu) <= set(w)), default=0.0
            )
            return max(stored, 1.0) if not uu else stored
        if self.superset_bound_hook is None:
            raise ValueError(
                "spod enumeration needs a caller-declared superset_bound_hook "
                "(no universal pruning rule exists for spod weights)"
            )
        return float(self.superset_bound_hook(uu))

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind in ("product", "pod"):
            out["gammas"] = list(self.product_gammas)
        if self.kind == "pod":
            out["orders"] = list(self.order_gammas)
        if self.kind == "spod":
            out["orders"] = list(self.order_gammas)
            out["spod"] = {
                "sigma": self.spod_sigma,
                "table": [list(row) for row in self.spod_table],
            }
        if self.kind == "explicit":
            out["explicit"] = [
                {"u": list(u), "value": v} for u, v in sorted(self.explicit_map.items())
            ]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, obj: Mapping) -> "WeightSpec":
        kind = obj.get("kind")
        allowed = {
            "product": {"kind", "gammas"},
            "pod": {"kind", "gammas", "orders"},
            "spod": {"kind", "orders", "spod"},
            "explicit": {"kind", "explicit"},
        }
        if kind not in allowed:
            raise ValueError(f"unknown weight kind {kind!r}")
        unknown = set(obj) - allowed[kind]
        if unknown:
            raise ValueError(f"unknown weight-spec keys for kind {kind!r}: {sorted(unknown)}")
        if kind == "product":
            return cls(kind="product", product_gammas=tuple(obj["gammas"]))
        if kind == "pod":
            return cls(
                kind="pod",
                product_gammas=tuple(obj["gammas"]),
                order_gammas=tuple(obj["orders"]),
            )
        if kind == "spod":
            spod = obj["spod"]
            return cls(
                kind="spod",
                order_gammas=tuple(obj["orders"]),
                spod_table=tuple(tuple(row) for row in spod["table"]),
                spod_sigma=int(spod["sigma"]),
            )
        return cls(
            kind="explicit",
            explicit_map={tuple(e["u"]): float(e["value"]) for e in obj["explicit"]},
        )

    @classmethod
    def from_json(cls, text: str) -> "WeightSpec":
        return cls.from_json_dict(json.loads(text))

    @classmethod
    def product(cls, gammas: Sequence[float]) -> "WeightSpec":
        return cls(kind="product", product_gammas=tuple(gammas))

    @classmethod
    def pod(cls, orders: Sequence[float], gammas: Sequence[float]) -> "WeightSpec":
        return cls(kind="pod", order_gammas=tuple(orders), product_gammas=tuple(gammas))


def _log_or_neginf(x: float) -> float:
    return math.log(x) if x > 0.0 else -math.inf


@dataclass(frozen=True)
class SmoothnessParams:
    """Smoothness exponent alpha > 1/2, cross radius M > 0, dimension d >= 1."""

    alpha: float
    m_radius: float
    dim: int

    def __post_init__(self):
        if not self.alpha > 0.5:
            raise ValueError(f"alpha must be > 1/2, got {self.alpha}")
        if not self.m_radius > 0:
            raise ValueError(f"radius M must be > 0, got {self.m_radius}")
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")


@dataclass(frozen=True)
class TheoryParams:
    """
    Bound parameters lambda and beta.

    The size bound needs lambda > 1/alpha; the tail and error bounds
    additionally need lambda < 2.  Each operation checks the constraint
    it actually uses.
    """

    lam: float
    beta: float = 0.5

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"lambda must be positive and finite, got {self.lam}")
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")

    def check_size(self, alpha: float):
        if not self.lam > 1.0 / alpha:
            raise ValueError(f"lambda must exceed 1/alpha = {1.0 / alpha}, got {self.lam}")

    def check_tail(self, alpha: float):
        self.check_size(alpha)
        if not self.lam < 2.0:
            raise ValueError(f"tail bound needs lambda < 2, got {self.lam}")


def weight_of(spec: WeightSpec, u: Iterable[int]) -> float:
    """Evaluate gamma_u; module-level alias for :meth:`WeightSpec.weight_of`."""
    return spec.weight_of(u)


def rnorm(k: Sequence[int], params: SmoothnessParams, spec: WeightSpec) -> float:
    """
    Weighted norm of a frequency vector.

    Returns ``prod_{j in supp(k)} |k_j|**alpha / gamma_supp(k)``, with 1 for
    ``k = 0`` and ``math.inf`` when the support weight vanishes.
    """
    if len(k) != params.dim:
        raise ValueError(f"frequency has {len(k)} components, expected {params.dim}")
    u = tuple(j + 1 for j, kj in enumerate(k) if kj != 0)
    if not u:
        return 1.0
    gu = spec.weight_of(u)
    if gu == 0.0:
        return math.inf
    prod = 1.0
    for j in u:
        prod *= abs(k[j - 1]) ** params.alpha
        if prod == math.inf:
            return math.inf
    return prod / gu


# Euler-Maclaurin coefficients B_{2i} / (2i)! for i = 1..6.
_EM_COEFFS = (
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
)


@lru_cache(maxsize=None)
def riemann_zeta(s: float) -> float:
    """
    Riemann zeta at real s > 1, to absolute accuracy 1e-12.

    Direct summation of the first terms plus the Euler-Maclaurin tail
    correction; values are cached per s.
    """
    s = float(s)
    if not s > 1.0:
        raise ValueError(f"zeta requires s > 1, got {s}")
    n = 64
    total = sum(k ** (-s) for k in range(1, n))
    total += 0.5 * n ** (-s)
    total += n ** (1.0 - s) / (s - 1.0)
    # i-th correction: B_{2i}/(2i)! * s(s+1)...(s+2i-2) * n^{-(s+2i-1)}
    rising = 1.0
    for i, coeff in enumerate(_EM_COEFFS):
        if i == 0:
            rising = s
        else:
            rising *= (s + 2 * i - 1) * (s + 2 * i)
        total += coeff * rising * n ** (-(s + 2 * i + 1))
    return total


def two_zeta(alpha: float, lam: float) -> float:
    """The factor 2*zeta(alpha*lam); requires alpha*lam > 1."""
    al = alpha * lam
    if not al > 1.0:
        raise ValueError(f"alpha*lambda must exceed 1, got {al}")
    return 2.0 * riemann_zeta(al)


def weighted_zeta_sum(
    spec: WeightSpec,
    params: SmoothnessParams,
    theory: TheoryParams,
    spod_supports: Sequence[Iterable[int]] | None = None,
) -> float:
    """
    sum over u subset of [1:d] of gamma_u**lam * (2*zeta(alpha*lam))**|u|.

    Product weights use the closed form prod_j (1 + 2*zeta(alpha*lam)*gamma_j**lam);
    pod weights use elementary-symmetric-polynomial recursion; explicit weights
    sum their stored subsets.  For spod the full 2^d sum is exponential, so the
    caller must pass ``spod_supports``, the list of subsets to include (the
    empty set is always counted once).
    """
    d, lam = params.dim, theory.lam
    tz = two_zeta(params.alpha, lam)
    spec.check_dimension(d)
    if spec.kind == "product":
        out = 1.0
        for j in range(d):
            out *= 1.0 + tz * spec.product_gammas[j] ** lam
        return out
    if spec.kind == "pod":
        # e[r] accumulates the elementary symmetric polynomial of degree r
        # in x_j = 2*zeta(alpha*lam) * gamma_j**lam.
        e = [0.0] * (d + 1)
        e[0] = 1.0
        for j in range(d):
            x = tz * spec.product_gammas[j] ** lam
            for r in range(min(j + 1, d), 0, -1):
                e[r] += e[r - 1] * x
        # r = 0 contributes gamma_emptyset**lam = 1 (the convention overrides Gamma_0)
        return 1.0 + sum(spec.order_gammas[r] ** lam * e[r] for r in range(1, d + 1))
    if spec.kind == "explicit":
        out = 1.0  # empty set
        for u, v in spec.explicit_map.items():
            if u and u[-1] <= d:
                out += v**lam * tz ** len(u)
        return out
    if spod_supports is None:
        raise ValueError("spod weighted_zeta_sum needs an explicit spod_supports list")
    out = 1.0
    seen = {()}
    for u in spod_supports:
        uu = _as_subset(u)
        if uu in seen:
            continue
        seen.add(uu)
        if uu and uu[-1] <= d:
            out += spec.weight_of(uu) ** lam * tz ** len(uu)
    return out


@dataclass
class TractabilityReport:
    """Outcome of a weight-summability diagnostic."""

    kind: str
    condition_holds: bool
    details: dict

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "condition_holds": self.condition_holds,
            "details": self.details,
        }


def tractability_check(
    spec: WeightSpec,
    alpha: float,
    lam: float,
    pod_c: float = 1.0,
    dim: int | None = None,
) -> TractabilityReport:
    """
    Summability diagnostics for strong polynomial tractability.

    Product weights: reports the partial sum of gamma_j**lam and flags
    non-decaying terms (a finiteness proxy for the infinite sum).
    Pod weights: tests 2*zeta(alpha*lam) * sum_j gamma_j**lam < 1 and the
    factorial growth cap Gamma_ell <= pod_c * (ell!)**(1/lam) across the
    stored orders (log-domain, so large ell do not overflow), and reports
    the full subset sum as a diagnostic.

    Requires lam in (1/alpha, 2).
    """
    if not (1.0 / alpha < lam < 2.0):
        raise ValueError(f"lambda must lie in (1/alpha, 2) = ({1.0 / alpha}, 2), got {lam}")
    d = dim if dim is not None else spec.max_axis()
    if d < 1:
        raise ValueError("spec carries no per-axis weights to test")
    tz = two_zeta(alpha, lam)
    if spec.kind == "product":
        terms = [spec.product_gammas[j] ** lam for j in range(d)]
        partial = sum(terms)
        decaying = d == 1 or terms[-1] < terms[0]
        if all(t == 0.0 for t in terms):
            decaying = True
        return TractabilityReport(
            kind="product",
            condition_holds=decaying,
            details={
                "lambda": lam,
                "partial_sum": partial,
                "first_term": terms[0],
                "last_term": terms[-1],
                "non_decaying": not decaying,
            },
        )
    if spec.kind == "pod":
        gsum = tz * sum(spec.product_gammas[j] ** lam for j in range(d))
        gsum_ok = gsum < 1.0
        log_c = math.log(pod_c) if pod_c > 0 else -math.inf
        growth_ok = True
        worst = None
        for ell, g in enumerate(spec.order_gammas):
            if ell == 0 or g == 0.0:
                continue
            margin = log_c + math.lgamma(ell + 1) / lam - math.log(g)
            if margin < 0:
                growth_ok = False
                if worst is None or margin < worst[1]:
                    worst = (ell, margin)
        params = SmoothnessParams(alpha=alpha, m_radius=1.0, dim=d)
        diag = weighted_zeta_sum(spec, params, TheoryParams(lam=lam))
        return TractabilityReport(
            kind="pod",
            condition_holds=gsum_ok and growth_ok,
            details={
                "lambda": lam,
                "zeta_weighted_sum": gsum,
                "zeta_weighted_sum_below_one": gsum_ok,
                "factorial_growth_ok": growth_ok,
                "worst_order": None if worst is None else worst[0],
                "pod_c": pod_c,
                "subset_sum_diagnostic": diag,
            },
        )
    raise ValueError(f"tractability_check supports product and pod weights, not {spec.kind!r}")
