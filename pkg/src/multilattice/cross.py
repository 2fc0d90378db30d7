"""
Weighted hyperbolic cross enumeration
=====================================

The index set at radius M is

    A = { k in Z^d : rnorm(k) <= M },

where rnorm is the weighted frequency norm from :mod:`multilattice.weights`.
Enumeration proceeds support by support: a support u can contain a feasible
nonzero frequency only when gamma_u * M >= 1 (each nonzero component
contributes a factor |k_j|**alpha >= 1), and supports are pruned through
the family-specific superset bound.  Within a support the magnitudes are
generated depth-first with a multiplicative budget, then expanded over all
sign patterns.

Boundary comparisons carry a relative guard of 1e-12 resolved toward
inclusion, so a frequency with rnorm(k) = M exactly belongs to the set.

The module also evaluates the closed-form span, the size bound

    |A| <= M**lam * sum_u gamma_u**lam (2 zeta(alpha lam))**|u|,

and the tail bound

    sum_{k not in A} rnorm(k)**-2
        <= M**-(2-lam) * 8(3-lam)/(2-lam) * (same weighted sum),

both usable as numeric oracles against brute-force enumeration.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .weights import (
    SmoothnessParams,
    TheoryParams,
    WeightSpec,
    rnorm,
    weighted_zeta_sum,
)

__all__ = [
    "FrequencyIndex",
    "HyperbolicCross",
    "CrossSizeError",
    "enumerate_cross",
    "feasible_supports",
    "span_closed_form",
    "cardinality_bound",
    "tail_bound",
]

# Relative slack for all boundary comparisons, resolved toward inclusion.
_GUARD = 1e-12

FrequencyIndex = tuple[int, ...]


class CrossSizeError(RuntimeError):
    """Raised when enumeration would exceed the configured cardinality cap."""


@dataclass(frozen=True)
class HyperbolicCross:
    """
    An enumerated weighted hyperbolic cross.

    Attributes
    ----------
    params : SmoothnessParams
    spec : WeightSpec
    indices : tuple of frequency tuples, sorted lexicographically.
    span : int
        max_j (max k_j - min k_j) over the stored indices.
    """

    params: SmoothnessParams
    spec: WeightSpec
    indices: tuple[FrequencyIndex, ...]
    span: int
    _ordinal: dict = field(repr=False, hash=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if not self._ordinal:
            object.__setattr__(
                self, "_ordinal", {k: i for i, k in enumerate(self.indices)}
            )

    @property
    def cardinality(self) -> int:
        return len(self.indices)

    @property
    def dim(self) -> int:
        return self.params.dim

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, k) -> bool:
        return tuple(k) in self._ordinal

    def ordinal_of(self, k) -> int:
        """Position of a frequency in the lexicographic order."""
        return self._ordinal[tuple(k)]

    def as_array(self) -> np.ndarray:
        """Indices as an (|A|, d) int64 array (lexicographic row order)."""
        return np.array(self.indices, dtype=np.int64).reshape(len(self.indices), self.dim)

    def rnorms(self) -> list[float]:
        return [rnorm(k, self.params, self.spec) for k in self.indices]

    # -- export ------------------------------------------------------------

    def to_csv(self, stream: TextIO, header_comment: str | None = None):
        """Write rows ``k_1,...,k_d,rnorm`` (lexicographic order)."""
        if header_comment:
            stream.write(f"# {header_comment}\n")
        cols = ",".join(f"k_{j}" for j in range(1, self.dim + 1))
        stream.write(f"{cols},rnorm\n")
        for k, r in zip(self.indices, self.rnorms()):
            stream.write(",".join(str(int(c)) for c in k) + f",{r!r}\n")

    def metadata(self) -> dict:
        return {
            "d": self.dim,
            "alpha": self.params.alpha,
            "M": self.params.m_radius,
            "cardinality": self.cardinality,
            "span": self.span,
            "weight_spec": self.spec.to_json_dict(),
        }

    def metadata_json(self) -> str:
        return json.dumps(self.metadata(), sort_keys=True)


def feasible_supports(params: SmoothnessParams, spec: WeightSpec) -> list[tuple[int, ...]]:
    """
    All supports u with gamma_u * M >= 1 (the only supports that can host
    a frequency of the cross), discovered by superset-bound pruned DFS.
    Explicit weights iterate their stored subsets directly.
    """
    d, M = params.dim, params.m_radius
    spec.check_dimension(d)
    out: list[tuple[int, ...]] = []
    if spec.kind == "explicit":
        for u in spec.explicit_map:
            if u and u[-1] <= d and spec.explicit_map[u] * M >= 1.0 - _GUARD:
                out.append(u)
        if M >= 1.0 - _GUARD:
            out.append(())
        return sorted(out, key=lambda u: (len(u), u))

    def visit(u: tuple[int, ...]):
        if spec.superset_bound(u, d) * M < 1.0 - _GUARD:
            return
        gu = spec.weight_of(u) if u else 1.0
        if gu * M >= 1.0 - _GUARD:
            out.append(u)
        start = u[-1] + 1 if u else 1
        for j in range(start, d + 1):
            visit(u + (j,))

    visit(())
    if not (params.m_radius >= 1.0 - _GUARD):
        out = [u for u in out if u != ()]
    return sorted(out, key=lambda u: (len(u), u))


def enumerate_cross(
    params: SmoothnessParams,
    spec: WeightSpec,
    cardinality_cap: int = 10**8,
) -> HyperbolicCross:
    """
    Enumerate the weighted hyperbolic cross exactly.

    Raises
    ------
    CrossSizeError
        If the enumeration exceeds ``cardinality_cap`` entries.
    """
    d, M, alpha = params.dim, params.m_radius, params.alpha
    indices: list[FrequencyIndex] = []
    count = 0
    for u in feasible_supports(params, spec):
        if not u:
            if M >= 1.0 - _GUARD:
                indices.append((0,) * d)
                count += 1
            continue
        gu = spec.weight_of(u)
        budget = (gu * M) ** (1.0 / alpha)
        mags: list[list[int]] = []
        _enumerate_magnitudes(budget, len(u), [], mags)
        count += sum(2 ** len(u) for _ in mags)
        if count > cardinality_cap:
            raise CrossSizeError(
                f"cross enumeration exceeded cap of {cardinality_cap} indices "
                f"(d={d}, M={M}, support {u})"
            )
        for mag in mags:
            for signs in itertools.product((1, -1), repeat=len(u)):
                k = [0] * d
                for pos, j in enumerate(u):
                    k[j - 1] = signs[pos] * mag[pos]
                indices.append(tuple(k))
    indices.sort()
    span = 0
    if indices:
        arr = np.array(indices, dtype=np.int64)
        span = int((arr.max(axis=0) - arr.min(axis=0)).max())
    return HyperbolicCross(params=params, spec=spec, indices=tuple(indices), span=span)


def _enumerate_magnitudes(
    budget: float, depth: int, prefix: list[int], out: list[list[int]]
):
    # prefix magnitudes consume the multiplicative budget prod m_i <= budget
    if depth == 0:
        out.append(list(prefix))
        return
    cap = int(math.floor(budget * (1.0 + _GUARD)))
    for m in range(1, cap + 1):
        prefix.append(m)
        _enumerate_magnitudes(budget / m, depth - 1, prefix, out)
        prefix.pop()


def span_closed_form(
    params: SmoothnessParams,
    spec: WeightSpec,
    supports: Sequence[Iterable[int]] | None = None,
) -> int:
    """
    2 * max_j max_{u containing j} floor((gamma_u * M)**(1/alpha)).

    ``supports`` must cover every support with positive weight that is
    feasible at radius M; by default the pruned support enumeration is used.
    """
    if supports is None:
        supports = feasible_supports(params, spec)
    best = 0
    for u in supports:
        uu = tuple(u)
        if not uu:
            continue
        gu = spec.weight_of(uu)
        if gu <= 0.0:
            continue
        m = int(math.floor((gu * params.m_radius) ** (1.0 / params.alpha) * (1.0 + _GUARD)))
        best = max(best, m)
    return 2 * best


def cardinality_bound(
    params: SmoothnessParams,
    spec: WeightSpec,
    theory: TheoryParams,
    spod_supports: Sequence[Iterable[int]] | None = None,
) -> float:
    """M**lam times the weighted zeta sum; an upper bound for |A|."""
    theory.check_size(params.alpha)
    s = weighted_zeta_sum(spec, params, theory, spod_supports=spod_supports)
    return params.m_radius**theory.lam * s


def tail_bound(
    params: SmoothnessParams,
    spec: WeightSpec,
    theory: TheoryParams,
    spod_supports: Sequence[Iterable[int]] | None = None,
) -> float:
    """
    Upper bound for sum over k outside the cross of rnorm(k)**-2:

        M**-(2-lam) * 8(3-lam)/(2-lam) * weighted zeta sum.

    Requires lam in (1/alpha, 2) and M >= 1.
    """
    theory.check_tail(params.alpha)
    if params.m_radius < 1.0:
        raise ValueError(f"tail bound needs M >= 1, got {params.m_radius}")
    lam = theory.lam
    s = weighted_zeta_sum(spec, params, theory, spod_supports=spod_supports)
    return params.m_radius ** (lam - 2.0) * (8.0 * (3.0 - lam) / (2.0 - lam)) * s
