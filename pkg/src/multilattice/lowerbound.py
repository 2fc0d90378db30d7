"""
Single-lattice error floors from short dual vectors (d = 2)
===========================================================

For a two-dimensional rank-1 lattice with prime modulus N, a nonzero dual
vector h with both components small yields a two-mode "fooling" function

    f(x1, x2) = (e^{2 pi i h1 x1} - e^{-2 pi i h2 x2}) / sqrt(|h1|^{2a} + |h2|^{2a})

of unit unweighted norm that vanishes at every lattice point (the dual
congruence h1 g1 = -h2 g2 mod N makes the two exponentials cancel).  All
its discrete coefficients therefore vanish, and the L2 error of any
single-lattice reconstruction is at least

    sqrt( 2 / (|h1|^{2a} + |h2|^{2a}) )  >=  N^{-a/2},

whenever both |h1|, |h2| <= sqrt(N).  Two constructions of such h:

- pigeonhole: among the (floor(sqrt(N))+1)^2 points of {0..floor(sqrt(N))}^2,
  two share a residue of k . g; their difference is dual with both
  components nonzero (N prime) and bounded by sqrt(N);
- continued fractions: with u = g1^{-1} g2 mod N and convergents p_t/q_t
  of u/N, the unique t with q_t <= sqrt(N) < q_{t+1} gives the dual vector
  (K, -q_t), K = u q_t - N p_t, with |K| <= N / q_{t+1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .primes import is_prime

__all__ = [
    "ShortDualVector",
    "pigeonhole_short_vector",
    "cf_short_vector",
    "fooling_error",
    "convergents",
]


@dataclass(frozen=True)
class ShortDualVector:
    """A certified short nonzero dual vector for a 2-d lattice."""

    n: int
    g: tuple[int, int]
    h: tuple[int, int]
    method: str  # "pigeonhole" | "continued_fraction"
    max_abs: int
    q_next: int | None = None  # next convergent denominator (cf only)
    bound_ok: bool = True

    def __post_init__(self):
        if self.h == (0, 0):
            raise ValueError("dual vector must be nonzero")
        if (self.h[0] * self.g[0] + self.h[1] * self.g[1]) % self.n != 0:
            raise ValueError(f"{self.h} is not dual for n={self.n}, g={self.g}")


def _validate(n: int, g) -> tuple[int, int]:
    n = int(n)
    if not is_prime(n):
        raise ValueError(f"modulus {n} must be prime")
    g = (int(g[0]), int(g[1]))
    if g[0] % n == 0 or g[1] % n == 0:
        raise ValueError(f"generating components must be nonzero mod {n}, got {g}")
    return g


def pigeonhole_short_vector(n: int, g) -> ShortDualVector:
    """
    Exhaustive residue-collision search over {0..floor(sqrt(n))}^2.

    Every collision difference is dual with components of magnitude at most
    sqrt(n) and (for prime n) both nonzero.  Ties are broken by smallest
    max(|h1|, |h2|), after normalizing to h1 > 0, then lexicographically.
    """
    g = _validate(n, g)
    b = math.isqrt(n)
    buckets: dict[int, list[tuple[int, int]]] = {}
    for k1 in range(b + 1):
        for k2 in range(b + 1):
            buckets.setdefault((k1 * g[0] + k2 * g[1]) % n, []).append((k1, k2))
    candidates: set[tuple[int, int]] = set()
    for group in buckets.values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                h1 = group[i][0] - group[j][0]
                h2 = group[i][1] - group[j][1]
                if h1 == 0 or h2 == 0:
                    continue
                if h1 < 0:
                    h1, h2 = -h1, -h2
                candidates.add((h1, h2))
    if not candidates:
        # (floor(sqrt(n))+1)^2 > n guarantees a collision; nonzero components
        # follow from primality, so this is unreachable for valid input.
        raise RuntimeError(f"no collision found for n={n}, g={g}")
    h = min(candidates, key=lambda v: (max(abs(v[0]), abs(v[1])), v))
    return ShortDualVector(
        n=n,
        g=g,
        h=h,
        method="pigeonhole",
        max_abs=max(abs(h[0]), abs(h[1])),
        bound_ok=max(abs(h[0]), abs(h[1])) <= math.sqrt(n),
    )


def convergents(num: int, den: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents (p_t, q_t) of num/den, t = 0, 1, ...."""
    a_list = []
    a, b = num, den
    while b:
        a_list.append(a // b)
        a, b = b, a % b
    out = []
    p_prev, q_prev, p, q = 1, 0, a_list[0], 1
    out.append((p, q))
    for coeff in a_list[1:]:
        p_prev, q_prev, p, q = p, q, coeff * p + p_prev, coeff * q + q_prev
        out.append((p, q))
    return out


def cf_short_vector(n: int, g) -> ShortDualVector:
    """
    Short dual vector from the continued fraction of (g1^{-1} g2 mod n) / n:
    h = (K, -q_t) at the unique t with q_t <= sqrt(n) < q_{t+1}, where
    K = u q_t - n p_t and |K| <= n / q_{t+1}.
    """
    g = _validate(n, g)
    u = (pow(g[0], -1, n) * g[1]) % n
    conv = convergents(u, n)
    qs = [q for _, q in conv]
    t = max(i for i, q in enumerate(qs) if q * q <= n)
    p_t, q_t = conv[t]
    q_next = qs[t + 1]
    k_val = u * q_t - n * p_t
    h = (k_val, -q_t)
    bound_ok = abs(k_val) * q_next <= n and q_t * q_t <= n < q_next * q_next
    return ShortDualVector(
        n=n,
        g=g,
        h=h,
        method="continued_fraction",
        max_abs=max(abs(h[0]), abs(h[1])),
        q_next=q_next,
        bound_ok=bool(bound_ok),
    )


def fooling_error(n: int, alpha: float, sdv: ShortDualVector) -> dict:
    """
    Exact L2 reconstruction error of the normalized fooling function built
    on a short dual vector, the floor N^{-alpha/2}, and a numerical check
    that the function vanishes on the whole lattice.

    Returns {"error_value", "floor", "vanishes_on_lattice", "max_on_lattice"}.
    """
    if int(n) != sdv.n:
        raise ValueError(f"modulus mismatch: {n} vs certified {sdv.n}")
    h1, h2 = sdv.h
    if h1 == 0 or h2 == 0:
        raise ValueError("fooling construction needs both components nonzero")
    r1 = abs(h1) ** alpha
    r2 = abs(h2) ** alpha
    error_value = math.sqrt(2.0 / (r1 * r1 + r2 * r2))
    floor = float(n) ** (-alpha / 2.0)
    # f(y_i) = (e^{2 pi i h1 g1 i / n} - e^{-2 pi i h2 g2 i / n}) / norm
    i = np.arange(n, dtype=np.int64)
    t1 = np.exp(2j * np.pi * ((i * (h1 * sdv.g[0] % n)) % n) / n)
    t2 = np.exp(-2j * np.pi * ((i * (h2 * sdv.g[1] % n)) % n) / n)
    max_on_lattice = float(np.abs(t1 - t2).max() / math.sqrt(r1 * r1 + r2 * r2))
    return {
        "error_value": error_value,
        "floor": floor,
        "vanishes_on_lattice": max_on_lattice <= 1e-12,
        "max_on_lattice": max_on_lattice,
    }


def fooling_function_evaluator(sdv: ShortDualVector, alpha: float):
    """Vectorized evaluator of the normalized fooling function on (m, 2) points."""
    h1, h2 = sdv.h
    norm = math.sqrt(abs(h1) ** (2 * alpha) + abs(h2) ** (2 * alpha))

    def fn(points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return (
            np.exp(2j * np.pi * h1 * points[:, 0])
            - np.exp(-2j * np.pi * h2 * points[:, 1])
        ) / norm

    return fn
