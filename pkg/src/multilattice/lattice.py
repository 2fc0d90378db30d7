"""
Rank-1 lattices, dual membership, and aliasing-free indicators
==============================================================

A rank-1 lattice with prime modulus n and generating vector g has points

    y_i = ( {i g_1 / n}, ..., {i g_d / n} ),    i = 0, ..., n - 1,

and dual lattice { k : k . g = 0 (mod n) }.  The equal-weight average of
e^{2 pi i k . y} over the points equals the dual-membership indicator
(the character property), which makes the residue k . g mod n the whole
story for aliasing: two frequencies collide on the lattice exactly when
their residues agree.

``aliasing_indicators`` marks each frequency of an index set whose residue
is unique across the set; those frequencies are recoverable from this
lattice without interference from the rest of the set.

Generating-vector components live in {1, ..., n}; a component equal to n
acts as 0 mod n (the probabilistic construction samples from this range).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .cross import HyperbolicCross
from .primes import is_prime

__all__ = [
    "Rank1Lattice",
    "AliasingTable",
    "lattice_points",
    "character_sum",
    "dual_contains",
    "aliasing_indicators",
    "brute_force_dual_box",
]


@dataclass(frozen=True)
class Rank1Lattice:
    """Prime modulus n and generating vector g with components in {1, ..., n}."""

    n: int
    g: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "g", tuple(int(c) for c in self.g))
        if not is_prime(self.n):
            raise ValueError(f"modulus {self.n} is not prime")
        for c in self.g:
            if not 1 <= c <= self.n:
                raise ValueError(f"generating component {c} outside {{1, ..., {self.n}}}")

    @property
    def dim(self) -> int:
        return len(self.g)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "g": list(self.g)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Rank1Lattice":
        return cls(n=int(obj["n"]), g=tuple(obj["g"]))


@dataclass(frozen=True)
class AliasingTable:
    """
    Per-frequency aliasing-free indicators for one lattice over one index set.

    ``indicators[i]`` is True when the i-th frequency (in the index set's
    lexicographic order) has a residue no other frequency shares.
    """

    lattice_index: int
    indicators: np.ndarray

    def __post_init__(self):
        ind = np.asarray(self.indicators, dtype=bool)
        ind.setflags(write=False)
        object.__setattr__(self, "indicators", ind)

    @property
    def singleton_count(self) -> int:
        return int(self.indicators.sum())


def lattice_points(lat: Rank1Lattice) -> np.ndarray:
    """All n points as an (n, d) float array; components are (i*g_j mod n)/n exactly."""
    i = np.arange(lat.n, dtype=np.int64)
    pts = np.empty((lat.n, lat.dim), dtype=np.float64)
    for j, gj in enumerate(lat.g):
        pts[:, j] = ((i * (gj % lat.n)) % lat.n) / lat.n
    return pts


def residue_of(lat: Rank1Lattice, k) -> int:
    """k . g mod n, mapped into {0, ..., n-1} (negative components included)."""
    return sum(int(kj) * gj for kj, gj in zip(k, lat.g)) % lat.n


def character_sum(lat: Rank1Lattice, k) -> complex:
    """
    (1/n) sum_i e^{2 pi i k . y_i}.

    Equals 1 when k is dual and 0 otherwise, up to roundoff near 1e-15.
    Phases are reduced to exact rationals (i * (k.g mod n) mod n) / n
    before exponentiation.
    """
    r = residue_of(lat, k)
    i = np.arange(lat.n, dtype=np.int64)
    theta = ((i * r) % lat.n) / lat.n
    return complex(np.exp(2j * np.pi * theta).sum() / lat.n)


def dual_contains(lat: Rank1Lattice, ell) -> bool:
    """True iff ell . g = 0 (mod n); exact integer arithmetic."""
    return residue_of(lat, ell) == 0


def residues_over_cross(cross_array: np.ndarray, lat: Rank1Lattice) -> np.ndarray:
    """Residues k . g mod n for every row of an (m, d) frequency array."""
    n = lat.n
    g = np.array([c % n for c in lat.g], dtype=np.int64)
    kmod = cross_array % n  # in {0, ..., n-1}
    if lat.dim * (n - 1) * (n - 1) < 2**62:
        return (kmod * g[None, :]).sum(axis=1) % n
    # fall back to exact Python integers when n*n*d could overflow int64
    return np.array(
        [sum(int(kj) * int(gj) for kj, gj in zip(row, g)) % n for row in kmod],
        dtype=np.int64,
    )


def aliasing_indicators(cross: HyperbolicCross, lat: Rank1Lattice, lattice_index: int = 0) -> AliasingTable:
    """
    Mark the frequencies of the cross whose residue k . g mod n occurs
    exactly once across the cross.  Sort-based counting, O(d |A| + |A| log |A|).
    """
    if lat.dim != cross.dim:
        raise ValueError(f"lattice dimension {lat.dim} != cross dimension {cross.dim}")
    res = residues_over_cross(cross.as_array(), lat)
    _, inverse, counts = np.unique(res, return_inverse=True, return_counts=True)
    return AliasingTable(lattice_index=lattice_index, indicators=counts[inverse] == 1)


def brute_force_dual_box(lat: Rank1Lattice, box_radius: int, cell_cap: int = 10**7) -> list[tuple[int, ...]]:
    """
    All nonzero dual vectors with max-norm at most ``box_radius``, in
    lexicographic order.  Test oracle; refuses boxes above ``cell_cap`` cells.
    """
    box_radius = int(box_radius)
    if box_radius < 0:
        raise ValueError("box_radius must be >= 0")
    cells = (2 * box_radius + 1) ** lat.dim
    if cells > cell_cap:
        raise ValueError(f"dual box has {cells} cells, above the cap {cell_cap}")
    if box_radius == 0:
        return []
    rng = np.arange(-box_radius, box_radius + 1, dtype=np.int64)
    grids = np.meshgrid(*([rng] * lat.dim), indexing="ij")
    flat = np.stack([a.ravel() for a in grids], axis=1)
    res = residues_over_cross(flat, lat)
    hits = flat[(res == 0) & np.any(flat != 0, axis=1)]
    return sorted(tuple(int(c) for c in row) for row in hits)
