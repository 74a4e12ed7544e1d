"""Generators for the extremal and random instances used throughout.

Random generators draw one uniform per vertex pair in lexicographic pair
order from a PCG64 stream seeded by the 64-bit seed, so a (kind, params,
seed) triple always reproduces the same graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

import numpy as np

from .errors import PreconditionError
from .graph import Graph, induced

BLOCKS_MAX_S = 20


@dataclass(frozen=True)
class ModelParams:
    """Parameters of one generator invocation (CLI-facing record)."""

    kind: str                 # blocks | blocks_padded | gnp_bar | gnp_uniform
    #                         # | complete_bipartite | star
    s: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None
    p: Optional[float] = None
    seed: Optional[int] = None

    def validate(self) -> None:
        if self.kind == "blocks":
            if self.s is None or self.s < 0:
                raise PreconditionError("blocks needs s >= 0")
        elif self.kind == "blocks_padded":
            if self.n is None or self.n < 1:
                raise PreconditionError("blocks_padded needs n >= 1")
        elif self.kind == "gnp_bar":
            if self.n is None or self.n < 2:
                raise PreconditionError("gnp_bar needs n >= 2")
            if self.seed is None:
                raise PreconditionError("gnp_bar needs a seed")
        elif self.kind == "gnp_uniform":
            if self.n is None or self.n < 1:
                raise PreconditionError("gnp_uniform needs n >= 1")
            if self.p is None or not 0 <= self.p <= 1:
                raise PreconditionError("gnp_uniform needs p in [0, 1]")
            if self.seed is None:
                raise PreconditionError("gnp_uniform needs a seed")
        elif self.kind == "complete_bipartite":
            if self.k is None or self.n is None or not 1 <= self.k <= self.n // 2:
                raise PreconditionError(
                    "complete_bipartite needs 1 <= k <= n/2")
        elif self.kind == "star":
            if self.n is None or self.n < 2:
                raise PreconditionError("star needs n >= 2")
        else:
            raise PreconditionError(f"unknown generator kind {self.kind!r}")

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for name in ("s", "n", "k", "p", "seed"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def blocks(s: int) -> Graph:
    """Layered clique blocks: parts V_0..V_s of 2^s vertices each, part V_i
    holding 2^(s-i) disjoint cliques of size 2^i, no edges anywhere else.
    Ids run part by part, clique by clique, ascending."""
    if s < 0:
        raise PreconditionError("s must be >= 0")
    if s > BLOCKS_MAX_S:
        raise PreconditionError(f"s capped at {BLOCKS_MAX_S}")
    part = 1 << s
    n = (s + 1) * part
    edges = []
    for i in range(s + 1):
        base = i * part
        size = 1 << i
        for c in range(1 << (s - i)):
            lo = base + c * size
            for a in range(lo, lo + size):
                for b in range(a + 1, lo + size):
                    edges.append((a, b))
    return Graph.from_edges(n, edges)


def blocks_minimal_s(n: int) -> int:
    s = 0
    while (s + 1) << s < n:
        s += 1
    return s


def blocks_padded(n: int) -> Graph:
    """Blocks graph for the minimal s with (s+1)*2^s >= n, restricted to the
    first n ids (the padded size never exceeds 3n)."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    s = blocks_minimal_s(n)
    full = blocks(s)
    assert full.n <= 3 * n, "padding blew past the 3n cap"
    if full.n == n:
        return full
    sub, _ = induced(full, range(n))
    return sub


def p_bar(n: int) -> list:
    """Per-vertex edge weights 1/4 + i/(2n) for i = 1..n (exact rationals)."""
    return [Fraction(1, 4) + Fraction(i, 2 * n) for i in range(1, n + 1)]


def pair_probability_range(n: int) -> tuple:
    """(min, max) pair probability of the skewed model; strictly inside
    (1/16, 9/16) for every n >= 2."""
    ps = p_bar(n)
    return ps[0] * ps[1], ps[-2] * ps[-1]


def expected_gnp_bar_edges(n: int) -> Fraction:
    """Exact expected edge count: sum of p_i * p_j over pairs i < j."""
    ps = p_bar(n)
    total = sum(ps)
    squares = sum(p * p for p in ps)
    return (total * total - squares) / 2


def _pairs_lex(n: int) -> list:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _sample_pairs(n: int, probs: np.ndarray, seed: int) -> Graph:
    rng = np.random.Generator(np.random.PCG64(seed))
    draws = rng.random(len(probs))
    pairs = _pairs_lex(n)
    edges = [pairs[idx] for idx in np.flatnonzero(draws < probs)]
    return Graph.from_edges(n, edges)


def sample_gnp_bar(n: int, seed: int) -> Graph:
    """Skewed random graph: vertex i (1-based) has weight 1/4 + i/(2n) and
    pair (i, j) is an edge with probability p_i * p_j. Vertex i maps to
    id i-1."""
    if n < 2:
        raise PreconditionError("n must be >= 2")
    lo, hi = pair_probability_range(n)
    assert Fraction(1, 16) < lo and hi < Fraction(9, 16)
    ps = np.array([float(p) for p in p_bar(n)])
    pairs = _pairs_lex(n)
    probs = np.array([ps[i] * ps[j] for i, j in pairs])
    return _sample_pairs(n, probs, seed)


def sample_gnp_uniform(n: int, p: float, seed: int) -> Graph:
    """Uniform Erdos-Renyi style sample with a fixed pair order."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if not 0 <= p <= 1:
        raise PreconditionError("p must lie in [0, 1]")
    probs = np.full(comb(n, 2), float(p))
    return _sample_pairs(n, probs, seed)


def complete_bipartite(k: int, n: int) -> Graph:
    """K_{k,n-k}: side {0..k-1} fully joined to side {k..n-1}."""
    if not 1 <= k <= n - 1:
        raise PreconditionError("need 1 <= k <= n-1")
    edges = [(a, b) for a in range(k) for b in range(k, n)]
    return Graph.from_edges(n, edges)


def star(n: int) -> Graph:
    """K_{1,n-1} with the hub at id 0."""
    if n < 2:
        raise PreconditionError("star needs n >= 2")
    return Graph.from_edges(n, [(0, v) for v in range(1, n)])


def generate(params: ModelParams) -> Graph:
    """Dispatch a validated ModelParams to its generator."""
    params.validate()
    if params.kind == "blocks":
        return blocks(params.s)
    if params.kind == "blocks_padded":
        return blocks_padded(params.n)
    if params.kind == "gnp_bar":
        return sample_gnp_bar(params.n, params.seed)
    if params.kind == "gnp_uniform":
        return sample_gnp_uniform(params.n, params.p, params.seed)
    if params.kind == "complete_bipartite":
        return complete_bipartite(params.k, params.n)
    return star(params.n)
