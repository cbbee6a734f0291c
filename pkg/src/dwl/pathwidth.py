"""Divide-and-conquer directed path decompositions, and the DAG/Kelly views of them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .decomposition import (
    DagDecomposition,
    DirectedPathDecomposition,
    KellyDecomposition,
    dpd_to_kelly_path,
    normalize_dpd,
    trivial_decomposition,
    validate_dpd,
)
from .digraph import Digraph
from .errors import InvalidInputError
from .separators import SeparatorStrategy, find_sep, validate_separator


def default_threshold(n: int) -> int:
    """max(2, smallest power of two >= ceil(log2(n) ** 1.5))."""
    if n <= 1:
        return 2
    target = math.ceil(math.log2(n) ** 1.5)
    return max(2, 1 << max(target - 1, 0).bit_length())


@dataclass(frozen=True)
class DpwRunConfig:
    strategy: SeparatorStrategy = field(default_factory=SeparatorStrategy)
    termination_threshold: int | None = None
    alpha_prime: Fraction = Fraction(7, 8)
    check: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha_prime", Fraction(self.alpha_prime))
        if not Fraction(3, 4) < self.alpha_prime < 1:
            raise InvalidInputError("alpha' must lie in (3/4, 1)")
        if self.termination_threshold is not None and self.termination_threshold < 1:
            raise InvalidInputError("termination threshold must be at least 1")

    def threshold_for(self, n: int) -> int:
        if self.termination_threshold is None:
            return default_threshold(n)
        return self.termination_threshold


@dataclass
class RunTelemetry:
    recursion_depth: int = 0
    max_separator_size: int = 0
    separator_count: int = 0
    threshold: int = 0
    # only filled by the arboreal construction
    max_balance_set_size: int = 0
    max_raw_separator_size: int = 0
    width_bound: int = -1

    def record_separator(self, size: int) -> None:
        self.separator_count += 1
        self.max_separator_size = max(self.max_separator_size, size)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def merge(d1: DirectedPathDecomposition, d2: DirectedPathDecomposition, s: Iterable[int]) -> DirectedPathDecomposition:
    """Concatenate two path decompositions and add ``s`` to every bag."""
    s = frozenset(s)
    bags = tuple(b | s for b in d1.bags) + tuple(b | s for b in d2.bags)
    if not bags and s:
        bags = (s,)
    return DirectedPathDecomposition(bags)


def make_dpdec(g: Digraph, u: Iterable[int] | None = None,
               cfg: DpwRunConfig | None = None) -> tuple[DirectedPathDecomposition, RunTelemetry]:
    """Directed path decomposition of G[u] built by recursive balanced separation."""
    cfg = cfg or DpwRunConfig()
    u = g.vertices if u is None else frozenset(u)
    if not u <= g.vertices:
        raise InvalidInputError("vertex set is not a subset of the graph's vertices")
    tele = RunTelemetry(threshold=cfg.threshold_for(g.n))
    if not u:
        return trivial_decomposition(g.induced(u)), tele

    def rec(part: frozenset[int], depth: int) -> DirectedPathDecomposition:
        if not part:
            return DirectedPathDecomposition(())
        if len(part) <= tele.threshold:
            tele.recursion_depth = max(tele.recursion_depth, depth)
            return DirectedPathDecomposition((part,))
        sub = g.induced(part)
        sep = find_sep(sub, part, cfg.strategy, alpha=cfg.alpha_prime)
        if cfg.check and not validate_separator(sub, part, cfg.alpha_prime, sep):
            raise AssertionError(f"separator strategy returned an invalid separator on {sorted(part)}")
        tele.record_separator(len(sep.s))
        d1 = rec(sep.u1, depth + 1)
        d2 = rec(sep.u2, depth + 1)
        tele.recursion_depth = max(tele.recursion_depth, depth + 1)
        out = merge(d1, d2, sep.s)
        if cfg.check and not validate_dpd(sub, out).passed:
            raise AssertionError(f"merge produced an invalid decomposition on {sorted(part)}")
        return out

    return rec(u, 0), tele


def approx_dagwidth(g: Digraph, cfg: DpwRunConfig | None = None) -> tuple[DagDecomposition, RunTelemetry]:
    d, tele = make_dpdec(g, None, cfg)
    return d.as_dag(), tele


def approx_kellywidth(g: Digraph, cfg: DpwRunConfig | None = None) -> tuple[KellyDecomposition, RunTelemetry]:
    d, tele = make_dpdec(g, None, cfg)
    return dpd_to_kelly_path(normalize_dpd(d)), tele
