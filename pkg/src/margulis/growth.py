"""Word-ball counting and growth-rate displacement bounds.

Elements of a matrix group are enumerated breadth-first and deduplicated by
quantizing the sign-canonical matrix entries on a grid of pitch dedup_eps.
Lookups probe both signs and the neighboring cells of any coordinate
sitting close to a cell boundary, so roundoff jitter between different
spellings of one element cannot split it in two.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .errors import BudgetExceeded, DomainError, HashCollisionRisk
from .hyp3 import Isometry

_DEFAULT_NAMES = "abcdefgh"
_BOUNDARY_MARGIN = 1e-3  # fraction of a cell counted as "near the boundary"


def _cells(value: float, eps: float) -> tuple[int, ...]:
    """Candidate grid cells for one coordinate (one or two when near an edge)."""
    scaled = value / eps
    base = math.floor(scaled + 0.5)
    frac = scaled + 0.5 - base
    if frac < _BOUNDARY_MARGIN:
        return (base, base - 1)
    if frac > 1.0 - _BOUNDARY_MARGIN:
        return (base, base + 1)
    return (base,)


def _flatten(g: Isometry) -> tuple[float, ...]:
    return (g.a.real, g.a.imag, g.b.real, g.b.imag,
            g.c.real, g.c.imag, g.d.real, g.d.imag)


def _base_key(flat: Sequence[float], eps: float) -> tuple[int, ...]:
    return tuple(math.floor(v / eps + 0.5) for v in flat)


def _probe_keys(flat: Sequence[float], eps: float):
    options = [_cells(v, eps) for v in flat]
    if all(len(o) == 1 for o in options):
        yield tuple(o[0] for o in options)
        return
    yield from product(*options)


@dataclass(frozen=True)
class BallEntry:
    word: str
    matrix: Isometry
    length: int


@dataclass
class WordBall:
    """Distinct group elements reachable by words of length <= m."""

    counts: list[int]
    entries: dict[tuple[int, ...], BallEntry]
    include_inverses: bool
    dedup_eps: float
    generator_names: tuple[str, ...]

    @property
    def m(self) -> int:
        return len(self.counts) - 1

    def word_lengths(self) -> dict[str, int]:
        return {e.word: e.length for e in self.entries.values()}

    def nontrivial(self) -> list[BallEntry]:
        return [e for e in self.entries.values() if e.length > 0]

    def __len__(self) -> int:
        return len(self.entries)


class _QuantizedTable:
    """Quantized canonical-matrix table with sign and boundary probing.

    A secondary grid at pitch 10 * eps audits headroom: two elements kept
    distinct at pitch eps but sharing a coarse cell are close enough that
    the dedup resolution is at risk, and a HashCollisionRisk warning fires.
    """

    def __init__(self, eps: float):
        self.eps = eps
        self.by_key: dict[tuple[int, ...], tuple[int, ...]] = {}
        self.entries: dict[tuple[int, ...], BallEntry] = {}
        self._audit: dict[tuple[int, ...], str] = {}

    def find(self, g: Isometry) -> Optional[tuple[int, ...]]:
        neg = Isometry(-g.a, -g.b, -g.c, -g.d, det_tol=math.inf)
        for cand in (g, neg):
            flat = _flatten(cand)
            for key in _probe_keys(flat, self.eps):
                base = self.by_key.get(key)
                if base is not None:
                    return base
        return None

    def insert(self, g: Isometry, entry: BallEntry) -> tuple[int, ...]:
        flat = _flatten(g)
        key = _base_key(flat, self.eps)
        self.by_key[key] = key
        self.entries[key] = entry
        audit_key = _base_key(flat, 10.0 * self.eps)
        other = self._audit.get(audit_key)
        if other is not None:
            warnings.warn(
                f"distinct elements {other!r} and {entry.word!r} quantize "
                f"together at pitch {10.0 * self.eps:.1e}; dedup_eps = "
                f"{self.eps:.1e} has under 10x headroom",
                HashCollisionRisk, stacklevel=4)
        else:
            self._audit[audit_key] = entry.word
        return key


def ball_sizes(gens: Sequence[Isometry], m: int, include_inverses: bool = False,
               dedup_eps: float = 1e-9, names: Optional[Sequence[str]] = None,
               budget: Optional[int] = None) -> WordBall:
    """BFS enumeration of the word ball of radius m.

    Counts positive words (the monoid ball) by default, matching the
    2^m lower bound used for semi-independent pairs; pass
    ``include_inverses`` for the full group ball.  Words are recorded in
    compact letter form (inverses uppercase).
    """
    if m < 0:
        raise DomainError("ball radius must be nonnegative", offending=m)
    if not gens:
        raise DomainError("at least one generator required")
    if names is None:
        if len(gens) > len(_DEFAULT_NAMES):
            raise DomainError("supply names for more than 8 generators")
        names = _DEFAULT_NAMES[: len(gens)]
    alphabet: list[tuple[str, Isometry]] = []
    for name, g in zip(names, gens):
        alphabet.append((name, g))
        if include_inverses:
            alphabet.append((name.upper(), g.inverse()))

    table = _QuantizedTable(dedup_eps)
    ident = BallEntry("", Isometry.identity(), 0)
    table.insert(ident.matrix, ident)
    counts = [1]
    frontier = [ident]
    work = 0
    for depth in range(1, m + 1):
        new_frontier: list[BallEntry] = []
        for entry in frontier:
            for name, g in alphabet:
                work += 1
                if budget is not None and work > budget:
                    raise BudgetExceeded(
                        f"ball enumeration exceeded {budget} products")
                candidate = entry.matrix * g
                if table.find(candidate) is not None:
                    continue
                new_entry = BallEntry(entry.word + name, candidate, depth)
                table.insert(candidate, new_entry)
                new_frontier.append(new_entry)
        frontier = new_frontier
        counts.append(len(table.entries))
    return WordBall(counts, table.entries, include_inverses, dedup_eps,
                    tuple(names))


@dataclass(frozen=True)
class OmegaEstimate:
    """Growth-rate estimates from a word ball.

    ``roots`` holds b_k^{1/k} (converging to the rate from above),
    ``ratios`` holds b_k / b_{k-1}; the reported estimate is the final
    ratio, which is exact for a purely exponential count.
    """

    roots: tuple[float, ...]
    ratios: tuple[float, ...]
    estimate: float


def omega_estimate(ball: WordBall) -> OmegaEstimate:
    if ball.m < 2:
        raise DomainError("need a ball of radius at least 2", offending=ball.m)
    roots = tuple(ball.counts[k] ** (1.0 / k) for k in range(1, ball.m + 1))
    ratios = tuple(ball.counts[k] / ball.counts[k - 1] for k in range(1, ball.m + 1))
    return OmegaEstimate(roots, ratios, ratios[-1])


def displacement_lower_bound(omega: float, dim: int) -> float:
    """log(omega)/(dim - 1): the packing bound for a pair generating growth omega."""
    if omega < 1.0:
        raise DomainError("growth rate must be >= 1", offending=omega)
    if dim < 2:
        raise DomainError("dimension must be >= 2", offending=dim)
    return math.log(omega) / (dim - 1)


def parse_ball_word(word: str, gens: Sequence[Isometry],
                    names: Sequence[str]) -> Isometry:
    """Rebuild the matrix of a compact ball word (inverse letters uppercase)."""
    lookup: dict[str, Isometry] = {}
    for name, g in zip(names, gens):
        lookup[name] = g
        lookup[name.upper()] = g.inverse()
    out = Isometry.identity()
    for ch in word:
        try:
            out = out * lookup[ch]
        except KeyError:
            raise DomainError(f"unknown letter {ch!r} in word {word!r}") from None
    return out
