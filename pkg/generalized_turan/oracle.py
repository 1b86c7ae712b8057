"""Exact ex(n, H, F) for tiny n by exhaustive search over edge-maximal F-free graphs.

Edge slots are decided in graph6 column order ``(0,1), (0,2), (1,2), (0,3), ...``; each slot
is included or excluded. Copy counts only grow when edges are added, so every F-free graph
lies below an edge-maximal one with at least as many copies of H: only maximal leaves are
evaluated. An exclusion is *forced* when the edge would complete a copy of F in the current
graph; it stays forced in every supergraph. Voluntary exclusions are re-checked at the leaf.

Once every slot among the first m vertices is decided, the rest of the search depends on
that prefix only up to isomorphism, so prefixes are deduplicated by canonical form.
"""

import logging
import time
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict, Field

from generalized_turan.counting import (
    automorphism_count,
    contains,
    count_copies,
    count_embeddings,
    count_embeddings_fixed,
    count_k2t,
)
from generalized_turan.errors import ConsistencyError, ParameterError, SizeLimitError, TrivialForbiddenError
from generalized_turan.graph_core import Graph, canonical_form, graph6_decode, graph6_encode, is_isomorphic, iter_bits

if TYPE_CHECKING:
    from generalized_turan.cache_manager import ResultCache

logger = logging.getLogger(__name__)

ORACLE_MAX_N = 9
SWEEP_MAX_N = 6
MEMO_ORDERS = (3, 4, 5)
MEMO_MAX_KEYS = 1_000_000
SPLIT_ORDER = 4
SCHEMA_VERSION = 1
_DEADLINE_CHECK_EVERY = 1024


class SearchStats(BaseModel):
    nodes: int = 0
    maximal: int = Field(default=0, description="edge-maximal F-free leaves evaluated")
    memo_hits: int = 0
    seconds: float = 0.0


class ExtremalResult(BaseModel):
    """An exact (or, when ``complete`` is false, best-found) value of ex(n, H, F)."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    n: int
    h_g6: str = Field(..., description="canonical graph6 of the counted pattern H")
    f_g6: str = Field(..., description="canonical graph6 of the forbidden graph F")
    value: int
    witness_g6: str = Field(..., description="canonical graph6 of a maximising graph")
    stats: SearchStats = Field(default_factory=SearchStats)
    complete: bool = True


class _SearchTimeout(Exception):
    pass


class _ForbiddenPlan:
    """Decides whether adding an edge ``uv`` completes a copy of F through that edge.

    One search order per orbit of oriented edges of F: the edge is pinned to ``(u, v)`` and
    the remaining vertices follow in breadth-first order from it.
    """

    def __init__(self, f: Graph):
        self.order = f.order
        self.degrees = f.degrees()
        self.plans: list[tuple[int, int, list[int], list[list[int]]]] = []
        representatives: list[tuple[int, int]] = []
        for a, b in f.edge_list():
            for x, y in ((a, b), (b, a)):
                if any(count_embeddings_fixed(f, [p, q], f, [x, y]).value for p, q in representatives):
                    continue
                representatives.append((x, y))
                self.plans.append(self._plan(f, x, y))

    @staticmethod
    def _plan(f: Graph, a: int, b: int) -> tuple[int, int, list[int], list[list[int]]]:
        placed = [a, b]
        seen = {a, b}
        i = 0
        while len(placed) < f.order:
            if i < len(placed):
                for w in iter_bits(f.mask(placed[i])):
                    if w not in seen:
                        seen.add(w)
                        placed.append(w)
                i += 1
            else:
                w = next(v for v in f.vertices() if v not in seen)
                seen.add(w)
                placed.append(w)
        rest = placed[2:]
        position = {v: k for k, v in enumerate(placed)}
        back = [[y for y in iter_bits(f.mask(x)) if position[y] < position[x]] for x in rest]
        return a, b, rest, back

    def completes(self, masks: list[int], u: int, v: int) -> bool:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
        try:
            full = (1 << len(masks)) - 1
            for a, b, rest, back in self.plans:
                if masks[u].bit_count() < self.degrees[a] or masks[v].bit_count() < self.degrees[b]:
                    continue
                image = [-1] * self.order
                image[a], image[b] = u, v
                if self._extend(masks, rest, back, 0, (1 << u) | (1 << v), image, full):
                    return True
            return False
        finally:
            masks[u] &= ~(1 << v)
            masks[v] &= ~(1 << u)

    def _extend(
        self, masks: list[int], rest: list[int], back: list[list[int]], k: int, used: int, image: list[int], full: int
    ) -> bool:
        if k == len(rest):
            return True
        x = rest[k]
        cand = full & ~used
        for y in back[k]:
            cand &= masks[image[y]]
        need = self.degrees[x]
        for w in iter_bits(cand):
            if masks[w].bit_count() < need:
                continue
            image[x] = w
            if self._extend(masks, rest, back, k + 1, used | 1 << w, image, full):
                return True
        image[x] = -1
        return False


class _CopyCounter:
    def __init__(self, h: Graph):
        self.h = h
        self.t = h.order - 2 if h.order >= 4 and is_isomorphic(h, _k2t(h.order - 2)) else None
        self.automorphisms = 1 if self.t is not None else automorphism_count(h)

    def __call__(self, masks: tuple[int, ...]) -> int:
        g = Graph.from_masks(masks)
        if self.t is not None:
            return count_k2t(g, self.t).value
        return count_embeddings(self.h, g).value // self.automorphisms


def _k2t(t: int) -> Graph:
    return Graph(t + 2, [(i, 2 + j) for i in range(2) for j in range(t)])


@dataclass
class _Explorer:
    """Depth-first walk over edge slots from ``start`` to ``stop``."""

    n: int
    plan: _ForbiddenPlan
    start: int
    stop: int
    memo_orders: tuple[int, ...]
    deadline: float | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    memo: set[str] = field(default_factory=set)

    def __post_init__(self) -> None:
        self.slots = [(i, j) for j in range(1, self.n) for i in range(j)]
        self.boundaries = {comb(m, 2): m for m in self.memo_orders if 2 < m <= self.n}

    def _seen(self, masks: list[int], m: int) -> bool:
        low = (1 << m) - 1
        key = canonical_form(Graph.from_masks([masks[v] & low for v in range(m)]))
        if key in self.memo:
            self.stats.memo_hits += 1
            return True
        if len(self.memo) < MEMO_MAX_KEYS:
            self.memo.add(key)
        return False

    def walk(self, slot: int, masks: list[int], voluntary: list[tuple[int, int]]) -> Iterator[tuple[list[int], tuple]]:
        self.stats.nodes += 1
        if self.deadline is not None and self.stats.nodes % _DEADLINE_CHECK_EVERY == 0 and time.time() > self.deadline:
            raise _SearchTimeout
        m = self.boundaries.get(slot)
        if m is not None and slot != self.start and self._seen(masks, m):
            return
        if slot == self.stop:
            yield masks, tuple(voluntary)
            return
        u, v = self.slots[slot]
        if self.plan.completes(masks, u, v):
            yield from self.walk(slot + 1, masks, voluntary)
            return
        masks[u] |= 1 << v
        masks[v] |= 1 << u
        yield from self.walk(slot + 1, masks, voluntary)
        masks[u] &= ~(1 << v)
        masks[v] &= ~(1 << u)
        voluntary.append((u, v))
        yield from self.walk(slot + 1, masks, voluntary)
        voluntary.pop()

    def maximal_leaves(self, masks: list[int], voluntary: list[tuple[int, int]]) -> Iterator[tuple[int, ...]]:
        for leaf, excluded in self.walk(self.start, masks, voluntary):
            if all(self.plan.completes(leaf, u, v) for u, v in excluded):
                self.stats.maximal += 1
                yield tuple(leaf)


def _check_inputs(n: int, h: Graph | None, f: Graph, cap: int) -> None:
    if not 1 <= n <= cap:
        msg = f"n must lie in 1..{cap}, got {n}"
        raise SizeLimitError(msg)
    if h is not None and h.order == 0:
        raise ParameterError("the counted pattern must have at least one vertex")
    if f.order <= 1:
        msg = f"a forbidden graph on {f.order} vertices makes every host trivial"
        raise TrivialForbiddenError(msg)
    if f.edge_count == 0 and f.order <= n:
        msg = f"the edgeless forbidden graph on {f.order} vertices is contained in every {n}-vertex graph"
        raise TrivialForbiddenError(msg)


def _prefixes(n: int, plan: _ForbiddenPlan) -> list[tuple[list[int], list[tuple[int, int]]]]:
    """Pairwise non-isomorphic F-free labelled graphs on the first SPLIT_ORDER vertices."""
    split = comb(min(SPLIT_ORDER, n), 2)
    explorer = _Explorer(n, plan, start=0, stop=split, memo_orders=MEMO_ORDERS)
    return [(list(masks), list(excluded)) for masks, excluded in explorer.walk(0, [0] * n, [])]


def _explore_prefix(
    n: int,
    h_masks: tuple[int, ...],
    f_masks: tuple[int, ...],
    masks: list[int],
    voluntary: list[tuple[int, int]],
    deadline: float | None,
) -> tuple[int, str | None, SearchStats, bool]:
    """Best value and least labelled graph6 witness below one prefix."""
    plan = _ForbiddenPlan(Graph.from_masks(f_masks))
    counter = _CopyCounter(Graph.from_masks(h_masks))
    split = comb(min(SPLIT_ORDER, n), 2)
    later = tuple(m for m in MEMO_ORDERS if m > SPLIT_ORDER)
    explorer = _Explorer(n, plan, start=split, stop=n * (n - 1) // 2, memo_orders=later, deadline=deadline)
    best, witness = -1, None
    complete = True
    started = time.perf_counter()
    try:
        for leaf in explorer.maximal_leaves(masks, voluntary):
            value = counter(leaf)
            if value < best:
                continue
            encoded = graph6_encode(Graph.from_masks(leaf))
            if value > best or (witness is not None and encoded < witness):
                best, witness = value, encoded
    except _SearchTimeout:
        complete = False
    explorer.stats.seconds = time.perf_counter() - started
    return best, witness, explorer.stats, complete


def enumerate_maximal_free(n: int, f: Graph) -> Iterator[Graph]:
    """Edge-maximal F-free graphs on n labelled vertices, one per canonical branch."""
    _check_inputs(n, None, f, ORACLE_MAX_N)
    plan = _ForbiddenPlan(f)
    split = comb(min(SPLIT_ORDER, n), 2)
    later = tuple(m for m in MEMO_ORDERS if m > SPLIT_ORDER)
    for masks, voluntary in _prefixes(n, plan):
        explorer = _Explorer(n, plan, start=split, stop=n * (n - 1) // 2, memo_orders=later)
        for leaf in explorer.maximal_leaves(masks, voluntary):
            yield Graph.from_masks(leaf)


def _verified(result: ExtremalResult, h: Graph, f: Graph) -> bool:
    witness = graph6_decode(result.witness_g6)
    return not contains(witness, f) and count_copies(h, witness).value == result.value


def exact_ex(
    n: int,
    h: Graph,
    f: Graph,
    jobs: int = 1,
    timeout: float | None = None,
    cache: "ResultCache | None" = None,
) -> ExtremalResult:
    """Largest number of copies of ``h`` in an n-vertex ``f``-free graph."""
    _check_inputs(n, h, f, ORACLE_MAX_N)
    h_g6, f_g6 = canonical_form(h), canonical_form(f)
    if cache is not None:
        cached = cache.load(n, h_g6, f_g6)
        if cached is not None:
            if _verified(cached, h, f):
                return cached
            logger.warning("cached result for n=%d failed re-verification; recomputing", n)

    started = time.perf_counter()
    deadline = time.time() + timeout if timeout else None
    plan = _ForbiddenPlan(f)
    prefixes = _prefixes(n, plan)
    logger.info("oracle n=%d: %d top-level prefixes", n, len(prefixes))
    arguments = [(n, h.masks, f.masks, masks, voluntary, deadline) for masks, voluntary in prefixes]
    if jobs > 1 and len(arguments) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(arguments))) as pool:
            outcomes = list(pool.map(_explore_prefix, *zip(*arguments, strict=True)))
    else:
        outcomes = [_explore_prefix(*args) for args in arguments]

    best, witness = -1, None
    stats = SearchStats()
    complete = True
    for value, encoded, part, finished in outcomes:
        stats.nodes += part.nodes
        stats.maximal += part.maximal
        stats.memo_hits += part.memo_hits
        complete = complete and finished
        if encoded is None:
            continue
        if value > best or (value == best and witness is not None and encoded < witness):
            best, witness = value, encoded
    stats.seconds = time.perf_counter() - started
    if witness is None and not complete:
        msg = f"search for n={n} timed out before reaching a maximal graph"
        raise SizeLimitError(msg)
    if witness is None:
        msg = f"search for n={n} finished without reaching a maximal graph"
        raise ConsistencyError(msg)
    if not complete:
        logger.warning("oracle n=%d timed out after %.1fs; value %d is a lower bound", n, stats.seconds, best)

    witness_graph = graph6_decode(witness)
    if contains(witness_graph, f) or count_copies(h, witness_graph).value != best:
        msg = f"witness {witness} failed re-verification for value {best}"
        raise ConsistencyError(msg)
    result = ExtremalResult(
        n=n,
        h_g6=h_g6,
        f_g6=f_g6,
        value=best,
        witness_g6=canonical_form(witness_graph),
        stats=stats,
        complete=complete,
    )
    if cache is not None and complete:
        cache.store(result)
    return result


def sweep_ex(n: int, h: Graph, f: Graph) -> ExtremalResult:
    """ex(n, H, F) by checking all 2^C(n,2) labelled graphs."""
    _check_inputs(n, h, f, SWEEP_MAX_N)
    started = time.perf_counter()
    slots = [(i, j) for j in range(1, n) for i in range(j)]
    automorphisms = automorphism_count(h)
    best, witness = -1, ""
    stats = SearchStats()
    for bits in range(1 << len(slots)):
        g = Graph(n, (slots[k] for k in iter_bits(bits)))
        stats.nodes += 1
        if contains(g, f):
            continue
        stats.maximal += 1
        value = count_embeddings(h, g).value // automorphisms
        encoded = graph6_encode(g)
        if value > best or (value == best and encoded < witness):
            best, witness = value, encoded
    stats.seconds = time.perf_counter() - started
    return ExtremalResult(
        n=n,
        h_g6=canonical_form(h),
        f_g6=canonical_form(f),
        value=best,
        witness_g6=canonical_form(graph6_decode(witness)),
        stats=stats,
    )
