"""Füredi's K_{2,t}-free graphs over finite fields.

Vertices are the classes of non-zero pairs ``(a, b)`` over GF(q) under ``(a, b) ~ (s a, s b)``
for ``s`` in the subgroup ``S = {h, h^2, ..., h^{t-1}}``; two classes are adjacent when
``ac + bd`` lies in ``S``. A class adjacent to itself is *special* and its loop is dropped.
"""

import logging
import math
import random
from collections import Counter
from math import isqrt

from pydantic import BaseModel, ConfigDict, Field

from generalized_turan.counting import count_embeddings, count_k2t
from generalized_turan.errors import DivisibilityError, InfeasibleError, ParameterError
from generalized_turan.galois import (
    FIELD_MAX_ORDER,
    GaloisField,
    cyclic_subgroup,
    element_of_order,
    make_field_of_order,
    prime_power,
)
from generalized_turan.graph_core import Graph, iter_bits

logger = logging.getLogger(__name__)


class PrimePowerChoice(BaseModel):
    """The prime power q_t(n) chosen for an n-vertex budget."""

    q: int = Field(..., description="largest admissible prime power")
    p: int = Field(..., description="characteristic of GF(q)")
    k: int = Field(..., description="extension degree of GF(q)")
    n: int
    t: int
    vertex_count: int = Field(..., description="(q^2 - 1) / (t - 1)")
    gap_bound: float = Field(..., description="sqrt(n t) - n^(1/3)")
    gap_holds: bool = Field(..., description="whether q exceeds gap_bound; reported, never asserted")


class FurediGraph(BaseModel):
    """A Füredi graph together with the data it was built from."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    graph: Graph
    q: int
    t: int
    h_code: int = Field(..., description="element of order t - 1 generating the subgroup")
    reps: list[tuple[int, int]] = Field(..., description="least pair of each class, indexed by vertex")
    special: frozenset[int] = Field(..., description="vertices whose class is adjacent to itself")
    field: GaloisField = Field(..., exclude=True, repr=False)

    def subgroup(self) -> list[int]:
        return cyclic_subgroup(self.field, self.h_code)


class FurediReport(BaseModel):
    """Outcome of every structural check on a Füredi graph."""

    q: int
    t: int
    vertex_count: int
    vertex_count_ok: bool
    edge_count: int
    edge_count_ok: bool = Field(..., description="degree sum is 2|E| and |E| lies in [N(q-1)/2, Nq/2]")
    degree_histogram: dict[int, int]
    dichotomy_ok: bool = Field(..., description="special vertices have degree q-1, all others q")
    max_codegree: int
    codegree_ok: bool
    codegree_histogram: dict[int, int]
    pairs_at_t_minus_1: int
    nonadjacent_deviations: int = Field(..., description="non-adjacent pairs whose codegree is not t-1")
    adjacent_special_max: int | None = Field(
        default=None, description="largest codegree of an adjacent pair touching a special vertex"
    )
    k2t_copies: int
    k2t_free: bool
    representatives_ok: bool
    passed: bool


class EmbeddingRatio(BaseModel):
    """Observed embedding count of a tree against the (t-1)^((v-1)/2) N^((v+1)/2) prediction."""

    q: int
    t: int
    vertex_count: int
    tree_order: int
    count: int
    predicted: float
    ratio: float


def _check_t(t: int) -> None:
    if t < 2:
        msg = f"t must be at least 2, got {t}"
        raise ParameterError(msg)


def _admissible(q: int, t: int) -> bool:
    return prime_power(q) is not None and (q - 1) % (t - 1) == 0


def smallest_feasible_n(t: int) -> int:
    """Least n for which some prime power q has (t-1) | (q-1) and (q^2-1)/(t-1) <= n."""
    _check_t(t)
    q = 2
    while not _admissible(q, t):
        q += 1
    return (q * q - 1) // (t - 1)


def select_q(n: int, t: int) -> PrimePowerChoice:
    """Largest prime power q with (t-1) | (q-1) and (q^2-1)/(t-1) <= n, by descending scan."""
    _check_t(t)
    if n < 3:
        msg = f"n must be at least 3, got {n}"
        raise ParameterError(msg)
    start = min(isqrt(n * (t - 1) + 1), FIELD_MAX_ORDER)
    for q in range(start, 1, -1):
        if not _admissible(q, t) or (q * q - 1) // (t - 1) > n:
            continue
        p, k = prime_power(q) or (q, 1)
        gap_bound = math.sqrt(n * t) - n ** (1 / 3)
        return PrimePowerChoice(
            q=q,
            p=p,
            k=k,
            n=n,
            t=t,
            vertex_count=(q * q - 1) // (t - 1),
            gap_bound=gap_bound,
            gap_holds=q > gap_bound,
        )
    smallest = smallest_feasible_n(t)
    msg = f"no prime power fits n={n} for t={t}; the smallest feasible n is {smallest}"
    raise InfeasibleError(msg, smallest_n=smallest)


def _classes(f: GaloisField, subgroup: list[int]) -> tuple[list[tuple[int, int]], dict[tuple[int, int], int]]:
    """Class representatives in order of their least pair, and the class index of every pair."""
    reps: list[tuple[int, int]] = []
    class_of: dict[tuple[int, int], int] = {}
    for a in f.elements():
        for b in f.elements():
            if (a, b) == (0, 0) or (a, b) in class_of:
                continue
            index = len(reps)
            reps.append((a, b))
            for s in subgroup:
                class_of[f.mul(s, a), f.mul(s, b)] = index
    return reps, class_of


def _adjacency_from_representatives(
    f: GaloisField, reps: list[tuple[int, int]], subgroup: list[int]
) -> tuple[list[int], frozenset[int]]:
    """Adjacency masks from the defining relation applied directly to each pair of representatives."""
    members = set(subgroup)
    n = len(reps)
    masks = [0] * n
    special = set()
    for i, (a, b) in enumerate(reps):
        if f.add(f.mul(a, a), f.mul(b, b)) in members:
            special.add(i)
        for j in range(i + 1, n):
            c, d = reps[j]
            if f.add(f.mul(a, c), f.mul(b, d)) in members:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks, frozenset(special)


def build_furedi(q: int, t: int) -> FurediGraph:
    """Build F(q, t); requires (t-1) | (q-1)."""
    _check_t(t)
    f = make_field_of_order(q)
    if (q - 1) % (t - 1):
        msg = f"t - 1 = {t - 1} does not divide q - 1 = {q - 1}"
        raise DivisibilityError(msg)
    h = element_of_order(f, t - 1)
    subgroup = cyclic_subgroup(f, h)
    reps, class_of = _classes(f, subgroup)

    # For each class solve ac + bd = s for every s in S and every free coordinate.
    masks = [0] * len(reps)
    special = set()
    for i, (a, b) in enumerate(reps):
        for s in subgroup:
            if b:
                b_inv = f.inverse(b)
                solutions = ((c, f.mul(f.sub(s, f.mul(a, c)), b_inv)) for c in f.elements())
            else:
                c = f.mul(s, f.inverse(a))
                solutions = ((c, d) for d in f.elements())
            for pair in solutions:
                j = class_of[pair]
                if j == i:
                    special.add(i)
                else:
                    masks[i] |= 1 << j
    logger.debug("F(%d, %d): %d classes, %d special", q, t, len(reps), len(special))
    return FurediGraph(
        graph=Graph.from_masks(masks),
        q=q,
        t=t,
        h_code=h,
        reps=reps,
        special=frozenset(special),
        field=f,
    )


def _representatives_agree(fg: FurediGraph, trials: int, seed: int) -> bool:
    subgroup = fg.subgroup()
    f = fg.field
    rng = random.Random(seed)
    expected = fg.graph.masks
    for _ in range(trials):
        alternative = []
        for a, b in fg.reps:
            s = rng.choice(subgroup)
            alternative.append((f.mul(s, a), f.mul(s, b)))
        masks, special = _adjacency_from_representatives(f, alternative, subgroup)
        if tuple(masks) != expected or special != fg.special:
            return False
    return True


def verify_furedi(fg: FurediGraph, trials: int = 20, seed: int = 0) -> FurediReport:
    """Check vertex count, degrees, codegrees, K_{2,t}-freeness and representative independence."""
    g = fg.graph
    q, t = fg.q, fg.t
    n = g.order
    degrees = g.degrees()
    edge_count = g.edge_count

    codegrees: Counter[int] = Counter()
    deviations = 0
    adjacent_special_max: int | None = None
    for u in range(n):
        mu = g.mask(u)
        for v in range(u + 1, n):
            c = (mu & g.mask(v)).bit_count()
            codegrees[c] += 1
            adjacent = mu >> v & 1
            if not adjacent and c != t - 1:
                deviations += 1
                logger.warning(
                    "F(%d, %d): non-adjacent pair (%d, %d) has codegree %d, expected %d", q, t, u, v, c, t - 1
                )
            elif adjacent and (u in fg.special or v in fg.special):
                adjacent_special_max = c if adjacent_special_max is None else max(adjacent_special_max, c)

    max_codegree = max(codegrees, default=0)
    k2t = count_k2t(g, t).value
    vertex_count_ok = n == (q * q - 1) // (t - 1)
    edge_count_ok = sum(degrees) == 2 * edge_count and n * (q - 1) <= 2 * edge_count <= n * q
    dichotomy_ok = all(d == (q - 1 if v in fg.special else q) for v, d in enumerate(degrees))
    codegree_ok = max_codegree <= t - 1
    representatives_ok = _representatives_agree(fg, trials, seed)
    return FurediReport(
        q=q,
        t=t,
        vertex_count=n,
        vertex_count_ok=vertex_count_ok,
        edge_count=edge_count,
        edge_count_ok=edge_count_ok,
        degree_histogram=dict(sorted(Counter(degrees).items())),
        dichotomy_ok=dichotomy_ok,
        max_codegree=max_codegree,
        codegree_ok=codegree_ok,
        codegree_histogram=dict(sorted(codegrees.items())),
        pairs_at_t_minus_1=codegrees.get(t - 1, 0),
        nonadjacent_deviations=deviations,
        adjacent_special_max=adjacent_special_max,
        k2t_copies=k2t,
        k2t_free=k2t == 0,
        representatives_ok=representatives_ok,
        passed=vertex_count_ok and edge_count_ok and dichotomy_ok and codegree_ok and k2t == 0 and representatives_ok,
    )


def special_neighbors(fg: FurediGraph, v: int) -> list[int]:
    return [w for w in iter_bits(fg.graph.mask(v)) if w in fg.special]


def embedding_ratio(tree: Graph, fg: FurediGraph, jobs: int = 1) -> EmbeddingRatio:
    """Embeddings of ``tree`` in ``fg`` divided by (t-1)^((v-1)/2) N^((v+1)/2)."""
    v = tree.order
    n = fg.graph.order
    count = count_embeddings(tree, fg.graph, jobs=jobs).value
    predicted = (fg.t - 1) ** ((v - 1) / 2) * n ** ((v + 1) / 2)
    return EmbeddingRatio(
        q=fg.q,
        t=fg.t,
        vertex_count=n,
        tree_order=v,
        count=count,
        predicted=predicted,
        ratio=count / predicted,
    )
