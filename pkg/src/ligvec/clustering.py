"""Graph clustering over similarity matrices.

transclust() solves the threshold-based cluster-editing problem with a
deterministic local search, mcl() runs Markov clustering with expansion,
inflation and pruning.  Both return a true partition of the matrix's
entity ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus_io import SimilarityMatrix

# minimum cost improvement accepted by the local search; guards against
# float noise flipping move decisions
COST_EPS = 1e-12


class ConvergenceError(RuntimeError):
    """MCL hit the iteration cap; residual holds the last max |delta|."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass
class Clustering:
    """An ordered partition: disjoint non-empty clusters covering the
    input id set."""

    clusters: list[set[str]]

    def __post_init__(self):
        seen: set[str] = set()
        for i, members in enumerate(self.clusters):
            if not members:
                raise ValueError(f"cluster {i} is empty")
            overlap = seen & members
            if overlap:
                raise ValueError(f"cluster {i} overlaps earlier clusters on {sorted(overlap)}")
            seen |= members

    def ids(self) -> set[str]:
        out: set[str] = set()
        for members in self.clusters:
            out |= members
        return out

    def __len__(self) -> int:
        return len(self.clusters)


@dataclass(frozen=True)
class MclConfig:
    inflation: float = 2.0
    expansion: int = 2
    pruning: float = 1e-5
    max_iterations: int = 200
    epsilon: float = 1e-9
    self_loop: str = "max"  # 'max': max incident similarity (1 if isolated); 'unit': 1.0

    def validate(self) -> None:
        if self.inflation < 1.0:
            raise ValueError(f"inflation must be >= 1 (> 1 for clustering), got {self.inflation}")
        if self.expansion < 1:
            raise ValueError(f"expansion must be >= 1, got {self.expansion}")
        if not 0.0 <= self.pruning < 1.0:
            raise ValueError(f"pruning must be in [0, 1), got {self.pruning}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.self_loop not in ("max", "unit"):
            raise ValueError(f"self_loop must be 'max' or 'unit', got {self.self_loop!r}")


@dataclass
class ClusterStats:
    n_clusters: int
    size_histogram: dict[int, int] = field(default_factory=dict)


def cluster_stats(clustering: Clustering) -> ClusterStats:
    """Cluster count and size histogram (size -> number of clusters)."""
    hist: dict[int, int] = {}
    for members in clustering.clusters:
        hist[len(members)] = hist.get(len(members), 0) + 1
    return ClusterStats(len(clustering.clusters), dict(sorted(hist.items())))


def _dense_scores(matrix: SimilarityMatrix) -> tuple[list[str], np.ndarray]:
    """Entity ids (sorted) and a dense symmetric score array; missing pairs
    score 0, the diagonal is ignored by all uses."""
    ids = matrix.ids()
    if not ids:
        raise ValueError("empty similarity matrix")
    index = {e: i for i, e in enumerate(ids)}
    dense = np.zeros((len(ids), len(ids)))
    for (a, b), s in matrix.scores.items():
        i, j = index[a], index[b]
        if i != j:
            dense[i, j] = dense[j, i] = s
    return ids, dense


# ---------------------------------------------------------------------------
# cluster editing (TransClust-style)
# ---------------------------------------------------------------------------


def editing_cost(matrix: SimilarityMatrix, clustering: Clustering, threshold: float) -> float:
    """Cost of a partition under the editing objective: within-cluster
    pairs below the threshold pay (t - s), cross-cluster pairs above it
    pay (s - t)."""
    ids, dense = _dense_scores(matrix)
    index = {e: i for i, e in enumerate(ids)}
    member = {}
    for ci, members in enumerate(clustering.clusters):
        for m in members:
            member[index[m]] = ci
    n = len(ids)
    cost = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            s = dense[i, j]
            if member[i] == member[j]:
                cost += max(0.0, threshold - s)
            else:
                cost += max(0.0, s - threshold)
    return cost


def _components(adjacent: np.ndarray) -> list[list[int]]:
    """Connected components of a boolean adjacency matrix, each sorted,
    ordered by smallest member."""
    n = adjacent.shape[0]
    seen = np.zeros(n, dtype=bool)
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in np.flatnonzero(adjacent[v]):
                if not seen[u]:
                    seen[u] = True
                    stack.append(int(u))
        comps.append(sorted(comp))
    return comps


class _EditingSearch:
    """Deterministic local search over partitions for the editing cost.

    Moves, scanned in ascending index order with best-improvement target
    selection: single-vertex relocation (including extraction into a new
    singleton), relocation of a co-clustered vertex pair (into an existing
    cluster or a new one, which splits a cluster in one step), swap of two
    vertices between clusters, and whole-cluster merges.  Vertex, pair and
    swap moves need strict cost decreases; merges also accept cost ties,
    which biases results toward fewer clusters.

    The search restarts from several deterministic seed partitions and
    keeps the lowest-cost result; on small instances it additionally
    escapes local optima by re-polishing after forced merges and forced
    vertex relocations.
    """

    # instances up to this size get the multi-seed + kick treatment; the
    # deepening is super-cubic and only small matrices need optimal costs
    DEEP_SEARCH_LIMIT = 16

    def __init__(self, dense: np.ndarray, threshold: float):
        n = dense.shape[0]
        self.n = n
        # in_cost[i,j]: price of keeping i,j together; out_cost: of separating
        self.in_cost = np.maximum(0.0, threshold - dense)
        self.out_cost = np.maximum(0.0, dense - threshold)
        np.fill_diagonal(self.in_cost, 0.0)
        np.fill_diagonal(self.out_cost, 0.0)
        self.adjacent = dense > threshold

    # -- seed partitions ----------------------------------------------------

    def _seed_components(self) -> np.ndarray:
        member = np.zeros(self.n, dtype=np.int64)
        for ci, comp in enumerate(_components(self.adjacent)):
            for v in comp:
                member[v] = ci
        return member

    def _seed_singletons(self) -> np.ndarray:
        return np.arange(self.n, dtype=np.int64)

    def _seed_agglomerative(self) -> np.ndarray:
        """Greedy best-merge agglomeration from singletons."""
        member = self._seed_singletons()
        k = self.n
        while k > 1:
            groups = [np.flatnonzero(member == c) for c in range(k)]
            best_delta, best_pair = -COST_EPS, None
            for a in range(k):
                for b in range(a + 1, k):
                    block = np.ix_(groups[a], groups[b])
                    delta = float(self.in_cost[block].sum() - self.out_cost[block].sum())
                    if delta < best_delta:
                        best_delta, best_pair = delta, (a, b)
            if best_pair is None:
                break
            a, b = best_pair
            member[member == b] = a
            member[member > b] -= 1
            k -= 1
        return member

    # -- bookkeeping ---------------------------------------------------------

    @staticmethod
    def _k(member: np.ndarray) -> int:
        return int(member.max()) + 1

    @staticmethod
    def _relabel(member: np.ndarray) -> np.ndarray:
        """Compact cluster labels to 0..k-1 in order of first appearance."""
        mapping: dict[int, int] = {}
        out = np.empty_like(member)
        for i, c in enumerate(member):
            mapping.setdefault(int(c), len(mapping))
            out[i] = mapping[int(c)]
        return out

    def cost(self, member: np.ndarray) -> float:
        same = member[:, None] == member[None, :]
        triu = np.triu_indices(self.n, 1)
        return float(np.where(same, self.in_cost, self.out_cost)[triu].sum())

    # -- passes ---------------------------------------------------------------

    def _vertex_pass(self, member: np.ndarray) -> tuple[np.ndarray, bool]:
        moved = False
        for v in range(self.n):
            k = self._k(member)
            src = int(member[v])
            in_sums = np.bincount(member, weights=self.in_cost[v], minlength=k)
            out_sums = np.bincount(member, weights=self.out_cost[v], minlength=k)
            leave = out_sums[src] - in_sums[src]
            deltas = leave + in_sums - out_sums
            deltas[src] = 0.0
            best_dst = int(np.argmin(deltas))
            best = float(deltas[best_dst])
            if np.count_nonzero(member == src) > 1 and leave < best:
                best_dst, best = k, float(leave)  # new singleton
            if best < -COST_EPS:
                member[v] = best_dst
                member = self._relabel(member)
                moved = True
        return member, moved

    def _pair_pass(self, member: np.ndarray) -> tuple[np.ndarray, bool]:
        moved = False
        for u in range(self.n):
            for v in range(u + 1, self.n):
                src = int(member[u])
                if member[v] != src:
                    continue
                rest = member == src
                rest[u] = rest[v] = False
                if not np.any(rest):
                    continue  # moving the whole cluster is a no-op
                k = self._k(member)
                leave = float(
                    (self.out_cost[u, rest] - self.in_cost[u, rest]).sum()
                    + (self.out_cost[v, rest] - self.in_cost[v, rest]).sum()
                )
                join = np.bincount(
                    member, weights=self.in_cost[u] + self.in_cost[v], minlength=k
                ) - np.bincount(member, weights=self.out_cost[u] + self.out_cost[v], minlength=k)
                join[src] = np.inf
                best_dst = int(np.argmin(join))
                best = leave + float(join[best_dst])
                if leave < best:
                    best_dst, best = k, leave  # extract to a new cluster
                if best < -COST_EPS:
                    member[u] = member[v] = best_dst
                    member = self._relabel(member)
                    moved = True
        return member, moved

    def _swap_pass(self, member: np.ndarray) -> tuple[np.ndarray, bool]:
        moved = False
        for u in range(self.n):
            for v in range(u + 1, self.n):
                a, b = int(member[u]), int(member[v])
                if a == b:
                    continue
                in_a = member == a
                in_b = member == b
                in_a[u] = in_b[v] = False
                delta = float(
                    (self.out_cost[u, in_a] - self.in_cost[u, in_a]).sum()
                    + (self.in_cost[u, in_b] - self.out_cost[u, in_b]).sum()
                    + (self.out_cost[v, in_b] - self.in_cost[v, in_b]).sum()
                    + (self.in_cost[v, in_a] - self.out_cost[v, in_a]).sum()
                )
                if delta < -COST_EPS:
                    member[u], member[v] = b, a
                    moved = True
        return member, moved

    def _merge_pass(self, member: np.ndarray) -> tuple[np.ndarray, bool]:
        merged_any = False
        changed = True
        while changed:
            changed = False
            k = self._k(member)
            groups = [np.flatnonzero(member == c) for c in range(k)]
            for a in range(k):
                for b in range(a + 1, k):
                    block = np.ix_(groups[a], groups[b])
                    delta = float(self.in_cost[block].sum() - self.out_cost[block].sum())
                    if delta < COST_EPS:  # strict improvements and cost ties
                        member[member == b] = a
                        member = self._relabel(member)
                        changed = merged_any = True
                        break
                if changed:
                    break
        return member, merged_any

    def _polish(self, member: np.ndarray, deep: bool) -> np.ndarray:
        while True:
            changed = True
            while changed:
                member, m1 = self._vertex_pass(member)
                m2 = m3 = False
                if deep:
                    member, m2 = self._pair_pass(member)
                    member, m3 = self._swap_pass(member)
                changed = m1 or m2 or m3
            member, merged = self._merge_pass(member)
            if not merged:
                return member

    def _kick_rounds(self, member: np.ndarray) -> np.ndarray:
        """Escape local optima: force a merge or a vertex relocation, then
        re-polish; adopt strictly better results until none appear."""
        best_cost = self.cost(member)
        improved = True
        while improved:
            improved = False
            k = self._k(member)
            for a in range(k):
                for b in range(a + 1, k):
                    trial = member.copy()
                    trial[trial == b] = a
                    trial = self._polish(self._relabel(trial), deep=True)
                    trial_cost = self.cost(trial)
                    if trial_cost < best_cost - COST_EPS:
                        member, best_cost, improved = trial, trial_cost, True
                        break
                if improved:
                    break
            if improved:
                continue
            for v in range(self.n):
                for dst in range(self._k(member) + 1):
                    if dst == member[v]:
                        continue
                    trial = member.copy()
                    trial[v] = dst
                    trial = self._polish(self._relabel(trial), deep=True)
                    trial_cost = self.cost(trial)
                    if trial_cost < best_cost - COST_EPS:
                        member, best_cost, improved = trial, trial_cost, True
                        break
                if improved:
                    break
        return member

    def run(self) -> list[list[int]]:
        deep = self.n <= self.DEEP_SEARCH_LIMIT
        seeds = [self._seed_components(), self._seed_singletons()]
        if deep:
            seeds.append(self._seed_agglomerative())
        best_member, best_cost = None, np.inf
        for seed in seeds:
            member = self._polish(self._relabel(seed), deep)
            c = self.cost(member)
            if c < best_cost - COST_EPS or (
                abs(c - best_cost) <= COST_EPS and self._k(member) < self._k(best_member)
            ):
                best_member, best_cost = member, c
        if deep:
            best_member = self._kick_rounds(best_member)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(int(best_member[v]), []).append(v)
        return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def transclust(matrix: SimilarityMatrix, threshold: float) -> Clustering:
    """Cluster editing with a user threshold.

    The threshold graph's connected components (plus further deterministic
    seeds) start a local search that descends on the editing cost until no
    improving move remains; see _EditingSearch for the move set.  The
    matrix must be oriented higher-is-more-similar; negate distance-like
    scores (and the threshold) before calling.
    """
    if matrix.orientation != "similarity":
        raise ValueError("transclust needs a similarity-oriented matrix; negate distances first")
    ids, dense = _dense_scores(matrix)
    groups = _EditingSearch(dense, threshold).run()
    return Clustering([{ids[v] for v in group} for group in groups])


# ---------------------------------------------------------------------------
# Markov clustering
# ---------------------------------------------------------------------------


@dataclass
class MclFlowResult:
    flow: np.ndarray
    iterations: int
    residual: float
    colsum_errors: list[float]  # max |column sum - 1| after each inflation


def _normalize_columns(m: np.ndarray) -> np.ndarray:
    sums = m.sum(axis=0)
    if np.any(sums <= 0.0):
        raise ValueError("column with no positive mass during normalization")
    return m / sums


def mcl_flow(matrix: SimilarityMatrix, config: MclConfig | None = None) -> MclFlowResult:
    """Iterate expansion / inflation / pruning on the column-stochastic
    flow matrix until the max entry change drops below epsilon."""
    config = config or MclConfig()
    config.validate()
    ids, dense = _dense_scores(matrix)
    if np.any(dense < 0.0):
        raise ValueError("mcl requires nonnegative similarities")
    n = len(ids)
    if config.self_loop == "unit":
        loops = np.ones(n)
    else:
        incident = dense.max(axis=0) if n > 1 else np.zeros(n)
        loops = np.where(incident > 0.0, incident, 1.0)
    m = dense.copy()
    np.fill_diagonal(m, loops)
    m = _normalize_columns(m)

    colsum_errors: list[float] = []
    residual = np.inf
    for iteration in range(1, config.max_iterations + 1):
        prev = m
        m = np.linalg.matrix_power(m, config.expansion)
        m = _normalize_columns(np.power(m, config.inflation))
        colsum_errors.append(float(np.abs(m.sum(axis=0) - 1.0).max()))
        if config.pruning > 0.0:
            keep = m >= config.pruning
            keep[m.argmax(axis=0), np.arange(n)] = True  # never prune a column's best entry
            pruned = np.where(keep, m, 0.0)
            if not np.array_equal(pruned, m):
                m = _normalize_columns(pruned)
                colsum_errors[-1] = max(colsum_errors[-1], float(np.abs(m.sum(axis=0) - 1.0).max()))
        residual = float(np.abs(m - prev).max())
        if residual < config.epsilon:
            return MclFlowResult(m, iteration, residual, colsum_errors)
    raise ConvergenceError(
        f"mcl did not converge in {config.max_iterations} iterations (residual {residual:g})",
        residual,
    )


def mcl(matrix: SimilarityMatrix, config: MclConfig | None = None) -> Clustering:
    """Markov clustering: attractors are nodes with flow >= epsilon on
    their own column; attractor systems connected by flow form the
    clusters, and every node joins the cluster of its largest-flow
    attractor (ties to the smallest id)."""
    return mcl_with_flow(matrix, config)[0]


def mcl_with_flow(
    matrix: SimilarityMatrix, config: MclConfig | None = None
) -> tuple[Clustering, MclFlowResult]:
    """mcl() plus the converged flow diagnostics, computed once."""
    config = config or MclConfig()
    ids, _ = _dense_scores(matrix)
    result = mcl_flow(matrix, config)
    flow = result.flow
    n = len(ids)
    eps = config.epsilon
    attractors = [i for i in range(n) if flow[i, i] >= eps]
    if not attractors:
        attractors = sorted(set(int(flow[:, j].argmax()) for j in range(n)))
    # connected components over attractors linked by mutual flow
    adj = np.zeros((len(attractors), len(attractors)), dtype=bool)
    for x, a in enumerate(attractors):
        for y, b in enumerate(attractors):
            if x != y and (flow[a, b] >= eps or flow[b, a] >= eps):
                adj[x, y] = True
    comp_of_attractor: dict[int, int] = {}
    for ci, comp in enumerate(_components(adj)):
        for k in comp:
            comp_of_attractor[attractors[k]] = ci
    n_comps = len(set(comp_of_attractor.values()))

    clusters: dict[int, set[str]] = {}
    for j in range(n):
        inflows = [(float(flow[a, j]), a) for a in attractors if flow[a, j] >= eps]
        if inflows:
            best_flow = max(f for f, _ in inflows)
            a = min(a for f, a in inflows if f == best_flow)
            label = comp_of_attractor[a]
        else:
            label = n_comps + j  # isolated column: its own singleton
        clusters.setdefault(label, set()).add(ids[j])
    ordered = sorted(clusters.values(), key=lambda members: min(members))
    return Clustering(ordered), result


# ---------------------------------------------------------------------------
# orientation adapters
# ---------------------------------------------------------------------------


def as_transclust_input(matrix: SimilarityMatrix) -> SimilarityMatrix:
    """Negate distance-like scores so larger means more similar; the
    sweep threshold must be negated to match."""
    if matrix.orientation == "similarity":
        return matrix
    return SimilarityMatrix({p: -s for p, s in matrix.scores.items()}, orientation="similarity")


def as_mcl_input(matrix: SimilarityMatrix, clip_negative: bool = False) -> SimilarityMatrix:
    """Shift distance-like scores to nonnegative similarities
    (max - value); optionally clip negative similarity scores at 0 (e.g.
    cosine similarities that dip below zero)."""
    if matrix.orientation == "distance":
        top = max(matrix.scores.values())
        return SimilarityMatrix({p: top - s for p, s in matrix.scores.items()}, orientation="similarity")
    if clip_negative:
        return SimilarityMatrix(
            {p: max(0.0, s) for p, s in matrix.scores.items()}, orientation="similarity"
        )
    return matrix
