"""CART trees grown level by level for whole ensembles at once

All trees of an ensemble share one pass per depth level: every (node,
candidate feature) pair is laid out as a segment of samples sorted by that
feature's presorted rank, and cumulative sums over the segments give the left
and right statistics of every possible split in a handful of vectorised numpy
operations. Bootstrap resampling is expressed through integer sample weights,
so the feature ranks are computed once per training matrix.

Split conventions: thresholds are midpoints between consecutive distinct
values (``x <= threshold`` goes left), the first best split wins (lowest
feature index, then lowest threshold), and a child must carry at least
``min_samples_leaf`` sample weight.
"""

__all__ = ["TreeArrays", "presort", "grow_forest", "DecisionTree", "fit_decision_tree"]

from collections.abc import Sequence

import equinox as eqx
import numpy as np

from kinemark.types import Array

CRITERIA = ("gini", "mse")

# Upper bound on the scratch draws held at once while sampling candidates
DRAW_BLOCK = 1 << 20


class TreeArrays(eqx.Module):
    """Flat node tables of one or more binary trees

    Node ``i`` is a leaf when ``feature[i] < 0``; otherwise samples with
    ``x[feature[i]] <= threshold[i]`` go to ``left[i]`` and the others to
    ``right[i]``. ``value`` holds the weighted mean target of each node and
    ``roots`` the root node of every tree.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    roots: np.ndarray

    @property
    def n_trees(self) -> int:
        return int(self.roots.shape[0])

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def apply(self, X: Array) -> np.ndarray:
        """The leaf reached by every sample in every tree, shape ``(n_trees, n)``"""
        X = np.asarray(X, dtype=np.float64)
        n = X.shape[0]
        node = np.repeat(self.roots[:, None], n, axis=1)
        rows = np.broadcast_to(np.arange(n), node.shape)
        while True:
            feature = self.feature[node]
            internal = feature >= 0
            if not internal.any():
                return node
            x = X[rows, np.maximum(feature, 0)]
            left = x <= self.threshold[node]
            step = np.where(left, self.left[node], self.right[node])
            node = np.where(internal, step, node)

    def values(self, X: Array) -> np.ndarray:
        return self.value[self.apply(X)]

    def state_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "roots": self.roots.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict) -> "TreeArrays":
        ints = {
            k: np.asarray(state[k], dtype=np.int64)
            for k in ("feature", "left", "right", "roots")
        }
        floats = {
            k: np.asarray(state[k], dtype=np.float64) for k in ("threshold", "value")
        }
        return cls(**ints, **floats)

    @classmethod
    def concatenate(cls, trees: Sequence["TreeArrays"]) -> "TreeArrays":
        offsets = np.cumsum([0] + [t.n_nodes for t in trees[:-1]])

        def shift(a, off):
            return np.where(a >= 0, a + off, a)

        return cls(
            feature=np.concatenate([t.feature for t in trees]),
            threshold=np.concatenate([t.threshold for t in trees]),
            left=np.concatenate([shift(t.left, o) for t, o in zip(trees, offsets)]),
            right=np.concatenate([shift(t.right, o) for t, o in zip(trees, offsets)]),
            value=np.concatenate([t.value for t in trees]),
            roots=np.concatenate([t.roots + o for t, o in zip(trees, offsets)]),
        )


def presort(X: Array) -> np.ndarray:
    """The rank of every sample within every feature column"""
    X = np.asarray(X, dtype=np.float64)
    order = np.argsort(X, axis=0, kind="stable")
    rank = np.empty_like(order)
    np.put_along_axis(rank, order, np.arange(X.shape[0])[:, None], axis=0)
    return rank


def sample_candidates(
    rng: np.random.Generator, n_nodes: int, p: int, m: int, block: int = DRAW_BLOCK
) -> np.ndarray:
    """Sorted indices of ``m`` distinct features out of ``p`` for every node

    Rows are drawn in blocks of at most ``block`` values. The generator
    yields the same stream either way, so the block size never changes the
    result.
    """
    rows = max(1, block // p)
    out = np.empty((n_nodes, m), dtype=np.intp)
    for start in range(0, n_nodes, rows):
        draws = rng.random((min(rows, n_nodes - start), p))
        picked = np.argpartition(draws, m - 1, axis=1)[:, :m]
        out[start : start + rows] = np.sort(picked, axis=1)
    return out


def _purity_score(w: np.ndarray, s: np.ndarray, criterion: str) -> np.ndarray:
    # Split gain is score(left) + score(right) - score(parent)
    safe = np.where(w > 0, w, 1.0)
    if criterion == "gini":
        return (s**2 + (w - s) ** 2) / safe
    return s**2 / safe


def grow_forest(
    X: Array,
    target: Array,
    weights: Array,
    *,
    criterion: str = "gini",
    max_depth: int = 8,
    min_samples_leaf: float = 1,
    max_features: int | None = None,
    rng: np.random.Generator | int | None = None,
    rank: np.ndarray | None = None,
) -> tuple[TreeArrays, np.ndarray]:
    """Grow one tree per row of ``weights``

    Args:
        X: Training matrix with shape ``(n, p)``
        target: Class labels in {0, 1} (``"gini"``) or regression targets
            (``"mse"``)
        weights: Non-negative sample weights with shape ``(n_trees, n)``;
            bootstrap multiplicities for a forest
        criterion: ``"gini"`` or ``"mse"``
        max_depth: Maximum depth of every tree
        min_samples_leaf: Minimum total weight of a child
        max_features: Number of features drawn (without replacement) as
            split candidates for every node; all features if ``None``
        rng: Generator or seed for the feature draws
        rank: The output of :func:`presort` for ``X``, if already computed

    Returns:
        The node tables and the impurity decrease credited to each feature by
        each tree, shape ``(n_trees, p)``
    """
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
    X = np.asarray(X, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    weights = np.atleast_2d(np.asarray(weights, dtype=np.float64))
    n, p = X.shape
    n_trees = weights.shape[0]
    m = p if max_features is None else int(min(max(1, max_features), p))
    rng = np.random.default_rng(rng)
    if rank is None:
        rank = presort(X)

    # One instance per (tree, sample) with positive weight
    tree_of, sample = np.nonzero(weights > 0)
    w = weights[tree_of, sample]
    t = target[sample]
    loc = tree_of.copy()

    importances = np.zeros((n_trees, p))
    levels: list[tuple[np.ndarray, ...]] = []
    base = 0
    count = n_trees
    node_tree = np.arange(n_trees)

    for depth in range(max_depth + 1):
        W = np.bincount(loc, w, minlength=count)
        S = np.bincount(loc, w * t, minlength=count)
        feature = np.full(count, -1)
        threshold = np.zeros(count)
        left = np.full(count, -1)
        right = np.full(count, -1)
        value = S / np.where(W > 0, W, 1.0)

        if criterion == "gini":
            impure = (S > 0) & (S < W)
        else:
            tmin = np.full(count, np.inf)
            tmax = np.full(count, -np.inf)
            np.minimum.at(tmin, loc, t)
            np.maximum.at(tmax, loc, t)
            impure = tmax > tmin
        active = np.flatnonzero(impure & (W >= 2 * min_samples_leaf))

        if depth == max_depth or active.size == 0:
            levels.append((feature, threshold, left, right, value))
            break

        n_active = active.size
        slot_of = np.full(count, -1)
        slot_of[active] = np.arange(n_active)
        members = np.flatnonzero(slot_of[loc] >= 0)
        owner = slot_of[loc[members]]

        if m == p:
            candidates = np.broadcast_to(np.arange(p), (n_active, p))
        else:
            candidates = sample_candidates(rng, n_active, p, m)

        # One segment per (node, candidate) pair, samples sorted by rank
        pair = (owner[:, None] * m + np.arange(m)[None, :]).ravel()
        inst = np.repeat(members, m)
        feat = candidates[owner].ravel()
        key = pair.astype(np.int64) * n + rank[sample[inst], feat]
        order = np.argsort(key)
        inst, feat = inst[order], feat[order]

        x = X[sample[inst], feat]
        cw = np.concatenate([[0.0], np.cumsum(w[inst])])
        cs = np.concatenate([[0.0], np.cumsum(w[inst] * t[inst])])
        sizes = np.repeat(np.bincount(owner, minlength=n_active), m)
        starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        first = np.repeat(starts, sizes)
        end = np.repeat(starts + sizes, sizes)
        e = np.arange(x.size)

        Lw, Ls = cw[e + 1] - cw[first], cs[e + 1] - cs[first]
        Gw, Gs = cw[end] - cw[first], cs[end] - cs[first]
        Rw, Rs = Gw - Lw, Gs - Ls
        nxt = np.minimum(e + 1, x.size - 1)
        valid = (
            (e + 1 < end)
            & (x[nxt] > x)
            & (Lw >= min_samples_leaf)
            & (Rw >= min_samples_leaf)
        )
        gain = (
            _purity_score(Lw, Ls, criterion)
            + _purity_score(Rw, Rs, criterion)
            - _purity_score(Gw, Gs, criterion)
        )
        gain = np.where(valid, gain, -np.inf)

        pair_best = np.maximum.reduceat(gain, starts)
        hit = valid & (gain == np.repeat(pair_best, sizes))
        pair_arg = np.minimum.reduceat(np.where(hit, e, x.size), starts)

        best = pair_best.reshape(n_active, m)
        node_best = best.max(axis=1)
        slot = np.argmin(np.where(best == node_best[:, None], candidates, p), axis=1)
        split = np.isfinite(node_best)
        if criterion == "mse":
            split &= node_best > 0

        chosen = pair_arg[np.arange(n_active) * m + slot][split]
        lo, hi = x[chosen], x[chosen + 1]
        mid = (lo + hi) / 2
        split_nodes = active[split]
        feature[split_nodes] = candidates[split, slot[split]]
        threshold[split_nodes] = np.where(mid < hi, mid, lo)
        np.add.at(
            importances,
            (node_tree[split_nodes], feature[split_nodes]),
            node_best[split],
        )

        n_split = split_nodes.size
        children = base + count + 2 * np.arange(n_split)
        left[split_nodes] = children
        right[split_nodes] = children + 1
        levels.append((feature, threshold, left, right, value))

        split_of = np.full(count, -1)
        split_of[split_nodes] = np.arange(n_split)
        keep = np.flatnonzero(split_of[loc] >= 0)
        tree_of, sample, w, t, loc = (a[keep] for a in (tree_of, sample, w, t, loc))
        goes_right = X[sample, feature[loc]] > threshold[loc]
        loc = 2 * split_of[loc] + goes_right

        node_tree = np.repeat(node_tree[split_nodes], 2)
        base += count
        count = 2 * n_split

    tables = TreeArrays(
        feature=np.concatenate([lv[0] for lv in levels]),
        threshold=np.concatenate([lv[1] for lv in levels]),
        left=np.concatenate([lv[2] for lv in levels]),
        right=np.concatenate([lv[3] for lv in levels]),
        value=np.concatenate([lv[4] for lv in levels]),
        roots=np.arange(n_trees),
    )
    return tables, importances


def normalize_importances(decrease: np.ndarray) -> np.ndarray:
    """Total impurity decrease per feature scaled to sum to 1 (uniform if zero)"""
    total_per_feature = np.atleast_2d(decrease).sum(axis=0)
    total = total_per_feature.sum()
    if total <= 0:
        return np.full(total_per_feature.shape, 1.0 / total_per_feature.size)
    return total_per_feature / total


class DecisionTree(eqx.Module):
    """A fitted CART classifier; the score is the class-1 fraction of the leaf"""

    tree: TreeArrays
    feature_importances: np.ndarray
    feature_names: tuple[str, ...] = eqx.field(static=True)
    kind: str = eqx.field(static=True, default="DecisionTree")
    threshold: float = eqx.field(static=True, default=0.5)

    def predict_score(self, X: Array) -> np.ndarray:
        return self.tree.values(X)[0]

    def decision_function(self, X: Array) -> np.ndarray:
        return self.predict_score(X)

    def state_dict(self) -> dict:
        return {
            "tree": self.tree.state_dict(),
            "feature_importances": self.feature_importances.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict, feature_names: Sequence[str]) -> "DecisionTree":
        return cls(
            tree=TreeArrays.from_state(state["tree"]),
            feature_importances=np.asarray(state["feature_importances"]),
            feature_names=tuple(feature_names),
        )


def fit_decision_tree(
    X: np.ndarray,
    y: np.ndarray,
    feature_names: Sequence[str],
    *,
    max_depth: int = 8,
    min_samples_leaf: int = 2,
) -> DecisionTree:
    tree, decrease = grow_forest(
        X,
        y,
        np.ones((1, X.shape[0])),
        criterion="gini",
        max_depth=max_depth,
        min_samples_leaf=min_samples_leaf,
    )
    return DecisionTree(
        tree=tree,
        feature_importances=normalize_importances(decrease),
        feature_names=tuple(feature_names),
    )
