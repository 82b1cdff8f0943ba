"""Greedy binary decision trees for classification and regression.

Splits are chosen exhaustively: every feature is scanned, candidate
thresholds are the midpoints between consecutive distinct sorted values, and
the split maximizing impurity decrease wins (Gini for classification,
variance for regression).  Ties go to the lowest feature index, then the
lowest threshold, which keeps induction fully deterministic.

The scan is vectorized across features.  A node with m rows and f candidate
features works on an (f, m) block of values sorted per feature; sweeping
cumulative target sums reduces the impurity decrease to maximizing
``h = s_left^2/n_left + s_right^2/n_right`` (and the analogous class-count
form).  Plain trees sort each feature once at the root and derive every
child's sorted block by a stable boolean extraction, so no re-sorting
happens below the root; bootstrapped trees (rows with repetition) sort per
node instead.  Scan temporaries live in per-thread workspaces owned by the
design matrix, and blocks above _FAST_CELLS run the sweep in float32 (the
cumulative sums are still exact there because targets are small integers;
only the squared terms round).
"""

from __future__ import annotations

import sys
import threading

import numpy as np

from ..errors import ConfigError
from .base import (
    BaseEstimator,
    check_classification_targets,
    check_fitted,
    check_matrix,
    check_regression_targets,
    check_vector_width,
)

# blocks with at least this many cells run the sweep in float32
_FAST_CELLS = 1 << 18

REGRESSION_MIN = 0.0
REGRESSION_MAX = 255.0


class PresortedDesign:
    """Read-only per-fit view of the attribute matrix.

    Holds the transposed copy used by the split scan, caches the root-node
    sort order (so training many models on the same matrix pays for it
    once), and hands out per-thread scratch buffers.
    """

    def __init__(self, X):
        self.X = check_matrix(X)
        self.XT = np.ascontiguousarray(self.X.T)
        self._root_order = None
        self._root_values = None
        self._tls = threading.local()

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def root_sort(self):
        if self._root_order is None:
            order = np.argsort(self.XT, axis=1, kind="stable")
            self._root_values = np.take_along_axis(self.XT, order, axis=1)
            self._root_order = order.astype(np.int32)
        return self._root_order, self._root_values

    def scratch(self, name: str, count: int, dtype) -> np.ndarray:
        """Reusable flat buffer, valid until the same name is requested again."""
        buffers = getattr(self._tls, "buffers", None)
        if buffers is None:
            buffers = {}
            self._tls.buffers = buffers
        key = (name, np.dtype(dtype).str)
        buf = buffers.get(key)
        if buf is None or buf.size < count:
            size = max(count, self.d * max(self.n, 2))
            buf = np.empty(size, dtype=dtype)
            buffers[key] = buf
        return buf[:count]


class Tree:
    """Fitted tree as flat preorder arrays; leaves have feature index -1."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature, threshold, left, right, value):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.value = value

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int32)
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                depths[self.left[i]] = depths[i] + 1
                depths[self.right[i]] = depths[i] + 1
        return int(depths.max(initial=0))

    def predict(self, X: np.ndarray) -> np.ndarray:
        idx = np.zeros(X.shape[0], dtype=np.int64)
        feats = self.feature[idx]
        while True:
            active = np.nonzero(feats >= 0)[0]
            if active.size == 0:
                break
            node = idx[active]
            xv = X[active, feats[active]]
            go_left = xv <= self.threshold[node]
            idx[active] = np.where(go_left, self.left[node], self.right[node])
            feats = self.feature[idx]
        return self.value[idx]


class _Builder:
    def __init__(self, design, y, classification, max_depth, rng=None, n_split_features=None):
        self.design = design
        self.classification = classification
        self.depth_cap = np.inf if max_depth is None else max_depth
        self.rng = rng
        self.n_split_features = n_split_features
        self.y64 = np.asarray(y, dtype=np.float64)
        self._y32 = None
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 512 + 4 * design.n))

    def y_as(self, dtype):
        if dtype is np.float64:
            return self.y64
        if self._y32 is None:
            self._y32 = self.y64.astype(np.float32)
        return self._y32

    def build(self) -> Tree:
        return Tree(
            np.asarray(self.feature, dtype=np.int32),
            np.asarray(self.threshold, dtype=np.float64),
            np.asarray(self.left, dtype=np.int32),
            np.asarray(self.right, dtype=np.int32),
            np.asarray(self.value, dtype=np.float64),
        )

    def _emit_leaf(self, y_node) -> int:
        if self.classification:
            val = 1.0 if 2 * y_node.sum() > y_node.size else 0.0
        else:
            val = float(y_node.mean())
        idx = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(val)
        return idx

    def _emit_split(self) -> int:
        idx = len(self.feature)
        self.feature.append(0)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return idx

    # --- shared gain sweep ---------------------------------------------------
    # sv: (f, m) per-feature sorted values; y_sorted supplies targets in the
    # same order via `take(y_src, order)`.  Returns (local row, position,
    # threshold) of the accepted best split, or None.

    def _scan(self, sv, order, y_src, total, m):
        f = sv.shape[0]
        dtype = np.float32 if f * m >= _FAST_CELLS else np.float64
        ws = self.design.scratch
        acc = ws("acc", f * m, dtype).reshape(f, m)
        np.take(self.y_as(dtype) if y_src is None else y_src.astype(dtype, copy=False), order, out=acc)
        np.cumsum(acc, axis=1, out=acc)
        sl = acc[:, : m - 1]
        n_left = np.arange(1, m, dtype=dtype)
        inv_left = 1.0 / n_left
        inv_right = 1.0 / (m - n_left)
        t = dtype(total)
        b2 = ws("b2", f * (m - 1), dtype).reshape(f, m - 1)
        np.subtract(t, sl, out=b2)  # right sums (or right one-counts)
        if self.classification:
            b3 = ws("b3", f * (m - 1), dtype).reshape(f, m - 1)
            np.subtract(n_left, sl, out=b3)  # left zero-counts
            np.multiply(b3, b3, out=b3)
            np.multiply(sl, sl, out=sl)
            sl += b3
            sl *= inv_left
            np.subtract(m - n_left, b2, out=b3)  # right zero-counts
            np.multiply(b3, b3, out=b3)
            np.multiply(b2, b2, out=b2)
            b2 += b3
            b2 *= inv_right
            sl += b2
        else:
            np.multiply(sl, sl, out=sl)
            sl *= inv_left
            np.multiply(b2, b2, out=b2)
            b2 *= inv_right
            sl += b2
        eq = ws("eq", f * (m - 1), np.bool_).reshape(f, m - 1)
        np.equal(sv[:, : m - 1], sv[:, 1:m], out=eq)
        np.copyto(sl, -np.inf, where=eq)
        flat = int(np.argmax(sl))
        row, pos = divmod(flat, m - 1)
        # an impure node splits whenever any candidate exists, even at zero
        # gain; only a node whose candidate features are all constant stops
        if np.isinf(sl[row, pos]):
            return None
        thr = (float(sv[row, pos]) + float(sv[row, pos + 1])) / 2.0
        return row, pos, thr

    # --- plain mode: member masks + stable extraction from the root sort ----

    def grow_plain(self) -> Tree:
        order, sv = self.design.root_sort()
        member = np.ones(self.design.n, dtype=bool)
        self._grow_plain(member, order, sv, 0)
        return self.build()

    def _grow_plain(self, member, order, sv, depth) -> int:
        y_node = self.y64[member]
        m = y_node.size
        if depth >= self.depth_cap or m <= 1 or y_node.min() == y_node.max():
            return self._emit_leaf(y_node)
        found = self._scan(sv, order, None, float(y_node.sum()), m)
        if found is None:
            return self._emit_leaf(y_node)
        feat, _, thr = found
        left_member = member & (self.design.XT[feat] <= thr)
        right_member = member ^ left_member
        idx = self._emit_split()
        self.feature[idx] = feat
        self.threshold[idx] = thr
        # order holds exactly the parent's rows, so the right mask is the
        # negation of the left one; keep is only materialized for children
        # that actually recurse
        keep = None
        for child_member, is_left in ((left_member, True), (right_member, False)):
            y_child = self.y64[child_member]
            m_child = y_child.size
            if depth + 1 >= self.depth_cap or m_child <= 1 or y_child.min() == y_child.max():
                child = self._emit_leaf(y_child)
            else:
                if keep is None:
                    keep = left_member[order]
                mask = keep if is_left else ~keep
                child = self._grow_plain(
                    child_member,
                    order[mask].reshape(-1, m_child),
                    sv[mask].reshape(-1, m_child),
                    depth + 1,
                )
            if is_left:
                self.left[idx] = child
            else:
                self.right[idx] = child
        return idx

    # --- bootstrap mode: explicit row lists, per-node sort, feature sampling -

    def grow_bootstrap(self, rows) -> Tree:
        self._grow_bootstrap(np.asarray(rows, dtype=np.int64), 0)
        return self.build()

    def _grow_bootstrap(self, rows, depth) -> int:
        y_node = self.y64[rows]
        m = rows.size
        if depth >= self.depth_cap or m <= 1 or y_node.min() == y_node.max():
            return self._emit_leaf(y_node)
        d = self.design.d
        if self.n_split_features is not None and self.n_split_features < d:
            feats = self.rng.sample_distinct(self.n_split_features, d)
            sub = self.design.XT[np.ix_(feats, rows)]
        else:
            feats = None
            sub = self.design.XT[:, rows]
        local = np.argsort(sub, axis=1, kind="stable")
        sv = np.take_along_axis(sub, local, axis=1)
        found = self._scan(sv, local, y_node, float(y_node.sum()), m)
        if found is None:
            return self._emit_leaf(y_node)
        row, _, thr = found
        feat = int(row if feats is None else feats[row])
        idx = self._emit_split()
        self.feature[idx] = feat
        self.threshold[idx] = thr
        go_left = self.design.XT[feat, rows] <= thr
        self.left[idx] = self._grow_bootstrap(rows[go_left], depth + 1)
        self.right[idx] = self._grow_bootstrap(rows[~go_left], depth + 1)
        return idx


def grow_tree(
    design: PresortedDesign,
    y: np.ndarray,
    classification: bool,
    max_depth,
    rows: np.ndarray | None = None,
    rng=None,
    n_split_features: int | None = None,
) -> Tree:
    """Build one tree; ``rows``/``rng``/``n_split_features`` select bootstrap mode."""
    builder = _Builder(design, y, classification, max_depth, rng, n_split_features)
    if rows is None and n_split_features is None:
        return builder.grow_plain()
    if rows is None:
        rows = np.arange(design.n, dtype=np.int64)
    return builder.grow_bootstrap(rows)


def split_impurity_decrease(X, y, classification: bool):
    """Impurity decrease of the best root split, or 0.0 when no split helps.

    Exposed for verification: this is the same quantity the greedy builder
    maximizes, converted to the conventional per-sample impurity scale.
    """
    design = PresortedDesign(X)
    y64 = np.asarray(y, dtype=np.float64)
    builder = _Builder(design, y64, classification, max_depth=1)
    order, sv = design.root_sort()
    if y64.size <= 1 or y64.min() == y64.max():
        return 0.0, None
    found = builder._scan(sv, order, None, float(y64.sum()), design.n)
    if found is None:
        return 0.0, None
    feat, _, thr = found
    go_left = design.XT[feat] <= thr
    m = design.n
    if classification:
        imp = _gini(y64)
        child = (go_left.sum() * _gini(y64[go_left]) + (~go_left).sum() * _gini(y64[~go_left])) / m
    else:
        imp = y64.var()
        child = (go_left.sum() * y64[go_left].var() + (~go_left).sum() * y64[~go_left].var()) / m
    return float(imp - child), (int(feat), thr)


def _gini(y):
    if y.size == 0:
        return 0.0
    p = y.mean()
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def _validate_max_depth(max_depth):
    if max_depth is not None and (not isinstance(max_depth, (int, np.integer)) or max_depth < 1):
        raise ConfigError(f"max_depth must be None or a positive integer, got {max_depth!r}")


class DecisionTreeClassifier(BaseEstimator):
    """Binary classifier tree; deterministic, so random_state is accepted but unused.

    Parameters
    ----------
    max_depth : int or None
        Maximum number of split levels (None grows until nodes are pure or
        out of usable splits).
    """

    _estimator_type = "classifier"

    def __init__(self, max_depth=None, random_state: int = 0):
        self.max_depth = max_depth
        self.random_state = random_state

    def fit(self, X, y) -> "DecisionTreeClassifier":
        return self._fit_design(PresortedDesign(X), y)

    def _fit_design(self, design: PresortedDesign, y) -> "DecisionTreeClassifier":
        _validate_max_depth(self.max_depth)
        y = check_classification_targets(y, design.n)
        self.n_features_ = design.d
        self.tree_ = grow_tree(design, y, True, self.max_depth)
        return self

    def predict(self, X) -> np.ndarray:
        check_fitted(self, "tree_")
        X = check_vector_width(X, self.n_features_)
        return self.tree_.predict(X).astype(np.uint8)


class DecisionTreeRegressor(BaseEstimator):
    """Regression tree with mean leaves; predictions are clamped to [0, 255]."""

    _estimator_type = "regressor"

    def __init__(self, max_depth=None, random_state: int = 0):
        self.max_depth = max_depth
        self.random_state = random_state

    def fit(self, X, y) -> "DecisionTreeRegressor":
        return self._fit_design(PresortedDesign(X), y)

    def _fit_design(self, design: PresortedDesign, y) -> "DecisionTreeRegressor":
        _validate_max_depth(self.max_depth)
        y = check_regression_targets(y, design.n)
        self.n_features_ = design.d
        self.tree_ = grow_tree(design, y, False, self.max_depth)
        return self

    def predict(self, X) -> np.ndarray:
        check_fitted(self, "tree_")
        X = check_vector_width(X, self.n_features_)
        return np.clip(self.tree_.predict(X), REGRESSION_MIN, REGRESSION_MAX)
