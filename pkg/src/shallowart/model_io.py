"""Binary container for trained completers.

Layout (all integers little-endian):

    magic       4 bytes  b"SAWM"
    version     u32      currently 1
    width       u32
    height      u32
    encoding    u8       0 = BW, 1 = RGB
    kind        u8       0 = tree, 1 = forest, 2 = perceptron, 3 = linear SVM
    task        u8       0 = classification, 1 = regression
    max_depth   i32      -1 means unbounded
    n_trees     u32
    epochs      u32
    reg_lambda  f64
    base_seed   u64
    L           u32      output count
    L x [payload_len u32][payload]   in output-index order

Tree payloads are a node count followed by preorder records
(leaf flag u8, feature u32, threshold f64, value f64); forest payloads
prefix a tree count; linear payloads are d+1 f64 values (weights, bias).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import (
    BadMagicError,
    ModelFormatError,
    NotFittedError,
    TruncatedModelError,
    UnsupportedVersionError,
)
from .image import Encoding, ImageSpec
from .learners.forest import RandomForestClassifier, RandomForestRegressor
from .learners.linear import LinearSVM, Perceptron
from .learners.tree import DecisionTreeClassifier, DecisionTreeRegressor, Tree
from .rng import mix64
from .wrapper import ImageCompleter

MAGIC = b"SAWM"
FORMAT_VERSION = 1

_KIND_TREE = 0
_KIND_FOREST = 1
_KIND_PERCEPTRON = 2
_KIND_SVM = 3

_TASK_CLASSIFICATION = 0
_TASK_REGRESSION = 1

_HEADER = struct.Struct("<4sIIIBBBiIIdQI")
_NODE = struct.Struct("<BIdd")

_ENCODING_IDS = {Encoding.BW: 0, Encoding.RGB: 1}
_ENCODINGS = {v: k for k, v in _ENCODING_IDS.items()}


def _estimator_ids(estimator) -> tuple:
    table = {
        DecisionTreeClassifier: (_KIND_TREE, _TASK_CLASSIFICATION),
        DecisionTreeRegressor: (_KIND_TREE, _TASK_REGRESSION),
        RandomForestClassifier: (_KIND_FOREST, _TASK_CLASSIFICATION),
        RandomForestRegressor: (_KIND_FOREST, _TASK_REGRESSION),
        Perceptron: (_KIND_PERCEPTRON, _TASK_CLASSIFICATION),
        LinearSVM: (_KIND_SVM, _TASK_CLASSIFICATION),
    }
    try:
        return table[type(estimator)]
    except KeyError:
        raise ModelFormatError(f"cannot serialize estimator type {type(estimator).__name__}") from None


def _build_prototype(kind: int, task: int, max_depth, n_trees: int, epochs: int, reg_lambda: float):
    if kind == _KIND_TREE:
        cls = DecisionTreeClassifier if task == _TASK_CLASSIFICATION else DecisionTreeRegressor
        return cls(max_depth=max_depth)
    if kind == _KIND_FOREST:
        cls = RandomForestClassifier if task == _TASK_CLASSIFICATION else RandomForestRegressor
        return cls(n_trees=n_trees, max_depth=max_depth)
    if kind == _KIND_PERCEPTRON and task == _TASK_CLASSIFICATION:
        return Perceptron(epochs=epochs)
    if kind == _KIND_SVM and task == _TASK_CLASSIFICATION:
        return LinearSVM(reg_lambda=reg_lambda, epochs=epochs)
    raise ModelFormatError(f"unknown learner kind/task pair ({kind}, {task})")


def _pack_tree(tree: Tree) -> bytes:
    out = bytearray(struct.pack("<I", tree.n_nodes))
    for i in range(tree.n_nodes):
        leaf = tree.feature[i] < 0
        out += _NODE.pack(
            1 if leaf else 0,
            0 if leaf else int(tree.feature[i]),
            0.0 if leaf else float(tree.threshold[i]),
            float(tree.value[i]),
        )
    return bytes(out)


def _pack_model(model) -> bytes:
    if isinstance(model, (DecisionTreeClassifier, DecisionTreeRegressor)):
        return _pack_tree(model.tree_)
    if isinstance(model, (RandomForestClassifier, RandomForestRegressor)):
        out = bytearray(struct.pack("<I", len(model.trees_)))
        for tree in model.trees_:
            out += _pack_tree(tree)
        return bytes(out)
    payload = np.append(model.weights_, model.bias_).astype("<f8")
    return payload.tobytes()


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, count: int) -> bytes:
        if self.pos + count > len(self.data):
            raise TruncatedModelError(
                f"container ended at byte {len(self.data)} while reading {count} bytes at offset {self.pos}"
            )
        chunk = self.data[self.pos : self.pos + count]
        self.pos += count
        return chunk

    def unpack(self, fmt: struct.Struct):
        return fmt.unpack(self.take(fmt.size))


def _unpack_tree(reader: _Reader) -> Tree:
    (n_nodes,) = reader.unpack(struct.Struct("<I"))
    if n_nodes < 1:
        raise ModelFormatError("tree payload declares zero nodes")
    feature = np.empty(n_nodes, dtype=np.int32)
    threshold = np.empty(n_nodes, dtype=np.float64)
    left = np.full(n_nodes, -1, dtype=np.int32)
    right = np.full(n_nodes, -1, dtype=np.int32)
    value = np.empty(n_nodes, dtype=np.float64)
    # stack of internal nodes still waiting for a child; preorder fills left first
    waiting: list[int] = []
    for i in range(n_nodes):
        leaf, feat, thr, val = reader.unpack(_NODE)
        feature[i] = -1 if leaf else feat
        threshold[i] = thr
        value[i] = val
        if i > 0:
            if not waiting:
                raise ModelFormatError("tree payload has more nodes than its structure allows")
            parent = waiting[-1]
            if left[parent] < 0:
                left[parent] = i
            else:
                right[parent] = i
                waiting.pop()
        if not leaf:
            waiting.append(i)
    if waiting:
        raise ModelFormatError("tree payload ended with incomplete internal nodes")
    return Tree(feature, threshold, left, right, value)


def _unpack_model(prototype, payload: bytes, d: int):
    model = type(prototype)(**prototype.get_params())
    reader = _Reader(payload)
    if isinstance(model, (DecisionTreeClassifier, DecisionTreeRegressor)):
        model.tree_ = _unpack_tree(reader)
        model.n_features_ = d
    elif isinstance(model, (RandomForestClassifier, RandomForestRegressor)):
        (n_trees,) = reader.unpack(struct.Struct("<I"))
        model.trees_ = [_unpack_tree(reader) for _ in range(n_trees)]
        model.n_features_ = d
    else:
        if len(payload) != (d + 1) * 8:
            raise ModelFormatError(f"linear payload has {len(payload)} bytes, expected {(d + 1) * 8}")
        values = np.frombuffer(reader.take((d + 1) * 8), dtype="<f8")
        model.weights_ = values[:-1].copy()
        model.bias_ = float(values[-1])
        model.n_features_ = d
    if reader.pos != len(payload):
        raise ModelFormatError(f"payload has {len(payload) - reader.pos} trailing bytes")
    return model


def save_bytes(completer: ImageCompleter) -> bytes:
    """Serialize a fitted completer to container bytes."""
    if getattr(completer, "models_", None) is None:
        raise NotFittedError("cannot serialize an unfitted completer")
    est = completer.estimator
    kind, task = _estimator_ids(est)
    params = est.get_params()
    max_depth = params.get("max_depth")
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        completer.spec.width,
        completer.spec.height,
        _ENCODING_IDS[completer.spec.encoding],
        kind,
        task,
        -1 if max_depth is None else int(max_depth),
        int(params.get("n_trees", 0)),
        int(params.get("epochs", 0)),
        float(params.get("reg_lambda", 0.0)),
        completer.base_seed & ((1 << 64) - 1),
        completer.n_outputs,
    )
    out = bytearray(header)
    for model in completer.models_:
        payload = _pack_model(model)
        out += struct.pack("<I", len(payload))
        out += payload
    return bytes(out)


def load_bytes(data: bytes) -> ImageCompleter:
    """Parse container bytes back into a fitted completer."""
    reader = _Reader(data)
    (
        magic,
        version,
        width,
        height,
        encoding_id,
        kind,
        task,
        max_depth,
        n_trees,
        epochs,
        reg_lambda,
        base_seed,
        n_outputs,
    ) = reader.unpack(_HEADER)
    if magic != MAGIC:
        raise BadMagicError(f"expected magic {MAGIC!r}, got {magic!r}")
    if version > FORMAT_VERSION:
        raise UnsupportedVersionError(f"container version {version} is newer than supported {FORMAT_VERSION}")
    if encoding_id not in _ENCODINGS:
        raise ModelFormatError(f"unknown encoding id {encoding_id}")
    spec = ImageSpec(width, height, _ENCODINGS[encoding_id])
    prototype = _build_prototype(kind, task, None if max_depth < 0 else max_depth, n_trees, epochs, reg_lambda)
    completer = ImageCompleter(prototype, spec, base_seed=base_seed)
    completer._check_task()
    if n_outputs != completer.n_outputs:
        raise ModelFormatError(f"container declares {n_outputs} outputs, spec requires {completer.n_outputs}")
    d = spec.attribute_length
    models = []
    for i in range(n_outputs):
        (length,) = reader.unpack(struct.Struct("<I"))
        payload = reader.take(length)
        model = _unpack_model(prototype, payload, d)
        model.random_state = mix64(base_seed, i)
        models.append(model)
    if reader.pos != len(data):
        raise ModelFormatError(f"container has {len(data) - reader.pos} trailing bytes")
    completer.models_ = models
    return completer


def save_model(completer: ImageCompleter, path) -> None:
    Path(path).write_bytes(save_bytes(completer))


def load_model(path) -> ImageCompleter:
    return load_bytes(Path(path).read_bytes())
