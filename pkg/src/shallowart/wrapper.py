"""Training one independent single-output model per right-half pixel value.

An ``ImageCompleter`` owns a prototype estimator and an image spec.  Fitting
clones the prototype once per label position i, seeds the clone with
``mix64(base_seed, i)``, and trains it on (X, Y[:, i]).  No state is shared
between output models, so outputs can be trained on any number of workers
with bit-identical results; workers only affect wall time.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import assemble, flatten_split
from .errors import InsufficientDataError, ShapeError, SpecMismatchError
from .image import Encoding, Image, ImageSpec
from .learners.base import BaseEstimator, check_fitted, clone
from .learners.tree import DecisionTreeClassifier, DecisionTreeRegressor, PresortedDesign
from .rng import mix64


@dataclass
class TrainReport:
    """Wall-time accounting for one fit."""

    outputs_trained: int
    workers: int
    total_seconds: float
    per_output_seconds: np.ndarray

    def summary(self) -> str:
        per = self.per_output_seconds
        lines = [
            f"outputs trained: {self.outputs_trained}",
            f"workers: {self.workers}",
            f"total wall time: {self.total_seconds:.3f} s",
            f"per-output wall time: mean {per.mean():.6f} s, max {per.max():.6f} s",
        ]
        return "\n".join(lines)


class ImageCompleter(BaseEstimator):
    """One single-output model per right-half value, plus image-level helpers.

    Parameters
    ----------
    estimator : BaseEstimator
        Unfitted prototype; a classifier for BW specs, a regressor for RGB.
    spec : ImageSpec
        The image family the completer targets.
    base_seed : int
        Root seed; output i trains with seed ``mix64(base_seed, i)``.
    workers : int
        Thread count used during fit.  Results do not depend on it.
    """

    def __init__(self, estimator, spec: ImageSpec, base_seed: int = 0, workers: int = 1):
        self.estimator = estimator
        self.spec = spec
        self.base_seed = base_seed
        self.workers = workers

    @property
    def n_outputs(self) -> int:
        return self.spec.label_length

    @property
    def attribute_length(self) -> int:
        return self.spec.attribute_length

    def _check_task(self) -> None:
        wanted = "classifier" if self.spec.encoding is Encoding.BW else "regressor"
        actual = getattr(self.estimator, "_estimator_type", None)
        if actual != wanted:
            raise SpecMismatchError(
                f"{self.spec.encoding.value} specs require a {wanted}, got {type(self.estimator).__name__}"
            )

    def fit(self, X, Y) -> "ImageCompleter":
        self._check_task()
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        X = np.asarray(X)
        Y = np.asarray(Y)
        if X.ndim != 2 or X.shape[0] < 1:
            raise InsufficientDataError(f"attribute matrix must be non-empty 2-D, got shape {X.shape}")
        if X.shape[1] != self.attribute_length:
            raise ShapeError(f"attributes have width {X.shape[1]}, spec requires {self.attribute_length}")
        if Y.shape != (X.shape[0], self.n_outputs):
            raise ShapeError(f"labels have shape {Y.shape}, expected ({X.shape[0]}, {self.n_outputs})")

        design = PresortedDesign(X)
        if isinstance(self.estimator, (DecisionTreeClassifier, DecisionTreeRegressor)):
            design.root_sort()  # shared by every output; compute before workers race

        def fit_one(i: int):
            started = time.perf_counter()
            model = clone(self.estimator)
            model.set_params(random_state=mix64(self.base_seed, i))
            if hasattr(model, "_fit_design"):
                model._fit_design(design, Y[:, i])
            else:
                model.fit(X, Y[:, i])
            return model, time.perf_counter() - started

        t0 = time.perf_counter()
        if self.workers == 1:
            results = [fit_one(i) for i in range(self.n_outputs)]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                chunk = max(1, self.n_outputs // (self.workers * 8))
                results = list(pool.map(fit_one, range(self.n_outputs), chunksize=chunk))
        total = time.perf_counter() - t0

        self.models_ = [model for model, _ in results]
        self.report_ = TrainReport(
            outputs_trained=len(self.models_),
            workers=self.workers,
            total_seconds=total,
            per_output_seconds=np.asarray([sec for _, sec in results]),
        )
        return self

    def fit_images(self, images) -> "ImageCompleter":
        """Fit from full images: left halves become X, right halves become Y."""
        if not images:
            raise InsufficientDataError("cannot fit on zero images")
        for img in images:
            if img.spec != self.spec:
                raise SpecMismatchError(f"image spec {img.spec} does not match completer spec {self.spec}")
        samples = [flatten_split(img) for img in images]
        X = np.stack([s.attributes for s in samples])
        Y = np.stack([s.labels for s in samples])
        return self.fit(X, Y)

    def predict(self, X) -> np.ndarray:
        """Label matrix (n, L): column i comes from output model i."""
        check_fitted(self, "models_")
        X = np.asarray(X)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.attribute_length:
            raise ShapeError(f"attributes have shape {X.shape}, spec requires width {self.attribute_length}")
        classification = self.spec.encoding is Encoding.BW
        out = np.empty((X.shape[0], self.n_outputs), dtype=np.uint8 if classification else np.float64)
        for i, model in enumerate(self.models_):
            out[:, i] = model.predict(X)
        return out

    def predict_one(self, x) -> np.ndarray:
        return self.predict(np.asarray(x)[None, :])[0]

    def complete(self, left) -> Image:
        """Fill in the right half for a left-half block (or an image's left half)."""
        if isinstance(left, Image):
            if left.spec != self.spec:
                raise SpecMismatchError(f"image spec {left.spec} does not match completer spec {self.spec}")
            left = left.pixels[:, : self.spec.half_width]
        left = np.asarray(left)
        if left.shape != self.spec.half_shape:
            raise ShapeError(f"left half has shape {left.shape}, expected {self.spec.half_shape}")
        labels = self.predict_one(left.reshape(-1))
        if self.spec.encoding is Encoding.RGB:
            labels = np.floor(labels + 0.5).astype(np.uint8)
        return assemble(self.spec, left, labels)
