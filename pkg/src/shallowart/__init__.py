"""Per-pixel image completion with classical single-output learners.

Train one independent model per right-half pixel value on a corpus of
half-images, then predict the missing right half of new images.  Includes
deterministic synthetic image generators, from-scratch learners behind a
fit/predict interface, completion metrics, and a CLI for the full pipeline.
"""

from .dataset import Dataset, FlatSample, assemble, flatten_split, left_half, preprocess_corpus
from .errors import ShallowArtError
from .generators import (
    Family,
    GeneratorConfig,
    default_config,
    gen_circles,
    gen_lines,
    gen_triangle,
    generate,
)
from .image import DEFAULT_BW_SPEC, DEFAULT_RGB_SPEC, Encoding, Image, ImageSpec
from .image_io import decode_png, encode_png, load_image, save_image
from .learners import (
    DecisionTreeClassifier,
    DecisionTreeRegressor,
    LinearSVM,
    Perceptron,
    RandomForestClassifier,
    RandomForestRegressor,
)
from .metrics import EvalReport, Rect, channel_mae, pixel_accuracy, region_mean
from .model_io import load_bytes, load_model, save_bytes, save_model
from .wrapper import ImageCompleter, TrainReport

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "FlatSample",
    "assemble",
    "flatten_split",
    "left_half",
    "preprocess_corpus",
    "ShallowArtError",
    "Family",
    "GeneratorConfig",
    "default_config",
    "gen_circles",
    "gen_lines",
    "gen_triangle",
    "generate",
    "DEFAULT_BW_SPEC",
    "DEFAULT_RGB_SPEC",
    "Encoding",
    "Image",
    "ImageSpec",
    "decode_png",
    "encode_png",
    "load_image",
    "save_image",
    "DecisionTreeClassifier",
    "DecisionTreeRegressor",
    "LinearSVM",
    "Perceptron",
    "RandomForestClassifier",
    "RandomForestRegressor",
    "EvalReport",
    "Rect",
    "channel_mae",
    "pixel_accuracy",
    "region_mean",
    "load_bytes",
    "load_model",
    "save_bytes",
    "save_model",
    "ImageCompleter",
    "TrainReport",
    "__version__",
]
