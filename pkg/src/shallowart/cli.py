"""Command-line pipeline: generate corpora, train completers, complete, evaluate.

Each subcommand resolves its parameters from flags plus an optional
``key = value`` config file (flags win), materializes every default, and
echoes the fully resolved configuration next to its outputs so a run can be
reproduced exactly with ``--config``.  The worker count falls back to the
SHALLOW_ART_WORKERS environment variable when not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .dataset import preprocess_corpus
from .errors import DecodeError, ShallowArtError, SpecMismatchError
from .generators import (
    DEFAULT_CIRCLE_DIAMETER,
    DEFAULT_SHAPE_COUNT,
    Family,
    GeneratorConfig,
    generate,
)
from .image import DEFAULT_BW_SPEC, DEFAULT_RGB_SPEC, Encoding, ImageSpec
from .image_io import (
    file_sha256,
    list_image_files,
    load_image,
    load_image_native,
    save_image,
)
from .learners import (
    DecisionTreeClassifier,
    DecisionTreeRegressor,
    LinearSVM,
    Perceptron,
    RandomForestClassifier,
    RandomForestRegressor,
)
from .metrics import EvalReport, ImageEval, channel_mae, pixel_accuracy, region_mean, right_corner_patches
from .model_io import load_model, save_model
from .wrapper import ImageCompleter

WORKERS_ENV = "SHALLOW_ART_WORKERS"
MANIFEST_NAME = "manifest.txt"

_REQUIRED = object()

# (config key, argparse dest, type, default); _REQUIRED must come from flag or file
_COMMAND_KEYS = {
    "generate": [
        ("family", "family", str, _REQUIRED),
        ("count", "count", int, 50),
        ("shapes", "shapes", int, DEFAULT_SHAPE_COUNT),
        ("diameter", "diameter", int, DEFAULT_CIRCLE_DIAMETER),
        ("width", "width", int, None),
        ("height", "height", int, None),
        ("encoding", "encoding", str, None),
        ("seed", "seed", int, 0),
        ("out", "out", str, _REQUIRED),
    ],
    "prepare": [
        ("in", "in_path", str, _REQUIRED),
        ("out", "out", str, _REQUIRED),
        ("width", "width", int, DEFAULT_RGB_SPEC.width),
        ("height", "height", int, DEFAULT_RGB_SPEC.height),
        ("encoding", "encoding", str, DEFAULT_RGB_SPEC.encoding.value),
    ],
    "train": [
        ("in", "in_path", str, _REQUIRED),
        ("model", "model", str, _REQUIRED),
        ("learner", "learner", str, "tree"),
        ("trees", "trees", int, 10),
        ("epochs", "epochs", int, 5),
        ("lambda", "reg_lambda", float, 1e-4),
        ("max_depth", "max_depth", str, "none"),
        ("width", "width", int, None),
        ("height", "height", int, None),
        ("encoding", "encoding", str, None),
        ("seed", "seed", int, 0),
        ("workers", "workers", int, None),
    ],
    "complete": [
        ("model", "model", str, _REQUIRED),
        ("in", "in_path", str, _REQUIRED),
        ("out", "out", str, _REQUIRED),
    ],
    "evaluate": [
        ("model", "model", str, _REQUIRED),
        ("in", "in_path", str, _REQUIRED),
        ("out", "out", str, _REQUIRED),
    ],
}


def parse_config_file(path) -> dict:
    """Flat ``key = value`` file; blank lines and # comments are ignored."""
    values = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ShallowArtError(f"config line is not 'key = value': {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    file_values = parse_config_file(args.config) if args.config else {}
    resolved = {}
    for key, dest, typ, default in _COMMAND_KEYS[command]:
        value = getattr(args, dest, None)
        if value is None and key in file_values:
            raw = file_values[key]
            value = None if raw.lower() == "none" else typ(raw)
        if value is None:
            if default is _REQUIRED:
                raise ShallowArtError(f"missing required parameter '{key}' for {command}")
            value = default
        resolved[key] = value
    return resolved


def echo_config(command: str, cfg: dict, path) -> None:
    lines = [f"# resolved configuration for: shallow-art {command} --config <this file>"]
    for key, value in cfg.items():
        lines.append(f"{key} = {'none' if value is None else value}")
    Path(path).write_text("\n".join(lines) + "\n")


def _write_manifest(path, header: dict, files) -> None:
    lines = ["# corpus manifest"]
    for key, value in header.items():
        lines.append(f"{key} = {value}")
    for name, digest in files:
        lines.append(f"file {name} {digest}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_manifest(path):
    header, files = {}, []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("file "):
            _, name, digest = line.split()
            files.append((name, digest))
        else:
            key, _, value = line.partition("=")
            header[key.strip()] = value.strip()
    return header, files


def _materialize_generate_spec(cfg: dict) -> GeneratorConfig:
    family = Family(cfg["family"])
    base = DEFAULT_RGB_SPEC if family is Family.TRIANGLE_COLOR else DEFAULT_BW_SPEC
    width = cfg["width"] if cfg["width"] is not None else base.width
    height = cfg["height"] if cfg["height"] is not None else base.height
    encoding = Encoding(cfg["encoding"]) if cfg["encoding"] is not None else base.encoding
    cfg.update(width=width, height=height, encoding=encoding.value)
    spec = ImageSpec(width, height, encoding)
    return GeneratorConfig(family, spec, count=cfg["shapes"], diameter=cfg["diameter"])


def cmd_generate(args) -> int:
    cfg = resolve_config("generate", args)
    gen_cfg = _materialize_generate_spec(cfg)
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for i in range(cfg["count"]):
        img = generate(gen_cfg, cfg["seed"], i)
        name = f"{i:06d}.png"
        save_image(img, out_dir / name)
        names.append(name)
    files = [(name, file_sha256(out_dir / name)) for name in names]
    header = {k: cfg[k] for k in ("family", "shapes", "diameter", "width", "height", "encoding", "seed")}
    header["images"] = cfg["count"]
    _write_manifest(out_dir / MANIFEST_NAME, header, files)
    echo_config("generate", cfg, out_dir / "generate.cfg")
    print(f"wrote {cfg['count']} images and {MANIFEST_NAME} to {out_dir}")
    return 0


def cmd_prepare(args) -> int:
    """Standardize a raw corpus: drop duplicates, resample, write PNGs."""
    cfg = resolve_config("prepare", args)
    target = ImageSpec(cfg["width"], cfg["height"], Encoding(cfg["encoding"]))
    in_dir = Path(cfg["in"])
    paths = list_image_files(in_dir) if in_dir.is_dir() else []
    images = []
    for path in paths:
        try:
            images.append(load_image_native(path))
        except DecodeError as exc:
            print(f"warning: skipping {path}: {exc}", file=sys.stderr)
    if not images:
        raise ShallowArtError(f"no decodable images in {in_dir} (insufficient data)")
    prepared = preprocess_corpus(images, target)
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for i, img in enumerate(prepared):
        name = f"{i:06d}.png"
        save_image(img, out_dir / name)
        names.append(name)
    header = {
        "source": str(in_dir),
        "width": target.width,
        "height": target.height,
        "encoding": target.encoding.value,
        "images": len(names),
    }
    _write_manifest(out_dir / MANIFEST_NAME, header, [(n, file_sha256(out_dir / n)) for n in names])
    echo_config("prepare", cfg, out_dir / "prepare.cfg")
    print(f"prepared {len(names)} of {len(paths)} images -> {out_dir}")
    return 0


def _infer_spec(cfg: dict, first_file) -> ImageSpec:
    if cfg["width"] is not None and cfg["height"] is not None and cfg["encoding"] is not None:
        return ImageSpec(cfg["width"], cfg["height"], Encoding(cfg["encoding"]))
    from PIL import Image as PILImage

    with PILImage.open(first_file) as pil:
        width, height = pil.size
        encoding = Encoding.BW if pil.mode in ("1", "L") else Encoding.RGB
    width = cfg["width"] if cfg["width"] is not None else width
    height = cfg["height"] if cfg["height"] is not None else height
    if cfg["encoding"] is not None:
        encoding = Encoding(cfg["encoding"])
    return ImageSpec(width, height, encoding)


def build_learner(cfg: dict, encoding: Encoding):
    name = cfg["learner"]
    max_depth = None if str(cfg["max_depth"]).lower() == "none" else int(cfg["max_depth"])
    classification = encoding is Encoding.BW
    if name == "tree":
        cls = DecisionTreeClassifier if classification else DecisionTreeRegressor
        return cls(max_depth=max_depth)
    if name == "forest":
        cls = RandomForestClassifier if classification else RandomForestRegressor
        return cls(n_trees=cfg["trees"], max_depth=max_depth)
    if name == "perceptron":
        if not classification:
            raise ShallowArtError("perceptron supports binary classification only (BW images)")
        return Perceptron(epochs=cfg["epochs"])
    if name == "svm":
        if not classification:
            raise ShallowArtError("svm supports binary classification only (BW images)")
        return LinearSVM(reg_lambda=cfg["reg_lambda"], epochs=cfg["epochs"])
    raise ShallowArtError(f"unknown learner {name!r} (expected tree, forest, perceptron, or svm)")


def cmd_train(args) -> int:
    cfg = resolve_config("train", args)
    if cfg["workers"] is None:
        cfg["workers"] = int(os.environ.get(WORKERS_ENV, "1"))
    in_dir = Path(cfg["in"])
    paths = list_image_files(in_dir) if in_dir.is_dir() else []
    if not paths:
        raise ShallowArtError(f"no decodable images in {in_dir} (insufficient data)")
    spec = _infer_spec(cfg, paths[0])
    cfg.update(width=spec.width, height=spec.height, encoding=spec.encoding.value)
    images = [load_image(p, spec) for p in paths]
    estimator = build_learner(cfg, spec.encoding)
    completer = ImageCompleter(estimator, spec, base_seed=cfg["seed"], workers=cfg["workers"])
    completer.fit_images(images)
    model_path = Path(cfg["model"])
    if model_path.parent != Path(""):
        model_path.parent.mkdir(parents=True, exist_ok=True)
    save_model(completer, model_path)
    report = completer.report_.summary()
    Path(f"{model_path}.report.txt").write_text(report + "\n")
    header = {
        "source": str(in_dir),
        "learner": cfg["learner"],
        "width": spec.width,
        "height": spec.height,
        "encoding": spec.encoding.value,
        "seed": cfg["seed"],
        "images": len(paths),
    }
    _write_manifest(f"{model_path}.manifest", header, [(p.name, file_sha256(p)) for p in paths])
    echo_config("train", cfg, f"{model_path}.cfg")
    print(f"trained {completer.n_outputs} output models -> {model_path}")
    print(report)
    return 0


def cmd_complete(args) -> int:
    cfg = resolve_config("complete", args)
    completer = load_model(cfg["model"])
    in_path = Path(cfg["in"])
    paths = list_image_files(in_path) if in_path.is_dir() else [in_path]
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    echo_config("complete", cfg, out_dir / "complete.cfg")
    failures = 0
    for path in paths:
        try:
            img = load_image(path, completer.spec)
            completed = completer.complete(img)
            save_image(completed, out_dir / f"{path.stem}_completed.png")
        except (DecodeError, SpecMismatchError, OSError) as exc:
            failures += 1
            print(f"error: {path}: {exc}", file=sys.stderr)
    done = len(paths) - failures
    print(f"completed {done}/{len(paths)} images -> {out_dir}")
    return 1 if failures else 0


def _training_hashes(model_path) -> set:
    manifest = Path(f"{model_path}.manifest")
    if not manifest.exists():
        return set()
    _, files = read_manifest(manifest)
    return {digest for _, digest in files}


def cmd_evaluate(args) -> int:
    cfg = resolve_config("evaluate", args)
    completer = load_model(cfg["model"])
    test_dir = Path(cfg["in"])
    paths = list_image_files(test_dir) if test_dir.is_dir() else []
    if not paths:
        raise ShallowArtError(f"no decodable images in {test_dir} (insufficient data)")
    report = EvalReport(encoding=completer.spec.encoding)
    train_hashes = _training_hashes(cfg["model"])
    overlap = [p.name for p in paths if file_sha256(p) in train_hashes]
    if overlap:
        warning = f"{len(overlap)} test file(s) appear in the training manifest: {', '.join(overlap[:5])}"
        report.warnings.append(warning)
        print(f"warning: {warning}", file=sys.stderr)
    regions = right_corner_patches(completer.spec)
    for path in paths:
        truth = load_image(path, completer.spec)
        completed = completer.complete(truth)
        entry = ImageEval(name=path.name)
        if completer.spec.encoding is Encoding.BW:
            entry.accuracy = pixel_accuracy(completed, truth)
        else:
            entry.mae = channel_mae(completed, truth)
        entry.region_means = {name: region_mean(completed, rect) for name, rect in regions.items()}
        report.per_image.append(entry)
    out_path = Path(cfg["out"])
    if out_path.parent != Path(""):
        out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(report.to_text())
    Path(f"{out_path}.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    echo_config("evaluate", cfg, f"{out_path}.cfg")
    print(report.to_text(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shallow-art",
        description="Generate image corpora, train per-pixel completers, and complete images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value config file; flags override it")

    p = sub.add_parser("generate", help="write a corpus of generated images plus a manifest")
    add_common(p)
    p.add_argument("--family", choices=[f.value for f in Family])
    p.add_argument("--count", type=int, help="number of images to generate")
    p.add_argument("--shapes", type=int, help="lines/circles drawn per image")
    p.add_argument("--diameter", type=int, help="circle diameter in pixels")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--encoding", choices=[e.value for e in Encoding])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("prepare", help="deduplicate and resample a raw corpus directory")
    add_common(p)
    p.add_argument("--in", dest="in_path", help="directory of raw images (PNG or JPEG)")
    p.add_argument("--out", help="output directory for standardized PNGs")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--encoding", choices=[e.value for e in Encoding])
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("train", help="train one model per output pixel value on a corpus")
    add_common(p)
    p.add_argument("--in", dest="in_path", help="directory of training images")
    p.add_argument("--model", help="output path for the serialized model")
    p.add_argument("--learner", choices=["tree", "forest", "perceptron", "svm"])
    p.add_argument("--trees", type=int, help="forest size")
    p.add_argument("--epochs", type=int, help="passes for perceptron/svm")
    p.add_argument("--lambda", dest="reg_lambda", type=float, help="svm regularization")
    p.add_argument("--max-depth", dest="max_depth", help="tree depth cap, or 'none'")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--encoding", choices=[e.value for e in Encoding])
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("complete", help="predict the right half of each input image")
    add_common(p)
    p.add_argument("--model")
    p.add_argument("--in", dest="in_path", help="input image file or directory")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("evaluate", help="score completions against held-out images")
    add_common(p)
    p.add_argument("--model")
    p.add_argument("--in", dest="in_path", help="directory of held-out images")
    p.add_argument("--out", help="report output path")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShallowArtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
