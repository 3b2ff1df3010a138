import argparse
import json
import logging
from os import PathLike
from pathlib import Path
import sys
from typing import Any, Callable, Optional, Sequence
import numpy as np
from .. import __version__
from ..autograd.autograd_exceptions import NonPositiveLogException
from ..display.panels import DecompositionPanel, FeaturePanel
from ..filters.filter_exceptions import KernelSizeException
from ..imaging import (ChannelCountException, CorruptImageException, ImageShapeMismatchException,
                       ImageTensor, MapFormatException, MissingImageException,
                       NonSquarePatchException, PatchSizeException, UnsupportedFormatException,
                       UnwritablePathException, as_rgb, load_dataset, load_image, save_image)
from ..metrics import (EmptyEvaluationException, UnmatchedPairsException, WindowSizeException,
                       evaluate, pair_directories)
from ..network import (ChecksumMismatchException, ConfigMismatchException, InputSizeException,
                       NetConfig, WeightFormatException, load_weights)
from ..phong import (SUITE_NAMES, DegenerateGeometryException, Scene, SceneConstraintException,
                     UnknownSceneException, get_scene, make_test_suite, render_full,
                     render_lambertian, render_suite_dataset)
from ..physmaps import DEFAULT_EPS, DEFAULT_SG_THRESHOLD, DEFAULT_SIGMA, featurize, save_map
from ..training import (EmptyDatasetException, NumericalInstabilityException, TrainConfig,
                        decompose, load_run_config, train)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

MANIFEST_FILE = "manifest.json"
PANEL_FILE = "panel.png"

_DATA_ERRORS = (
    MissingImageException, UnsupportedFormatException, CorruptImageException,
    UnwritablePathException, ChannelCountException, ImageShapeMismatchException,
    PatchSizeException, NonSquarePatchException, MapFormatException, KernelSizeException,
    DegenerateGeometryException, SceneConstraintException, WeightFormatException,
    ChecksumMismatchException, ConfigMismatchException, InputSizeException,
    EmptyDatasetException, WindowSizeException, EmptyEvaluationException,
    UnmatchedPairsException,
)
_NUMERIC_ERRORS = (NumericalInstabilityException, NonPositiveLogException)


class _DataError(Exception):
    """Input that exists but cannot be used, raised by the CLI itself."""


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with status 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolution(text: str) -> tuple[int, int]:
    try:
        height, width = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HxW, got {text!r}") from None
    if height <= 0 or width <= 0:
        raise argparse.ArgumentTypeError(f"size must be positive, got {text!r}")
    return height, width


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _out_dir(path: PathLike | str) -> Path:
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise UnwritablePathException(path, f"Cannot create {path}: {e}") from e
    return path


def _write_json(path: Path, data: dict[str, Any]) -> None:
    try:
        path.write_text(json.dumps(data, indent=2, sort_keys=True), encoding="utf-8")
    except OSError as e:
        raise UnwritablePathException(path, f"Cannot write {path}: {e}") from e


def _load_scene(value: str, seed: int) -> tuple[str, Scene]:
    path = Path(value)
    if value in SUITE_NAMES or not (path.suffix.lower() == ".json" or path.is_file()):
        return value, get_scene(value, seed)
    if not path.is_file():
        raise MissingImageException(path, f"Scene file not found: {path}")
    try:
        return path.stem, Scene.from_dict(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise _DataError(f"Invalid scene file {path}: {e}") from e


def cmd_render(args: argparse.Namespace) -> int:
    if args.list:
        for name, scene in make_test_suite(args.seed):
            print(f"{name:<18}{scene.description}")
        return EXIT_OK
    if args.scene is None or args.out is None:
        args.parser.error("render needs --scene and --out (or --list)")

    name, scene = _load_scene(args.scene, args.seed)
    out = _out_dir(args.out)
    height, width = args.size
    manifest: dict[str, Any] = {"scene": name, "seed": args.seed, "resolution": [height, width],
                                "description": scene.description,
                                "light_directions": [list(light.direction) for light in scene.lights],
                                "definition": scene.to_dict()}
    if args.full:
        save_image(render_full(scene, args.size), out / "image.png")
        manifest["files"] = {"image": "image.png"}
        manifest["model"] = "phong"
    else:
        triple = render_lambertian(scene, args.size)
        save_image(triple.image, out / "image.png")
        save_image(triple.reflectance, out / "reflectance.png")
        save_image(triple.shading, out / "shading.png")
        manifest["files"] = {"image": "image.png", "reflectance": "reflectance.png",
                             "shading": "shading.png"}
        manifest["model"] = "lambertian"
        manifest["coverage"] = float(triple.coverage.mean())
    _write_json(out / MANIFEST_FILE, manifest)
    logger.info("rendered '%s' at %dx%d into %s", name, height, width, out)
    return EXIT_OK


def cmd_featurize(args: argparse.Namespace) -> int:
    image = as_rgb(load_image(args.input))
    maps = featurize(image, args.sigma, args.eps, args.threshold)
    out = _out_dir(args.out)
    sg = np.concatenate([maps.sg.gx.data, maps.sg.gy.data], axis=2)
    sidecars = {
        "rrg": maps.rrg.data.data,
        "ram": maps.ram.data.data,
        "m_rrg": maps.m_rrg.data,
        "sg": sg,
    }
    # previews clip into [0, 1]; the sidecars keep the exact values
    previews = {"rrg": maps.rrg.data, "ram": maps.ram.data, "m_rrg": maps.m_rrg,
                "sg": ImageTensor(np.hypot(maps.sg.gx.data, maps.sg.gy.data))}
    for name, values in sidecars.items():
        save_map(values, out / f"{name}.iidmap")
        save_image(previews[name], out / f"{name}.png")
    if args.panel:
        FeaturePanel(image, maps).save(out / PANEL_FILE)
    logger.info("wrote feature maps of %s to %s", args.input, out)
    return EXIT_OK


def _train_config(args: argparse.Namespace) -> tuple[TrainConfig, NetConfig]:
    flags = {"epochs": args.epochs, "patches_per_epoch": args.patches,
             "batch_size": args.batch_size, "checkpoint_every": args.checkpoint_every,
             "seed": args.seed, "lr0": args.lr}
    changes = {key: value for key, value in flags.items() if value is not None}
    if args.fixed_pool:
        changes["resample_each_epoch"] = False
    cfg, network = TrainConfig().updated(**changes), NetConfig()
    if args.config is not None:
        try:
            cfg, network = load_run_config(args.config, cfg, network)
        except ValueError as e:
            raise _DataError(f"Invalid config {args.config}: {e}") from e
    return cfg, network


def cmd_train(args: argparse.Namespace) -> int:
    if args.data is None and args.synthetic is None:
        args.parser.error("train needs --data or --synthetic")
    cfg, network = _train_config(args)
    if args.data is not None:
        dataset = load_dataset(args.data, args.split)
    else:
        renders = render_suite_dataset(args.synthetic, args.size, cfg.seed)
        dataset = [(render_id, triple.image) for render_id, triple in renders]
    train(dataset, cfg, args.out, network, args.resume)
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    network = None
    if args.config is not None:
        try:
            _, network = load_run_config(args.config)
        except ValueError as e:
            raise _DataError(f"Invalid config {args.config}: {e}") from e
    params = load_weights(args.weights, network)
    image = as_rgb(load_image(args.input))
    limit = None if args.memory_limit is None else args.memory_limit * 1024 ** 2
    reflectance, shading = decompose(params, image, limit)
    reconstruction = ImageTensor(reflectance.data * shading.data).clipped()
    out = _out_dir(args.out)
    save_image(reflectance, out / "reflectance.png")
    save_image(shading, out / "shading.png")
    save_image(reconstruction, out / "reconstruction.png")
    if args.panel:
        DecompositionPanel(image, reflectance, shading).save(out / PANEL_FILE)
    logger.info("decomposed %s into %s", args.input, out)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    pairs = pair_directories(args.produced, args.reference)
    report = evaluate(pairs, args.label, args.out)
    print(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="iidlab", description="Physics-guided unsupervised intrinsic image "
                                                "decomposition.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log DEBUG messages")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    render = commands.add_parser("render", help="render a ground-truth Phong scene")
    render.add_argument("--scene", help="suite scene name or a scene JSON file")
    render.add_argument("--out", help="output directory")
    render.add_argument("--seed", type=int, default=0, help="suite seed (default: 0)")
    render.add_argument("--size", type=_resolution, default=(64, 64), metavar="HxW",
                        help="render resolution (default: 64x64)")
    render.add_argument("--full", action="store_true",
                        help="render the full Phong image (ambient and specular) instead of the "
                             "Lambertian image/reflectance/shading triple")
    render.add_argument("--list", action="store_true", help="print the scene catalogue and exit")
    render.set_defaults(handler=cmd_render, parser=render)

    feat = commands.add_parser("featurize", help="compute RRG, RAM, M_RRG and SG maps of an image")
    feat.add_argument("--in", dest="input", required=True, help="input PNG or PPM image")
    feat.add_argument("--out", required=True, help="output directory")
    feat.add_argument("--sigma", type=float, default=DEFAULT_SIGMA,
                      help=f"derivative-of-Gaussian scale (default: {DEFAULT_SIGMA})")
    feat.add_argument("--eps", type=float, default=DEFAULT_EPS,
                      help=f"log clamp (default: {DEFAULT_EPS})")
    feat.add_argument("--threshold", type=float, default=DEFAULT_SG_THRESHOLD,
                      help=f"SG mask threshold (default: {DEFAULT_SG_THRESHOLD})")
    feat.add_argument("--panel", action="store_true", help="also write panel.png")
    feat.set_defaults(handler=cmd_featurize, parser=feat)

    defaults = TrainConfig()
    trn = commands.add_parser("train", help="train the decomposition network")
    source = trn.add_mutually_exclusive_group()
    source.add_argument("--data", help="dataset directory (LOL, split or flat layout)")
    source.add_argument("--synthetic", type=_positive_int, metavar="N",
                        help="train on N rendered suite scenes instead of a dataset")
    trn.add_argument("--split", help="split subdirectory of --data")
    trn.add_argument("--size", type=_resolution, default=(64, 64), metavar="HxW",
                     help="resolution of --synthetic renders (default: 64x64)")
    trn.add_argument("--out", default="out", help="output directory (default: out)")
    trn.add_argument("--config", help="JSON run configuration; its values override flags")
    trn.add_argument("--resume", help="checkpoint to continue from")
    trn.add_argument("--epochs", type=_positive_int, help=f"epochs (default: {defaults.epochs})")
    trn.add_argument("--patches", type=_positive_int,
                     help=f"patches per epoch (default: {defaults.patches_per_epoch})")
    trn.add_argument("--batch-size", type=_positive_int,
                     help=f"patches per step (default: {defaults.batch_size})")
    trn.add_argument("--checkpoint-every", type=_positive_int,
                     help=f"epochs between checkpoints (default: {defaults.checkpoint_every})")
    trn.add_argument("--lr", type=float, help=f"initial learning rate (default: {defaults.lr0})")
    trn.add_argument("--seed", type=int, help=f"training seed (default: {defaults.seed})")
    trn.add_argument("--fixed-pool", action="store_true",
                     help="draw one patch pool up front instead of resampling each epoch")
    trn.set_defaults(handler=cmd_train, parser=trn)

    dec = commands.add_parser("decompose", help="split an image into reflectance and shading")
    dec.add_argument("--weights", required=True, help="weight file (*.iidnet)")
    dec.add_argument("--in", dest="input", required=True, help="input PNG or PPM image")
    dec.add_argument("--out", required=True, help="output directory")
    dec.add_argument("--config", help="run configuration whose network must match the weights")
    dec.add_argument("--memory-limit", type=_positive_int, metavar="MiB",
                     help="activation memory above which the image is processed in tiles")
    dec.add_argument("--panel", action="store_true", help="also write panel.png")
    dec.set_defaults(handler=cmd_decompose, parser=dec)

    ev = commands.add_parser("evaluate", help="compare produced images with references")
    ev.add_argument("--produced", required=True, help="directory of produced images")
    ev.add_argument("--reference", required=True, help="directory of reference images")
    ev.add_argument("--out", required=True, help="directory receiving metrics.csv and metrics.json")
    ev.add_argument("--label", default="reconstruction", help="report label")
    ev.set_defaults(handler=cmd_evaluate, parser=ev)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs one iidlab command and returns its exit status: 0 on success, 1 on usage
    errors, 2 on data errors, 3 on numerical failure.

    :param argv: Arguments without the program name; defaults to sys.argv[1:]
    :type argv: optional Sequence[str]
    :return: Exit status
    :rtype: int
    """

    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except UnknownSceneException as e:
        args.parser.print_usage(sys.stderr)
        logger.error("%s", e)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as e:
        logger.error("numerical failure: %s", e)
        return EXIT_NUMERIC
    except _DATA_ERRORS as e:
        logger.error("%s", e)
        return EXIT_DATA
    except _DataError as e:
        logger.error("%s", e)
        return EXIT_DATA
    except ValueError as e:
        args.parser.print_usage(sys.stderr)
        logger.error("invalid argument: %s", e)
        return EXIT_USAGE

