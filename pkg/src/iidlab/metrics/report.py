import csv
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Mapping, Optional, Sequence
from .metric_exceptions import EmptyEvaluationException, UnmatchedPairsException
from .metrics import psnr, rmse, ssim
from ..imaging.image_io import load_image
from ..imaging.image_tensor import ImageTensor
from ..imaging.imaging_exceptions import MissingImageException, UnwritablePathException
from ..phong.renderer import RenderTriple
from ..settings import worker_count

logger = logging.getLogger(__name__)

METRICS_CSV = "metrics.csv"
METRICS_JSON = "metrics.json"
CSV_COLUMNS = ("id", "rmse", "psnr", "ssim", "niqe")
SCALE_NOTE = "rmse and psnr computed on the 0-255 scale; ssim on [0, 1] with dynamic range 1"

_IMAGE_SUFFIXES = (".png", ".ppm")

Pair = tuple[str, ImageTensor, ImageTensor]


def _format_value(value: Optional[float]) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def _json_value(value: Optional[float]) -> float | str | None:
    if value is not None and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


@dataclass(frozen=True, slots=True)
class MetricRow:
    """Quality of one produced image against its reference. `niqe` is reserved and
    never filled in.
    """

    id: str
    rmse: float
    psnr: float
    ssim: float
    niqe: Optional[float] = None

    def as_list(self) -> list[str]:
        return [self.id, _format_value(self.rmse), _format_value(self.psnr),
                _format_value(self.ssim), _format_value(self.niqe)]


class MetricReport:
    """Per-image metrics of an evaluation and their means. A mean PSNR is infinite as
    soon as one row is.

    :param label: Name of the evaluated set, e.g. "reconstruction"
    :type label: str
    :param rows: Per-image rows, at least one
    :type rows: Sequence[MetricRow]
    """

    __slots__ = "_label", "_rows"

    def __init__(self, label: str, rows: Sequence[MetricRow]):
        if not rows:
            raise EmptyEvaluationException(label)
        self._label = label
        self._rows = tuple(rows)

    def __repr__(self):
        return f"{self.__class__.__name__}(label={self._label!r}, rows={len(self._rows)})"

    def __str__(self):
        return (f"--- Metrics: {self._label} ---\n"
                f"  Images:  {len(self._rows)}\n"
                f"  RMSE:    {self.mean_rmse:.4f}\n"
                f"  PSNR:    {self.mean_psnr:.4f} dB\n"
                f"  SSIM:    {self.mean_ssim:.4f}\n"
                f"  Scale:   {SCALE_NOTE}")

    @property
    def label(self) -> str:
        return self._label

    @property
    def rows(self) -> tuple[MetricRow, ...]:
        return self._rows

    @property
    def mean_rmse(self) -> float:
        return math.fsum(row.rmse for row in self._rows) / len(self._rows)

    @property
    def mean_psnr(self) -> float:
        if any(math.isinf(row.psnr) for row in self._rows):
            return math.inf
        return math.fsum(row.psnr for row in self._rows) / len(self._rows)

    @property
    def mean_ssim(self) -> float:
        return math.fsum(row.ssim for row in self._rows) / len(self._rows)

    def means(self) -> dict[str, float]:
        return {"rmse": self.mean_rmse, "psnr": self.mean_psnr, "ssim": self.mean_ssim}

    def to_dict(self) -> dict:
        return {
            "label": self._label,
            "count": len(self._rows),
            "scale": SCALE_NOTE,
            "mean": {name: _json_value(value) for name, value in self.means().items()},
            "niqe": None,
        }

    def to_csv(self, path: PathLike | str) -> None:
        """Writes one row per image.

        :param path: Target CSV file
        :type path: PathLike | str
        """

        path = Path(path)
        try:
            with path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(CSV_COLUMNS)
                writer.writerows(row.as_list() for row in self._rows)
        except OSError as e:
            raise UnwritablePathException(path, f"Cannot write metrics to {path}: {e}") from e

    def to_json(self, path: PathLike | str) -> None:
        path = Path(path)
        try:
            path.write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")
        except OSError as e:
            raise UnwritablePathException(path, f"Cannot write metrics to {path}: {e}") from e

    def write(self, out_dir: PathLike | str) -> tuple[Path, Path]:
        """Writes `metrics.csv` and `metrics.json` into a directory, creating it.

        :param out_dir: Output directory
        :type out_dir: PathLike | str
        :return: Paths of the CSV and JSON files
        :rtype: tuple[Path, Path]
        """

        out_dir = Path(out_dir)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise UnwritablePathException(out_dir, f"Cannot create {out_dir}: {e}") from e
        csv_path, json_path = out_dir / METRICS_CSV, out_dir / METRICS_JSON
        self.to_csv(csv_path)
        self.to_json(json_path)
        logger.info("wrote %s and %s", csv_path, json_path)
        return csv_path, json_path


def measure(image_id: str, produced: ImageTensor, reference: ImageTensor) -> MetricRow:
    return MetricRow(image_id, rmse(produced, reference, image_id),
                     psnr(produced, reference, image_id), ssim(produced, reference, image_id))


def evaluate(pairs: Sequence[Pair], label: str = "reconstruction",
             out_dir: PathLike | str | None = None) -> MetricReport:
    """Measures every (id, produced, reference) pair on a thread pool sized by
    `worker_count()`. Rows keep the order of the pairs.

    :param pairs: Identified image pairs
    :type pairs: Sequence[tuple[str, ImageTensor, ImageTensor]]
    :param label: Report label
    :type label: str
    :param out_dir: When given, the report is also written there as CSV and JSON
    :type out_dir: optional PathLike | str
    :return: The report
    :rtype: MetricReport
    """

    if not pairs:
        raise EmptyEvaluationException(label)
    workers = min(worker_count(), len(pairs))
    logger.debug("evaluating %d pairs for '%s' on %d threads", len(pairs), label, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda pair: measure(*pair), pairs))
    report = MetricReport(label, rows)
    if out_dir is not None:
        report.write(out_dir)
    return report


def _images_by_name(directory: Path) -> dict[str, Path]:
    return {path.name: path for path in sorted(directory.iterdir())
            if path.is_file() and path.suffix.lower() in _IMAGE_SUFFIXES}


def pair_directories(produced: PathLike | str, reference: PathLike | str) -> list[Pair]:
    """Loads the images whose file names occur in both directories. Names present in
    only one of them are logged and skipped.

    :param produced: Directory of produced images
    :type produced: PathLike | str
    :param reference: Directory of reference images
    :type reference: PathLike | str
    :return: (name, produced, reference) triples sorted by name
    :rtype: list[tuple[str, ImageTensor, ImageTensor]]
    """

    produced, reference = Path(produced), Path(reference)
    for directory in (produced, reference):
        if not directory.is_dir():
            raise MissingImageException(directory, f"Directory not found: {directory}")
    ours, theirs = _images_by_name(produced), _images_by_name(reference)
    names = sorted(ours.keys() & theirs.keys())
    if not names:
        raise UnmatchedPairsException(produced, reference)
    unmatched = sorted(ours.keys() ^ theirs.keys())
    if unmatched:
        logger.warning("skipping %d unpaired files: %s", len(unmatched), ", ".join(unmatched))
    return [(name, load_image(ours[name]), load_image(theirs[name])) for name in names]


def evaluate_decomposition(triples: Sequence[tuple[str, RenderTriple]],
                           predictions: Mapping[str, tuple[ImageTensor, ImageTensor]],
                           out_dir: PathLike | str | None = None) -> dict[str, MetricReport]:
    """Compares predicted components with rendered ground truth. Three reports are
    produced: "reflectance", "shading" and "reconstruction" (R * S against the image).

    :param triples: Identified ground-truth renders
    :type triples: Sequence[tuple[str, RenderTriple]]
    :param predictions: (reflectance, shading) per render identifier
    :type predictions: Mapping[str, tuple[ImageTensor, ImageTensor]]
    :param out_dir: When given, each report is written to `<out_dir>/<component>/`
    :type out_dir: optional PathLike | str
    :return: Reports by component
    :rtype: dict[str, MetricReport]
    """

    if not triples:
        raise EmptyEvaluationException("decomposition")
    components: dict[str, list[Pair]] = {"reflectance": [], "shading": [], "reconstruction": []}
    for render_id, truth in triples:
        if render_id not in predictions:
            raise EmptyEvaluationException(render_id, f"No prediction for render '{render_id}'")
        reflectance, shading = predictions[render_id]
        reconstruction = ImageTensor(reflectance.data * shading.data).clipped()
        components["reflectance"].append((render_id, reflectance, truth.reflectance))
        components["shading"].append((render_id, shading, truth.shading))
        components["reconstruction"].append((render_id, reconstruction, truth.image))

    reports = {}
    for component, pairs in components.items():
        target = None if out_dir is None else Path(out_dir) / component
        reports[component] = evaluate(pairs, component, target)
    return reports
