import csv
from dataclasses import dataclass
import logging
from os import PathLike
from pathlib import Path
from typing import TextIO
from ..imaging.imaging_exceptions import UnwritablePathException
from ..losses.losses import LossBreakdown

logger = logging.getLogger(__name__)

LOG_COLUMNS = ("epoch", "step", "recon", "ss", "rrg", "sg", "ram", "total", "lr")


@dataclass(frozen=True, slots=True)
class LogRow:
    """One optimizer step of the training log.
    """

    epoch: int
    step: int
    recon: float
    ss: float
    rrg: float
    sg: float
    ram: float
    total: float
    lr: float

    @classmethod
    def from_breakdown(cls, epoch: int, step: int, breakdown: LossBreakdown, lr: float) -> "LogRow":
        return cls(epoch, step, breakdown.recon, breakdown.ss, breakdown.rrg, breakdown.sg,
                   breakdown.ram, breakdown.total, lr)

    def as_list(self) -> list:
        return [self.epoch, self.step, *(repr(float(getattr(self, c))) for c in LOG_COLUMNS[2:])]


class TrainingLog:
    """Append-only CSV log with the columns epoch, step, recon, ss, rrg, sg, ram, total,
    lr. Floats are written with `repr` so values read back bit-identically.

    :param path: CSV file
    :type path: PathLike | str
    :param append: Keep existing rows (used when resuming)
    :type append: bool
    """

    __slots__ = "_path", "_handle", "_writer"

    def __init__(self, path: PathLike | str, append: bool = False):
        self._path = Path(path)
        exists = self._path.is_file()
        try:
            self._handle: TextIO = self._path.open("a" if append else "w", newline="")
        except OSError as error:
            raise UnwritablePathException(path, f"Cannot write training log {path}: {error}") from error
        self._writer = csv.writer(self._handle)
        if not (append and exists):
            self._writer.writerow(LOG_COLUMNS)

    def __repr__(self):
        return f"{self.__class__.__name__}(path={str(self._path)!r})"

    def __enter__(self):
        return self

    def __exit__(self, *_):
        self.close()

    @property
    def path(self) -> Path:
        return self._path

    def write(self, row: LogRow) -> None:
        self._writer.writerow(row.as_list())

    def flush(self) -> None:
        self._handle.flush()

    def close(self) -> None:
        self._handle.close()


def truncate_log(path: PathLike | str, last_epoch: int) -> None:
    """Drops rows after `last_epoch` so a resumed run continues the log seamlessly.
    """

    path = Path(path)
    if not path.is_file():
        return
    rows = read_log(path)
    kept = [row for row in rows if row.epoch <= last_epoch]
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(LOG_COLUMNS)
        for row in kept:
            writer.writerow(row.as_list())
    logger.debug("kept %d of %d log rows up to epoch %d", len(kept), len(rows), last_epoch)


def read_log(path: PathLike | str) -> list[LogRow]:
    with Path(path).open(newline="") as handle:
        return [LogRow(int(r["epoch"]), int(r["step"]), *(float(r[c]) for c in LOG_COLUMNS[2:]))
                for r in csv.DictReader(handle)]
