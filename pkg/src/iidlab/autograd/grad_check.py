from collections.abc import Callable
from dataclasses import dataclass
import logging
import numpy as np
from numpy.typing import ArrayLike, NDArray
from .tensor import Tensor

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class GradCheckReport:
    """Outcome of comparing analytic gradients with central differences.

    :param max_rel_error: Largest relative error over the checked coordinates
    :type max_rel_error: float
    :param passed: Whether max_rel_error <= tol
    :type passed: bool
    :param tol: Tolerance used
    :type tol: float
    :param checked: Number of coordinates compared
    :type checked: int
    :param excluded: Coordinates skipped as non-smooth points
    :type excluded: tuple[tuple[int, ...], ...]
    """

    max_rel_error: float
    passed: bool
    tol: float
    checked: int
    excluded: tuple[tuple[int, ...], ...]

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"--- Gradient Check [{status}] ---\n"
            f"  Max rel. error:  {self.max_rel_error:.3e} (tol {self.tol:.1e})\n"
            f"  Checked:         {self.checked}\n"
            f"  Non-smooth:      {len(self.excluded)}"
        )


def grad_check(fn: Callable[[Tensor], Tensor], point: Tensor | ArrayLike, h: float = 1e-5,
               tol: float = 1e-4, kink_tol: float = 0.1, curvature_bound: float = 1e3,
               floor: float = 1e-6) -> GradCheckReport:
    """Compares the gradient from `backward` with central differences at every coordinate
    of `point`.

    A coordinate is treated as a non-smooth point, and excluded, when its forward and
    backward one-sided differences disagree by more than `kink_tol` relative to their
    size and by more than `curvature_bound * h` in absolute terms.

    :param fn: Scalar-valued function of one tensor
    :type fn: Callable[[Tensor], Tensor]
    :param point: Where to evaluate
    :type point: Tensor | ArrayLike
    :param h: Finite-difference step
    :type h: float
    :param tol: Pass threshold on the relative error
    :type tol: float
    :param kink_tol: Relative one-sided disagreement that marks a kink
    :type kink_tol: float
    :param curvature_bound: Largest second derivative still considered smooth
    :type curvature_bound: float
    :param floor: Lower bound of the relative-error denominator
    :type floor: float
    :return: The report
    :rtype: GradCheckReport
    """

    base = np.array(point.data if isinstance(point, Tensor) else point, dtype=np.float64)
    tracked = Tensor(base.copy(), requires_grad=True)
    fn(tracked).backward()
    analytic: NDArray[np.float64] = tracked.grad

    def evaluate(values: NDArray[np.float64]) -> float:
        return fn(Tensor(values)).item()

    f0 = evaluate(base)
    worst = 0.0
    checked = 0
    excluded = []
    for index in np.ndindex(base.shape):
        shifted = base.copy()
        shifted[index] = base[index] + h
        f_plus = evaluate(shifted)
        shifted[index] = base[index] - h
        f_minus = evaluate(shifted)
        forward, backward = (f_plus - f0) / h, (f0 - f_minus) / h
        disagreement = abs(forward - backward)
        if (disagreement > kink_tol * max(abs(forward), abs(backward))
                and disagreement > curvature_bound * h):
            excluded.append(tuple(int(i) for i in index))
            continue
        numeric = (f_plus - f_minus) / (2 * h)
        error = abs(analytic[index] - numeric) / max(abs(analytic[index]), abs(numeric), floor)
        worst = max(worst, float(error))
        checked += 1
    report = GradCheckReport(max_rel_error=worst, passed=worst <= tol, tol=tol, checked=checked,
                             excluded=tuple(excluded))
    logger.debug("grad check: %d checked, %d excluded, max rel. error %.3e",
                 checked, len(excluded), worst)
    return report
