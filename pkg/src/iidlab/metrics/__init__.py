from .metrics import PIXEL_SCALE, SSIM_WINDOW, mse, psnr, rmse, ssim
from .report import (CSV_COLUMNS, METRICS_CSV, METRICS_JSON, MetricReport, MetricRow, evaluate,
                     evaluate_decomposition, measure, pair_directories)
from .metric_exceptions import EmptyEvaluationException, UnmatchedPairsException, WindowSizeException

__all__ = ['PIXEL_SCALE', 'SSIM_WINDOW', 'mse', 'psnr', 'rmse', 'ssim', 'CSV_COLUMNS', 'METRICS_CSV',
           'METRICS_JSON', 'MetricReport', 'MetricRow', 'evaluate', 'evaluate_decomposition',
           'measure', 'pair_directories', 'EmptyEvaluationException', 'UnmatchedPairsException',
           'WindowSizeException']
