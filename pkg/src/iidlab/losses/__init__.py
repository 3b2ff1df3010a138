from .losses import (SMOOTHNESS_FALLOFF, TERM_NAMES, LossBreakdown, LossTargets, LossWeights,
                     l_ram, l_recon, l_rrg, l_sg, l_ss, loss_targets, rrg_tensor, total_loss)

__all__ = ['SMOOTHNESS_FALLOFF', 'TERM_NAMES', 'LossBreakdown', 'LossTargets', 'LossWeights',
           'l_ram', 'l_recon', 'l_rrg', 'l_sg', 'l_ss', 'loss_targets', 'rrg_tensor', 'total_loss']
