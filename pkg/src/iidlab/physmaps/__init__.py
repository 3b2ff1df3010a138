from .feature_maps import (DEFAULT_EPS, DEFAULT_SG_THRESHOLD, DEFAULT_SIGMA, RRG_PAIRS, Channel,
                           FeatureMaps, RamMap, RrgMap, SgMap, f_ram, f_rrg, f_sg, featurize,
                           log_ratio, log_ratio_array, m_rrg, mask_from_rrg, ram_array, rrg_array,
                           sg_arrays, sg_reduce, sg_reduced_arrays)
from .map_io import MAP_MAGIC, load_map, save_map

__all__ = ['DEFAULT_EPS', 'DEFAULT_SG_THRESHOLD', 'DEFAULT_SIGMA', 'RRG_PAIRS', 'Channel',
           'FeatureMaps', 'RamMap', 'RrgMap', 'SgMap', 'f_ram', 'f_rrg', 'f_sg', 'featurize',
           'log_ratio', 'log_ratio_array', 'm_rrg', 'mask_from_rrg', 'ram_array', 'rrg_array',
           'sg_arrays', 'sg_reduce', 'sg_reduced_arrays', 'MAP_MAGIC', 'load_map', 'save_map']
