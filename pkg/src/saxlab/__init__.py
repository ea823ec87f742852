"""Symbolic aggregate approximation and its statistical evaluation."""

__version__ = "0.1.0"

from .core import (BinEdges, Histogram, as_series, histogram, quantile_edges,
                   scale_unit, znormalize)
from .symbolic import (Breakpoints, PaaValues, SaxConfig, SaxWord,
                       gaussian_breakpoints, paa, reconstruct_paa,
                       reconstruct_sax, sax, sax_word)
from .metrics import (MetricsRecord, iec, iec_for_representation, info_loss,
                      kl_divergence)
from .entropy import (PePoint, PermutationSpec, pe_on_sax, pe_profile,
                      permutation_entropy, rank_pattern)
from .correlation import (CorrelogramResult, DegenerateSeriesError,
                          abs_mean_acf, acf, correlogram, pacf)
from .evaluate import (BopHistogram, Dataset, RegressionFit, analyze_dataset,
                       load_dataset, nn1_bop, nn1_euclidean,
                       quad_regression_origin, sax_bop)
