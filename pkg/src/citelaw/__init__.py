"""Percentile indicators, double-rank power laws and lognormal diagnostics
for citation distributions."""

__version__ = "0.1.0"

from .corpus import Corpus, CorpusError, JournalMeta, PaperRecord, dump_corpus, load_corpus, select
from .distfit import (KsResult, LogHistogram, LognormalFit, NppSeries, fit_lognormal,
                      inv_normal_cdf, ks_test, log_histogram, normal_cdf, npp)
from .errors import InsufficientDataError
from .indicators import (ConformityClass, IndicatorQuartet, IndicatorRow, classify_conformity,
                         mnc, pearson, quartet, uncited_share)
from .prng import Prng
from .rankfit import (CurvatureClass, PowerLawFit, classify_curvature, downscale_histogram,
                      fit_power_law, segment_slopes)
from .ranking import (DoubleRankSeries, PercentileProfile, RankedCorpus, double_rank,
                      percentile_profile, top_count, total_order)
from .synth import (SynthSpec, make_global_corpus, sample_discrete_lognormal,
                    sample_ideal_subsample, scenario)
