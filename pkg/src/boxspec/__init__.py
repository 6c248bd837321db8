"""Spectra of the complex Laplacian on products of planar domains."""

from .errors import (
    AmbiguousKernelError,
    BoxspecError,
    ConfigError,
    EnvelopeError,
    MultiplicityUnavailableError,
    UnavailableError,
    VerificationError,
)
from .spectrum import (
    INF,
    ONE,
    ZERO,
    BidegreeSpectrum,
    Cardinal,
    GapReport,
    HarmonicDims,
    SpectralPoint,
    TruncatedSpectrum,
    Verdict,
    bidegree_product,
    gap_report,
    kernel_dim,
    kunneth_product,
    minkowski_sum,
    minkowski_sum_many,
    total_spectrum,
)
from .bessel import bessel_j, bessel_zero
from .domains import Custom, Disc, Rectangle, factor_bidegree, load_custom_spectrum
from .polydomain import (
    Compactness,
    EigenLabel,
    compactness_verdict,
    counting_function,
    eigenform_sample,
    enumerate_box_q,
)

__version__ = "0.1.0"
