"""Scaled relative graphs of input/output operators.

Sampling, exact LTI regions via hyperbolic convex hulls of Nyquist loci,
describing-function approximations, region algebra, and certification of
incremental system properties.
"""

from .errors import (
    ComplexSignalError,
    DegenerateAngleError,
    DegeneratePairError,
    IncompatibleSignalsError,
    InfinitePreimageError,
    InfiniteRegionError,
    PoleOnAxisError,
    SrgError,
    UnsupportedRegionError,
)
from .signals import (
    DEFAULT_N,
    PeriodicSignal,
    Spectrum,
    angle_between,
    from_spectrum,
    harmonic_truncate,
    inner_product,
    make_input,
    norm,
    spectral_inner_product,
    to_spectrum,
)
from .operators import (
    DescribingFn,
    RationalTF,
    StaticNL,
    custom,
    deadzone,
    describing_fn,
    df_numeric,
    df_saturation,
    lti_apply,
    relu,
    saturation,
    static_apply,
    static_nl,
    tf_eval,
)
from .sampler import (
    DEFAULT_H,
    SrgCloud,
    SrgPoint,
    cloud_from_csv,
    cloud_to_csv,
    sample_df,
    sample_lti,
    sample_static_nl,
    z_linear,
    z_of_pair,
)
from .hyperbolic import (
    GeodesicArc,
    HHull,
    arc_min,
    arc_points,
    bk_inverse,
    bk_map,
    h_convex_hull,
    hull_contains,
    hull_from_dict,
    hull_to_dict,
    lti_srg_region,
    nyquist_locus,
)
from .regions import (
    CertificationReport,
    CircleCurve,
    CloudRegion,
    ContainmentCertificate,
    Disc,
    DiscComplement,
    EmptyRegion,
    FullPlane,
    GainBound,
    HalfPlane,
    HullRegion,
    IncrementalPositivity,
    IqcProperty,
    IqcSpec,
    Region,
    certify,
    chord_property,
    cloud_within,
    contains,
    feedback,
    intersect,
    iqc_region,
    minkowski_sum,
    moebius_invert,
    region_from_dict,
    region_to_dict,
    report_to_dict,
)

__version__ = "0.1.0"
