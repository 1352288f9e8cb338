"""Parseval frames, the POVMs they generate and the spectra of their operators."""

__version__ = "0.1.0"

from .errors import FpkError
from .frames import (
    Frame,
    coherence,
    excess,
    frame_bounds,
    gram,
    is_parseval,
    naimark_extend,
    random_parseval,
)
from .operators import (
    build_H,
    naimark_symmetric_domain,
    spectrum_commutative,
    spectrum_cross_check,
    spectrum_direct,
    spectrum_via_gram,
)
from .povm import (
    JointMeasurability,
    LabeledFrame,
    effect,
    is_commutative,
    joint_measurability,
    ray_decomposition,
    sharp_version,
)
from .special_frames import (
    conference_eigs,
    conference_matrix,
    grassmannian_from_conference,
    mercedes_eigs,
    mercedes_frame,
    r3_conference_frame,
)
