"""Affine (G, X)-structures at desk scale: affine group algebra, developing maps,
and classification of holonomy groups preserving an affine line."""

__version__ = "0.1.0"

from .affine_core import (
    AffineMap,
    FixedFlat,
    GroupPresentation,
    NoFixedPoint,
    UniqueFixedPoint,
    Word,
    apply,
    compose,
    eigen_one_space,
    evaluate_word,
    fixed_points,
    inverse,
    maps_close,
)
from .dev_chart import ChartComplex, DevelopedPath, DevPath, develop, equivariance_check, loop_holonomy
from .fixtures import ExampleId, build_example
from .flows import (
    Ball,
    FlowKind,
    FlowSpec,
    commutes_with_flow,
    flow,
    forward_absorbing,
    induced_transverse_action,
    line_avoidance_check,
    radial_saturation_contains,
)
from .line_groups import (
    BlockForm,
    ClassificationVerdict,
    Tag,
    block_decompose,
    classify_cyclic,
    freeness_violation_witness,
    membership,
    radiant_conjugator,
    shear_normal_form,
    translation_character,
    verify_verdict,
)
from .tiling import TilingJob, render_tiling
