"""miamix: deterministic multi-stage mixed-sample data augmentation.

Masks from five generator families are sampled with Dirichlet-budgeted
ratios, morphologically augmented, merged, and applied to independently
augmented image views; labels are blended with the merged mask's realized
mean. Everything is reproducible from (seed, sample index).
"""

from .bench import BenchReport, run_bench
from .core import (
    RngStream,
    apply_mask,
    blend_labels,
    make_one_hot,
    mask_mean,
    validate_image,
    validate_label,
    validate_mask,
)
from .dataset_io import (
    ManifestEntry,
    SidecarRecord,
    decode_image,
    encode_outputs,
    encode_png,
    load_manifest,
    read_mixlog,
)
from .errors import ArgumentError, ConfigError, DataError, InvariantError, MiamixError
from .generators import (
    GaussianMaskParams,
    GeneratorKind,
    METHODS,
    gen_constant_mask,
    gen_cutmix_mask,
    gen_fmix_mask,
    gen_gaussian_mask,
    gen_gridmix_mask,
    generate,
)
from .maskaug import (
    MaskAugDraws,
    MaskAugPolicy,
    augment_mask,
    rotate_mask,
    shear_mask,
    smooth_mask,
)
from .merging import MergeMode, merge, merge_clipped_sum, merge_product, merged_lambda
from .pipeline import (
    MiamixConfig,
    MixedSample,
    MixPlan,
    ViewAugPolicy,
    mix_batch,
    mix_one,
    pair_samples,
    view_augment,
)
from .preview import contact_sheet, synthetic_batch
from .replay import ReplayReport, replay_mixlog
from .sampling import (
    MethodDraw,
    RatioDraw,
    sample_beta,
    sample_lambdas,
    sample_layer_count,
    sample_methods,
)
from .stats import run_stats, write_stats_csv

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "BenchReport",
    "ConfigError",
    "DataError",
    "GaussianMaskParams",
    "GeneratorKind",
    "InvariantError",
    "METHODS",
    "ManifestEntry",
    "MaskAugDraws",
    "MaskAugPolicy",
    "MergeMode",
    "MethodDraw",
    "MiamixConfig",
    "MiamixError",
    "MixPlan",
    "MixedSample",
    "RatioDraw",
    "ReplayReport",
    "RngStream",
    "SidecarRecord",
    "ViewAugPolicy",
    "apply_mask",
    "augment_mask",
    "blend_labels",
    "contact_sheet",
    "decode_image",
    "encode_outputs",
    "encode_png",
    "gen_constant_mask",
    "gen_cutmix_mask",
    "gen_fmix_mask",
    "gen_gaussian_mask",
    "gen_gridmix_mask",
    "generate",
    "load_manifest",
    "make_one_hot",
    "mask_mean",
    "merge",
    "merge_clipped_sum",
    "merge_product",
    "merged_lambda",
    "mix_batch",
    "mix_one",
    "pair_samples",
    "read_mixlog",
    "replay_mixlog",
    "rotate_mask",
    "run_bench",
    "run_stats",
    "sample_beta",
    "sample_lambdas",
    "sample_layer_count",
    "sample_methods",
    "shear_mask",
    "smooth_mask",
    "synthetic_batch",
    "validate_image",
    "validate_label",
    "validate_mask",
    "view_augment",
    "write_stats_csv",
]
