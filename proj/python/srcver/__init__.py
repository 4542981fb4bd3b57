"""Source verification for synthetic speech.

Thin Python surface over the C++ core: cosine/max scoring, open-set trial
protocols, EER/AUC metrics, the baseline log-mel extractor and the
post-processing operators. ``run_cli`` drives the ``srcver`` command line in
process and returns ``(exit_code, stdout, stderr)``.
"""

from ._core import (
    SrcverError,
    __version__,
    add_noise,
    compute_auc,
    compute_eer,
    compute_roc,
    convolve_ir,
    cosine_similarity,
    draw_snr,
    extract_baseline_embedding,
    fix_segment,
    generate_trials,
    l2_norm,
    load_audio,
    run_cli,
    score_trial,
    simulate_corpus,
    write_wav,
)

__all__ = [
    "SrcverError",
    "__version__",
    "add_noise",
    "compute_auc",
    "compute_eer",
    "compute_roc",
    "convolve_ir",
    "cosine_similarity",
    "draw_snr",
    "extract_baseline_embedding",
    "fix_segment",
    "generate_trials",
    "l2_norm",
    "load_audio",
    "run_cli",
    "score_trial",
    "simulate_corpus",
    "write_wav",
]
