"""Morphological filtrations, cubical persistence and persistence-guided denoising."""
from .denoise import DenoiseParams, DenoiseTrace, denoise_binary, denoise_gray, denoise_rgb
from .filtration import (OneParamFiltration, OperatorPair, extended_filtration,
                         morph_filtration, sublevel_filtration, verify_multifiltration)
from .image import as_image, threshold
from .metrics import extended_iou, iou
from .morphology import (SESequence, StructuringElement, closing, dilate, erode, opening,
                         square, square_se_sequence)
from .noise import NoiseSpec, add_salt_pepper
from .persistence import (BettiPair, PersistenceDiagram, betti_at, betti_numbers,
                          build_complex, compute_persistence, oracle_betti, persistence_diagram)

__version__ = "0.1.0"
