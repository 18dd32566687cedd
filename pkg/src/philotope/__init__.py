"""philotope: a quantitative distance between literary styles.

Pipeline: preprocess sonnet corpora (stop-word removal + Spanish
stemming), embed the vocabulary with skipgram, compare per-poet point
clouds through 0-th persistence diagrams of the Vietoris-Rips filtration
under the exact bottleneck distance, and validate repeated trials with
repeated-measures ANOVA.
"""

__version__ = "0.1.0"

from ._kernels import KERNEL_NAME

__all__ = ["KERNEL_NAME", "__version__"]
