"""valsweep: compare data-partitioning strategies for binary classifiers.

Evaluates nested cross-validation, hold-out sweeps, k-fold sweeps, and
repeated hold-out across seven reference classifier families on tabular
CSV datasets, and reports the best strategy per model per metric.
"""

from ._kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
