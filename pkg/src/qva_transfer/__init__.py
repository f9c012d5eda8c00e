"""
qva-transfer - one-shot quantum variational transfer for single-qubit classifiers.
"""

__version__ = "0.1.0"
__all__ = ["__version__"]
