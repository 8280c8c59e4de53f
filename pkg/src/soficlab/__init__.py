"""Finite, checkable machinery around sofic and hyperlinear groups.

Subpackages: ``perm`` and ``unitary`` (metric groups), ``groups`` with the
``smallgroups`` catalog,
``formula``, ``approx``, ``rankalg``, ``entropy``, ``stability`` and the
``cli``. Hot loops live in ``kernels`` with numba and numpy backends chosen by
the ``SOFICLAB_BACKEND`` environment variable.
"""
from importlib import resources

from .config import DEFAULT_CAPS, CapExceeded, Caps, RunConfig
from .perm import Permutation, hamming_length, parse_perm, word_eval

__version__ = "0.1.0"


def data_path(name: str) -> str:
    """Filesystem path of a bundled example input."""
    return str(resources.files(__name__).joinpath("data", name))


__all__ = ["DEFAULT_CAPS", "CapExceeded", "Caps", "RunConfig", "Permutation", "hamming_length",
           "parse_perm", "word_eval", "data_path", "__version__"]
