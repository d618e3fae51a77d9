"""Kernel backend selection.

The compiled extension is preferred when it imports; otherwise the NumPy
implementation is used. ``use_backend`` switches explicitly (tests and the
benchmark compare both).
"""
from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

kernels = _compiled if _compiled is not None else _pykernels


def available():
    names = [_pykernels.NAME]
    if _compiled is not None:
        names.insert(0, _compiled.NAME)
    return names


def name():
    return kernels.NAME


def use_backend(which):
    """Select ``"compiled"`` or ``"python"`` kernels; returns the previous name."""
    global kernels
    previous = kernels.NAME
    if which == "python":
        kernels = _pykernels
    elif which == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built; reinstall with Cython available")
        kernels = _compiled
    else:
        raise ValueError(f"unknown backend {which!r}")
    return previous
