"""Kernel backend selection.

The compiled Cython kernels are used when the extension imports; otherwise
the NumPy fallback is used.  ``use_backend`` switches at runtime, which the
benchmark and the cross-backend tests rely on.
"""

from contextlib import contextmanager

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels


def available_backends():
    return sorted(_BACKENDS)


def backend_name():
    return _active.NAME


def kernels():
    """The module currently serving kernel calls."""
    return _active


def set_backend(name):
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {', '.join(available_backends())}"
        ) from None


@contextmanager
def use_backend(name):
    previous = _active.NAME
    set_backend(name)
    try:
        yield kernels()
    finally:
        set_backend(previous)
