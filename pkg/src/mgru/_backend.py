"""Kernel backend selection.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy fallback. Set ``MGRU_PURE_PYTHON=1`` to force the fallback.
"""
import importlib
import os

from mgru import _pykernels


def load(name: str):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("mgru._kernels")
    raise ValueError(f"unknown backend {name!r}")


def available() -> list[str]:
    names = ["python"]
    try:
        load("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("MGRU_PURE_PYTHON", "") not in ("", "0"):
    kernels, BACKEND = _pykernels, "python"
else:
    try:
        kernels, BACKEND = load("cython"), "cython"
    except ImportError:
        kernels, BACKEND = _pykernels, "python"
