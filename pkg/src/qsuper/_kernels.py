"""Kernel selection: the compiled extension when available, else pure Python."""

try:
    from ._ckernels import matmul_mod, rank_mod

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build
    from ._pykernels import matmul_mod, rank_mod

    BACKEND = "python"

__all__ = ["BACKEND", "matmul_mod", "rank_mod"]
