"""Problem container, norm conventions, and the small shared numeric kernels.

The cone under study is ``P = {x : A x <= 0}`` for a dense real matrix ``A``.
Throughout the package the row space (image of ``A``) carries the sup norm and
the column space (domain) carries the Euclidean norm; this is the only norm
pair supported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

__all__ = [
    "HoffboundError",
    "NormPair",
    "ProblemInstance",
    "ZERO_MATRIX_FLOOR",
    "euclidean_norm",
    "pos_part_inf_norm",
    "relative_scale",
]

# Frobenius norms at or below this are treated as the zero matrix, for which
# the homogeneous Hoffman constant is 0 by convention.
ZERO_MATRIX_FLOOR = 1e-300


class HoffboundError(Exception):
    """Base class for all errors raised by this package."""


def pos_part_inf_norm(v: npt.ArrayLike) -> float:
    """Sup norm of the componentwise positive part, ``max(0, max_i v_i)``.

    This equals the sup-norm distance from ``v`` to the nonpositive orthant,
    which is how constraint violation of ``A x <= 0`` is measured.
    """
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        return 0.0
    return float(max(0.0, v.max()))


def euclidean_norm(v: npt.ArrayLike) -> float:
    """Euclidean norm with overflow-safe scaling (delegates to BLAS nrm2)."""
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        return 0.0
    return float(np.linalg.norm(v))


def relative_scale(frobenius_scale: float) -> float:
    """Reference scale ``max(1, ||A||_F)`` used by every relative tolerance."""
    return max(1.0, frobenius_scale)


@dataclass(frozen=True)
class NormPair:
    """The fixed norm convention: Euclidean on the domain, sup on the image.

    Only this pair is constructible.  The sup norm satisfies the componentwise
    compatibility property (``|y| <= |z|`` entrywise implies ``||y|| <= ||z||``)
    that the distance-to-violation identity relies on.
    """

    domain_norm: str = "l2"
    image_norm: str = "linf"

    def __post_init__(self) -> None:
        if self.domain_norm != "l2" or self.image_norm != "linf":
            raise ValueError(
                "only the (l2 domain, linf image) norm pair is supported"
            )


DEFAULT_NORMS = NormPair()


@dataclass(frozen=True)
class ProblemInstance:
    """Immutable dense matrix ``A`` defining the cone ``P = {x : A x <= 0}``.

    Attributes
    ----------
    A : ndarray, shape (m, n)
        Dense row-major matrix; read-only after construction.
    m, n : int
        Row and column counts, both at least 1.
    frobenius_scale : float
        Cached ``||A||_F``; relative tolerances are measured against
        ``max(1, frobenius_scale)``.
    """

    A: np.ndarray
    m: int
    n: int
    frobenius_scale: float
    norms: NormPair = field(default=DEFAULT_NORMS)

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError(f"matrix must be at least 1x1, got {self.m}x{self.n}")
        if self.A.shape != (self.m, self.n):
            raise ValueError(
                f"shape mismatch: A is {self.A.shape}, declared {(self.m, self.n)}"
            )
        if not np.isfinite(self.A).all():
            raise ValueError("matrix entries must be finite")
        fro = float(np.linalg.norm(self.A))
        if abs(fro - self.frobenius_scale) > 1e-14 * max(1.0, fro):
            raise ValueError(
                f"frobenius_scale {self.frobenius_scale!r} inconsistent with matrix ({fro!r})"
            )

    @classmethod
    def from_matrix(cls, A: npt.ArrayLike) -> "ProblemInstance":
        """Build an instance from any 2-d array-like of finite reals."""
        arr = np.array(A, dtype=float, order="C", copy=True)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got ndim={arr.ndim}")
        arr.flags.writeable = False
        m, n = arr.shape
        return cls(A=arr, m=m, n=n, frobenius_scale=float(np.linalg.norm(arr)))

    @property
    def is_zero(self) -> bool:
        """True when ``A`` is the zero matrix (cone is all of R^n)."""
        return self.frobenius_scale <= ZERO_MATRIX_FLOOR

    @property
    def scale(self) -> float:
        """``max(1, ||A||_F)``, the reference for relative tolerances."""
        return relative_scale(self.frobenius_scale)

    def residual_violation(self, u: npt.ArrayLike) -> float:
        """Sup-norm distance from ``A u`` to the nonpositive orthant."""
        return pos_part_inf_norm(self.A @ np.asarray(u, dtype=float))
