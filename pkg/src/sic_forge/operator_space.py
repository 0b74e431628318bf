"""Hilbert-Schmidt geometry of operator sets.

The central quantity is the order-t orthonormality defect of a family of
positive semi-definite, unit-HS-norm operators: the sum of tr(A_i A_j)**t over
ordered pairs i != j.  For families of exactly d^2 operators the defect is
bounded below by d^2 (d-1) / (d+1)**(t-1), and the bound is attained exactly
by SIC sets (rank-1 projectors with constant pairwise overlap 1/(d+1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .wh import check_dim

__all__ = [
    "KtReport",
    "OperatorSet",
    "QuasiOnbReport",
    "frame_potential",
    "hs_inner",
    "kt_lower_bound",
    "kt_measure",
    "operator_set",
    "projectors_from_vectors",
    "quasi_onb_certify",
]


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product tr(A^dagger B)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ValueError(f"operands must be square matrices of equal shape, got {a.shape} and {b.shape}")
    return complex(np.vdot(a, b))


@dataclass(frozen=True)
class OperatorSet:
    """A validated family of PSD operators with unit Hilbert-Schmidt norm."""

    d: int
    ops: np.ndarray

    @property
    def size(self) -> int:
        return self.ops.shape[0]


def operator_set(
    ops,
    hermitian_tol: float = 1e-12,
    psd_floor: float = -1e-10,
    norm_tol: float = 1e-10,
) -> OperatorSet:
    """Validate and package operators: Hermitian, PSD within a floor, tr(A^2) = 1.

    The eigenvalue floor accepts numerically rounded projectors coming out of
    floating-point searches.
    """
    arr = np.array(ops, dtype=complex)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ValueError(f"expected an array of square matrices, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("operator set is empty")
    d = check_dim(arr.shape[1])

    herm_dev = float(np.max(np.abs(arr - arr.conj().transpose(0, 2, 1))))
    if herm_dev > hermitian_tol:
        raise ValueError(f"operator set is not Hermitian: max deviation {herm_dev:.3e}")
    for i, a in enumerate(arr):
        low = float(np.linalg.eigvalsh(a)[0])
        if low < psd_floor:
            raise ValueError(f"operator {i} has eigenvalue {low:.3e} below the PSD floor {psd_floor:.1e}")
    sq_norms = np.einsum("iab,iba->i", arr, arr).real
    norm_dev = float(np.max(np.abs(sq_norms - 1.0)))
    if norm_dev > norm_tol:
        raise ValueError(f"operators are not unit HS-norm: max |tr(A^2) - 1| = {norm_dev:.3e}")

    arr.setflags(write=False)
    return OperatorSet(d=d, ops=arr)


def projectors_from_vectors(vectors) -> OperatorSet:
    """Rank-1 projectors |v><v| of a family of unit vectors, as an OperatorSet."""
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2:
        raise ValueError(f"expected a 2-D array of row vectors, got shape {v.shape}")
    return operator_set(np.einsum("na,nb->nab", v, v.conj()))


@dataclass(frozen=True)
class KtReport:
    """Value of the order-t orthonormality defect next to its PSD lower bound.

    The bound applies only to families of exactly d^2 operators; for any other
    size ``lower_bound`` and ``gap`` are None.
    """

    t: float
    value: float
    lower_bound: Optional[float]
    gap: Optional[float]


def kt_lower_bound(d: int, t: float) -> float:
    """Least possible order-t defect of d^2 PSD unit-norm operators: d^2(d-1)/(d+1)^(t-1)."""
    d = check_dim(d)
    t = float(t)
    if t < 1.0:
        raise ValueError(f"t must be >= 1, got {t}")
    return d * d * (d - 1) / (d + 1) ** (t - 1)


def kt_measure(opset: OperatorSet, t: float) -> KtReport:
    """Sum of tr(A_i A_j)**t over ordered pairs i != j.

    Overlaps are clamped at zero before exponentiation so that fractional t
    stays well defined under roundoff (exact overlaps of PSD operators are
    nonnegative).
    """
    t = float(t)
    if t < 1.0:
        raise ValueError(f"t must be >= 1, got {t}")
    overlaps = np.einsum("iab,jba->ij", opset.ops, opset.ops).real
    np.fill_diagonal(overlaps, 0.0)
    value = float(np.sum(np.clip(overlaps, 0.0, None) ** t))
    if opset.size == opset.d**2:
        bound = kt_lower_bound(opset.d, t)
        return KtReport(t=t, value=value, lower_bound=bound, gap=value - bound)
    return KtReport(t=t, value=value, lower_bound=None, gap=None)


def frame_potential(vectors, norm_tol: float = 1e-10) -> float:
    """Fourth-power overlap sum over all ordered vector pairs, diagonal included."""
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2 or v.shape[0] == 0:
        raise ValueError(f"expected a nonempty 2-D array of row vectors, got shape {v.shape}")
    norms = np.sum(np.abs(v) ** 2, axis=1)
    worst = float(np.max(np.abs(norms - 1.0)))
    if worst > norm_tol:
        raise ValueError(f"vectors are not unit-norm: max |norm^2 - 1| = {worst:.3e}")
    gram = v @ v.conj().T
    return float(np.sum(np.abs(gram) ** 4))


@dataclass(frozen=True)
class QuasiOnbReport:
    """Residuals of the rank-1, equal-overlap, and completeness conditions."""

    d: int
    tol: float
    projector_deviation: float
    trace_deviation: float
    overlap_deviation: float
    completeness_deviation: float
    passed: bool


def quasi_onb_certify(opset: OperatorSet, tol: float) -> QuasiOnbReport:
    """Certify that d^2 operators are rank-1 projectors with constant overlap 1/(d+1).

    Reports the worst deviation of each condition; a passing family also
    resolves the identity, sum_i A_i = d*I, which is checked directly rather
    than inferred.
    """
    d = opset.d
    if opset.size != d * d:
        raise ValueError(f"certification needs exactly d^2 = {d * d} operators, got {opset.size}")
    ops = opset.ops

    squares = np.einsum("iab,ibc->iac", ops, ops)
    projector_dev = float(np.max(np.abs(squares - ops)))
    traces = np.einsum("iaa->i", ops)
    trace_dev = float(np.max(np.abs(traces - 1.0)))

    overlaps = np.einsum("iab,jba->ij", ops, ops).real
    off = overlaps - 1.0 / (d + 1)
    np.fill_diagonal(off, 0.0)
    overlap_dev = float(np.max(np.abs(off)))

    completeness_dev = float(np.max(np.abs(ops.sum(axis=0) - d * np.eye(d))))

    tol = float(tol)
    passed = max(projector_dev, trace_dev, overlap_dev, completeness_dev) <= tol
    return QuasiOnbReport(
        d=d,
        tol=tol,
        projector_deviation=projector_dev,
        trace_deviation=trace_dev,
        overlap_deviation=overlap_dev,
        completeness_deviation=completeness_dev,
        passed=passed,
    )
