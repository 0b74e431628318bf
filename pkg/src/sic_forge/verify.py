"""Fiducial certification and SIC-set construction.

A unit vector is a fiducial exactly when every nonzero displacement overlap
<psi|D_r|psi> has squared modulus 1/(d+1).  Fourier transforming the overlap
power spectrum turns that family of conditions into quartic component
equations with no phase factors left in them:

    sum_j psi_j conj(psi_{j+k}) conj(psi_{j+l}) psi_{j+k+l}
        = (delta_{k0} + delta_{l0}) / (d+1)      for all k, l in Z_d.

Both forms are evaluated here by componentwise formulas; dense-matrix
evaluation is kept to the test-suite as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wh import as_state_vector, displace_state, phase_constants

__all__ = [
    "FourierIdentityCheck",
    "GramOverlaps",
    "SicSet",
    "build_sic_set",
    "fourier_identity_check",
    "gram_overlaps",
    "gram_residual",
    "quartic_defects",
    "quartic_residual",
    "quartic_target",
]


def _overlap_grid(psi: np.ndarray) -> np.ndarray:
    """All d^2 overlaps <psi|D_(r1,r2)|psi>, indexed [r1, r2].

    Uses tau**(r1*r2) * sum_j omega**(j*r2) conj(psi_{j+r1}) psi_j.
    """
    d = psi.shape[0]
    pc = phase_constants(d)
    idx = np.arange(d)
    add = (idx[:, None] + idx[None, :]) % d
    b = psi.conj()[add] * psi[None, :]
    dft = pc.omega_powers[np.outer(idx, idx) % d]
    tau_phase = np.exp(1j * (np.pi * ((d + 1) * np.outer(idx, idx)) / d))
    return tau_phase * (b @ dft)


@dataclass(frozen=True)
class GramOverlaps:
    """Displacement overlaps of a state and their phase angles, indexed [r1, r2].

    ``phases[r]`` is the argument of the overlap at r != (0, 0); the origin
    entry is fixed to 0.0.
    """

    d: int
    values: np.ndarray
    phases: np.ndarray


def gram_overlaps(psi) -> GramOverlaps:
    """Compute all d^2 displacement overlaps via the componentwise formula."""
    psi = as_state_vector(psi)
    values = _overlap_grid(psi)
    phases = np.angle(values)
    phases[0, 0] = 0.0
    values.setflags(write=False)
    phases.setflags(write=False)
    return GramOverlaps(d=psi.shape[0], values=values, phases=phases)


def gram_residual(psi) -> float:
    """Largest deviation of |<psi|D_r|psi>|^2 from 1/(d+1) over r != 0."""
    psi = as_state_vector(psi)
    d = psi.shape[0]
    dev = np.abs(np.abs(_overlap_grid(psi)) ** 2 - 1.0 / (d + 1))
    dev[0, 0] = 0.0
    return float(dev.max())


def quartic_target(d: int) -> np.ndarray:
    """Right-hand side (delta_{k0} + delta_{l0}) / (d+1) as a (k, l) matrix."""
    target = np.zeros((d, d))
    target[0, :] += 1.0 / (d + 1)
    target[:, 0] += 1.0 / (d + 1)
    return target


def _quartic_terms(psi: np.ndarray) -> np.ndarray:
    """T[k, l] = sum_j psi_j conj(psi_{j+k}) conj(psi_{j+l}) psi_{j+k+l}, indices mod d."""
    d = psi.shape[0]
    idx = np.arange(d)
    add = (idx[:, None] + idx[None, :]) % d
    m = psi[None, :] * psi.conj()[add]
    return np.einsum("kj,klj->kl", m, m.conj()[:, add])


def quartic_defects(psi) -> np.ndarray:
    """Complex defect matrix of the quartic fiducial equations, entry per (k, l)."""
    psi = as_state_vector(psi)
    return _quartic_terms(psi) - quartic_target(psi.shape[0])


def quartic_residual(psi) -> float:
    """Largest modulus among the quartic equation defects."""
    return float(np.max(np.abs(quartic_defects(psi))))


@dataclass(frozen=True)
class FourierIdentityCheck:
    """Both sides of the overlap power-spectrum identity at one index pair."""

    lhs: complex
    rhs: complex

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)


def fourier_identity_check(psi, k: int, r1: int) -> FourierIdentityCheck:
    """Evaluate both sides of the power-spectrum identity at one (k, r1).

    lhs = (1/d) sum_{r2} omega**(k*r2) |<psi|D_(r1,r2)|psi>|^2 and rhs is the
    matching quartic component sum.  The two agree for every unit vector,
    fiducial or not; the identity is what makes the quartic equations
    equivalent to the overlap conditions.
    """
    psi = as_state_vector(psi)
    d = psi.shape[0]
    k, r1 = int(k) % d, int(r1) % d
    pc = phase_constants(d)
    idx = np.arange(d)
    row = _overlap_grid(psi)[r1, :]
    lhs = complex(np.sum(pc.omega_powers[(k * idx) % d] * np.abs(row) ** 2) / d)
    rhs = complex(
        np.sum(psi[idx] * psi.conj()[(idx + k) % d] * psi.conj()[(idx + r1) % d] * psi[(idx + k + r1) % d])
    )
    return FourierIdentityCheck(lhs=lhs, rhs=rhs)


@dataclass(frozen=True)
class SicSet:
    """A fiducial's displacement orbit with certification residuals.

    Vector and projector i correspond to the displacement index
    ``(i // d, i % d)``.  ``certified`` is True when both residuals are within
    ``tol``; an uncertified set is still returned with honest residuals.
    """

    fiducial: np.ndarray
    vectors: np.ndarray
    projectors: np.ndarray
    gram_residual: float
    quartic_residual: float
    tol: float
    certified: bool

    @property
    def d(self) -> int:
        return self.fiducial.shape[0]


def build_sic_set(psi, tol: float = 1e-10) -> SicSet:
    """Displace a candidate through the whole index grid and certify the orbit."""
    psi = as_state_vector(psi)
    d = psi.shape[0]
    vectors = np.empty((d * d, d), dtype=complex)
    for r1 in range(d):
        for r2 in range(d):
            vectors[r1 * d + r2] = displace_state(psi, (r1, r2))
    projectors = np.einsum("ia,ib->iab", vectors, vectors.conj())
    g = gram_residual(psi)
    q = quartic_residual(psi)
    fiducial = psi.copy()
    for arr in (fiducial, vectors, projectors):
        arr.setflags(write=False)
    return SicSet(
        fiducial=fiducial,
        vectors=vectors,
        projectors=projectors,
        gram_residual=g,
        quartic_residual=q,
        tol=float(tol),
        certified=bool(g <= tol and q <= tol),
    )
