"""Photon-number statistics of nonlinear coherent states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .state import FCoherentState, TwoModeFCoherentState

#: fano values within this band of 1 count as Poissonian, so float noise
#: near the identity deformation never reports spurious nonclassicality
CLASSIFICATION_BAND = 1e-9

SUB_POISSONIAN = "sub_poissonian"
POISSONIAN = "poissonian"
SUPER_POISSONIAN = "super_poissonian"


@dataclass(frozen=True, eq=False)
class PhotonStats:
    """Distribution with its first two moments and classification.

    ``dispersion`` is the photon-number variance <n^2> - <n>^2; ``fano``
    its ratio to the mean. ``tail_bound`` (inherited from the state's
    truncation) is the error bar the truncated moments carry. A state
    with mean 0 has no fano ratio; it is flagged ``degenerate`` and
    reported Poissonian by convention.
    """

    distribution: np.ndarray
    mean: float
    dispersion: float
    fano: float
    classification: str
    degenerate: bool
    tail_bound: float


@dataclass(frozen=True, eq=False)
class TwoModeDistribution:
    """Joint photon distribution with marginals and number covariance."""

    probabilities: np.ndarray
    marginal1: np.ndarray
    marginal2: np.ndarray
    mean1: float
    mean2: float
    covariance: float


def photon_distribution(state: FCoherentState) -> np.ndarray:
    """P(n) = |c_n|^2."""
    c = state.coeffs
    return c.real**2 + c.imag**2


def photon_stats(state: FCoherentState) -> PhotonStats:
    """Mean, dispersion and sub/super-Poissonian classification."""
    p = photon_distribution(state)
    n = np.arange(p.size, dtype=float)
    mean = float(np.dot(n, p))
    dispersion = float(np.dot(n * n, p)) - mean * mean
    if mean == 0.0:
        return PhotonStats(
            p, 0.0, dispersion, math.nan, POISSONIAN, True,
            state.truncation.tail_bound,
        )
    fano = dispersion / mean
    if abs(fano - 1.0) <= CLASSIFICATION_BAND:
        label = POISSONIAN
    elif fano < 1.0:
        label = SUB_POISSONIAN
    else:
        label = SUPER_POISSONIAN
    return PhotonStats(
        p, mean, dispersion, fano, label, False, state.truncation.tail_bound,
    )


def two_mode_distribution(state: TwoModeFCoherentState) -> TwoModeDistribution:
    """P(n1, n2) = |c_{n1 n2}|^2 with marginals and covariance."""
    c = state.coeffs
    p = c.real**2 + c.imag**2
    m1 = p.sum(axis=1)
    m2 = p.sum(axis=0)
    n1 = np.arange(m1.size, dtype=float)
    n2 = np.arange(m2.size, dtype=float)
    mean1 = float(np.dot(n1, m1))
    mean2 = float(np.dot(n2, m2))
    cross = float(n1 @ p @ n2)
    return TwoModeDistribution(p, m1, m2, mean1, mean2, cross - mean1 * mean2)
