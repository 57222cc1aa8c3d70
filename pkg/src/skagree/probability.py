"""Exact finite-alphabet probability primitives.

Everything downstream (channels, capacities, exponents, the binning
simulator) is built on the handful of information measures in this module.
All logarithms are base 2, so every quantity is in bits.  Sums of
entropy-like terms use compensated summation (``math.fsum``) because the
exponent expressions raise small probabilities to fractional powers and
roundoff would otherwise leak into tolerance-1e-10 comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MASS_TOL = 1e-12


class PmfError(ValueError):
    """Raised when an array fails probability-mass validation."""


def _validate_mass(arr: np.ndarray) -> None:
    if arr.size < 1:
        raise PmfError("empty probability array")
    if np.any(arr < 0):
        raise PmfError("negative probability entry: min=%r" % float(arr.min()))
    total = math.fsum(arr.ravel().tolist())
    if abs(total - 1.0) > MASS_TOL:
        raise PmfError("total mass %.17g deviates from 1 by more than %g" % (total, MASS_TOL))


@dataclass(frozen=True)
class Pmf:
    """A validated probability mass function over one finite alphabet."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=float)
        if arr.ndim != 1:
            raise PmfError("Pmf must be one-dimensional, got shape %r" % (arr.shape,))
        _validate_mass(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    def __len__(self) -> int:
        return self.probs.size

    @staticmethod
    def uniform(k: int) -> "Pmf":
        return Pmf(np.full(k, 1.0 / k))

    @staticmethod
    def bernoulli(beta: float) -> "Pmf":
        """Binary pmf with P(1) = beta (the 'on' probability)."""
        if not 0.0 <= beta <= 1.0:
            raise PmfError("bernoulli parameter outside [0,1]: %r" % beta)
        return Pmf(np.array([1.0 - beta, beta]))


@dataclass(frozen=True)
class JointPmf:
    """A dense joint pmf over one or more finite alphabets."""

    probs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=float)
        _validate_mass(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def ndim(self) -> int:
        return self.probs.ndim

    def marginal(self, axis) -> Pmf:
        """Marginal pmf of a single axis."""
        axes = tuple(i for i in range(self.probs.ndim) if i != axis)
        return Pmf(self.probs.sum(axis=axes))

    def flatten_axes(self, axes) -> "JointPmf":
        """Merge the given leading axes into one (for grouped-variable MI)."""
        axes = tuple(axes)
        rest = tuple(i for i in range(self.probs.ndim) if i not in axes)
        moved = np.moveaxis(self.probs, axes + rest, range(self.probs.ndim))
        merged = moved.reshape((-1,) + tuple(self.probs.shape[i] for i in rest))
        return JointPmf(merged)


def _as_array(p) -> np.ndarray:
    if isinstance(p, (Pmf, JointPmf)):
        return p.probs
    return np.asarray(p, dtype=float)


def entropy(p) -> float:
    """Shannon entropy in bits, with the 0*log(0)=0 convention."""
    arr = _as_array(p).ravel()
    return -math.fsum(x * math.log2(x) for x in arr.tolist() if x > 0.0)


def binary_entropy(a: float) -> float:
    """Hb(a) = -a log2 a - (1-a) log2 (1-a)."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("binary_entropy argument outside [0,1]: %r" % a)
    if a == 0.0 or a == 1.0:
        return 0.0
    return -a * math.log2(a) - (1.0 - a) * math.log2(1.0 - a)


def bsc_convolve(a: float, b: float) -> float:
    """Crossover combination a*b = a(1-b) + (1-a)b of two symmetric flips."""
    if not 0.0 <= a <= 1.0 or not 0.0 <= b <= 1.0:
        raise ValueError("bsc_convolve arguments must lie in [0,1]")
    return a * (1.0 - b) + (1.0 - a) * b


def mutual_information(joint) -> float:
    """I(A;B) from a two-axis joint pmf, via H(A)+H(B)-H(A,B)."""
    arr = _as_array(joint)
    if arr.ndim != 2:
        raise ValueError("mutual_information expects a 2-axis joint, got ndim=%d" % arr.ndim)
    if not isinstance(joint, JointPmf):
        joint = JointPmf(arr)
    ha = entropy(arr.sum(axis=1))
    hb = entropy(arr.sum(axis=0))
    return ha + hb - entropy(arr)


def conditional_mutual_information(joint) -> float:
    """I(A;B|C) from a three-axis joint, conditioning on the last axis."""
    arr = _as_array(joint)
    if arr.ndim != 3:
        raise ValueError(
            "conditional_mutual_information expects a 3-axis joint, got ndim=%d" % arr.ndim
        )
    if not isinstance(joint, JointPmf):
        joint = JointPmf(arr)
    total = 0.0
    terms = []
    for c in range(arr.shape[2]):
        pc = math.fsum(arr[:, :, c].ravel().tolist())
        if pc <= 0.0:
            continue
        slice_ab = arr[:, :, c] / pc
        ha = entropy(slice_ab.sum(axis=1))
        hb = entropy(slice_ab.sum(axis=0))
        hab = entropy(slice_ab)
        terms.append(pc * (ha + hb - hab))
    total = math.fsum(terms)
    return total


def renyi_entropy(p, order: float) -> float:
    """Renyi entropy of order 1+alpha for alpha in (0,1]."""
    alpha = order - 1.0
    if not 0.0 < alpha <= 1.0:
        raise ValueError("renyi_entropy order must lie in (1,2], got %r" % order)
    arr = _as_array(p).ravel()
    s = math.fsum(x ** (1.0 + alpha) for x in arr.tolist() if x > 0.0)
    return -math.log2(s) / alpha
