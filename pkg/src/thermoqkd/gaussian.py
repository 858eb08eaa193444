"""Covariance-matrix algebra for Gaussian states in shot-noise units.

Quadrature ordering is fixed to (q1, p1, q2, p2, ...) and the vacuum
covariance is the identity, so a state is physical when every symplectic
eigenvalue is >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateConditioningError,
    UnphysicalStateError,
    ValidationError,
)

LN2 = math.log(2.0)

# Relative tolerance for the symmetry check of covariance matrices.
SYMMETRY_RTOL = 1e-12

# Symplectic eigenvalues in [1 - EIGENVALUE_CLAMP_TOL, 1) are clamped to 1;
# anything below signals an unphysical state and raises.
EIGENVALUE_CLAMP_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form for the (q1,p1,...) ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def _check_symmetric(matrix: np.ndarray) -> None:
    scale = max(float(np.max(np.abs(matrix))), 1.0)
    if float(np.max(np.abs(matrix - matrix.T))) > SYMMETRY_RTOL * scale:
        raise ValidationError("covariance matrix is not symmetric")


def _check_positive_definite(matrix: np.ndarray) -> None:
    try:
        np.linalg.cholesky(matrix)
    except np.linalg.LinAlgError:
        raise ValidationError("covariance matrix is not positive definite") from None


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real symmetric 2n x 2n quadrature covariance matrix (SNU)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 or m.shape[0] == 0:
            raise ValidationError(f"expected a 2n x 2n matrix, got shape {m.shape}")
        _check_symmetric(m)
        _check_positive_definite(m)
        m = 0.5 * (m + m.T)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class SymplecticSpectrum:
    """Symplectic eigenvalues of a physical state, sorted descending."""

    eigenvalues: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(sorted((float(v) for v in self.eigenvalues), reverse=True))
        if any(v < 1.0 for v in vals):
            raise UnphysicalStateError(f"symplectic eigenvalues below 1: {vals}")
        object.__setattr__(self, "eigenvalues", vals)


def entropic_h(x):
    """Bosonic entropy in bits of a mode with symplectic eigenvalue x.

    Accepts scalars or arrays.  Values in [1 - 1e-9, 1) are clamped to 1;
    anything below raises, since it signals an unphysical eigenvalue.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 1.0 - EIGENVALUE_CLAMP_TOL):
        raise UnphysicalStateError(f"entropic_h domain error: x = {x} below 1")
    u = np.maximum(0.5 * (arr - 1.0), 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        # (u+1)log2(u+1) via log1p keeps accuracy near the pure-state limit.
        out = np.where(
            u > 0.0,
            (u + 1.0) * np.log1p(u) / LN2 - u * np.log2(np.where(u > 0.0, u, 1.0)),
            0.0,
        )
    if np.ndim(x) == 0:
        return float(out)
    return out


def _clamp_eigenvalue(nu: float) -> float:
    if nu >= 1.0:
        return nu
    if nu >= 1.0 - EIGENVALUE_CLAMP_TOL:
        return 1.0
    raise UnphysicalStateError(f"symplectic eigenvalue {nu} below 1 - {EIGENVALUE_CLAMP_TOL}")


def symplectic_eigenvalues_via_form(cm: CovarianceMatrix) -> SymplecticSpectrum:
    """Reference path: eigenvalues of |i Omega V|, valid for any mode count."""
    v = cm.matrix
    n = cm.n_modes
    omega = symplectic_form(n)
    vals = np.abs(np.linalg.eigvals(1j * omega @ v))
    vals = np.sort(vals)[::-1]
    # |i Omega V| carries each symplectic eigenvalue twice.
    nus = [_clamp_eigenvalue(float(vals[2 * k])) for k in range(n)]
    return SymplecticSpectrum(tuple(nus))


def two_mode_symplectic_eigenvalues(
    det_a: float, det_b: float, det_c: float, det_v: float
) -> tuple[float, float]:
    """Solve the two-mode invariant equation nu^4 - Delta nu^2 + det V = 0."""
    delta = det_a + det_b + 2.0 * det_c
    disc = max(delta * delta - 4.0 * det_v, 0.0)
    root = math.sqrt(disc)
    nu_plus = math.sqrt(max(0.5 * (delta + root), 0.0))
    nu_minus = math.sqrt(max(0.5 * (delta - root), 0.0))
    return nu_plus, nu_minus


def symplectic_eigenvalues(cm: CovarianceMatrix) -> SymplecticSpectrum:
    """Symplectic spectrum of a physical covariance matrix.

    Uses sqrt(det V) for one mode and the two-mode invariant formula for two
    modes; larger systems fall back to the |i Omega V| eigendecomposition.
    """
    v = cm.matrix
    n = cm.n_modes
    if n == 1:
        det = v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0]
        return SymplecticSpectrum((_clamp_eigenvalue(math.sqrt(max(det, 0.0))),))
    if n == 2:
        a = v[0:2, 0:2]
        b = v[2:4, 2:4]
        c = v[0:2, 2:4]
        det_a = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        det_b = b[0, 0] * b[1, 1] - b[0, 1] * b[1, 0]
        det_c = c[0, 0] * c[1, 1] - c[0, 1] * c[1, 0]
        det_v = float(np.linalg.det(v))
        nu_plus, nu_minus = two_mode_symplectic_eigenvalues(det_a, det_b, det_c, det_v)
        return SymplecticSpectrum((_clamp_eigenvalue(nu_plus), _clamp_eigenvalue(nu_minus)))
    return symplectic_eigenvalues_via_form(cm)


def gaussian_entropy(cm: CovarianceMatrix) -> float:
    """Von Neumann entropy in bits: sum of entropic_h over the spectrum."""
    return float(sum(entropic_h(nu) for nu in symplectic_eigenvalues(cm).eigenvalues))


def beamsplitter_symplectic(tau: float, n_modes: int, modes: tuple[int, int]) -> np.ndarray:
    """Symplectic matrix mixing two modes on a beam splitter of transmissivity tau."""
    if not 0.0 <= tau <= 1.0:
        raise ValidationError(f"transmissivity {tau} outside [0, 1]")
    i, j = modes
    if i == j or not (0 <= i < n_modes and 0 <= j < n_modes):
        raise ValidationError(f"invalid mode pair {modes} for {n_modes} modes")
    s = np.eye(2 * n_modes)
    t = math.sqrt(tau)
    r = math.sqrt(1.0 - tau)
    for k in range(2):
        s[2 * i + k, 2 * i + k] = t
        s[2 * i + k, 2 * j + k] = r
        s[2 * j + k, 2 * i + k] = -r
        s[2 * j + k, 2 * j + k] = t
    return s


def beamsplitter_mix(cm: CovarianceMatrix, tau: float, modes: tuple[int, int]) -> CovarianceMatrix:
    """Apply S V S^T with S the beam-splitter symplectic on the given mode pair."""
    s = beamsplitter_symplectic(tau, cm.n_modes, modes)
    return CovarianceMatrix(s @ cm.matrix @ s.T)


def _mode_indices(modes) -> list[int]:
    idx = []
    for m in modes:
        idx.extend((2 * m, 2 * m + 1))
    return idx


def keep_modes(cm: CovarianceMatrix, modes) -> CovarianceMatrix:
    """Partial trace: restrict the covariance matrix to the listed modes."""
    idx = _mode_indices(modes)
    return CovarianceMatrix(cm.matrix[np.ix_(idx, idx)])


@dataclass(frozen=True)
class AugmentedCovariance:
    """Quantum covariance matrix augmented with classical Gaussian variables.

    quantum:   2n x 2n quadrature block
    cross:     2n x k covariance between quadratures and classical variables
    classical: k x k covariance of the classical variables
    """

    quantum: np.ndarray
    cross: np.ndarray
    classical: np.ndarray

    def __post_init__(self):
        q = np.array(self.quantum, dtype=float)
        c = np.array(self.cross, dtype=float)
        cl = np.array(self.classical, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] % 2:
            raise ValidationError(f"quantum block has invalid shape {q.shape}")
        if cl.ndim != 2 or cl.shape[0] != cl.shape[1]:
            raise ValidationError(f"classical block has invalid shape {cl.shape}")
        if c.shape != (q.shape[0], cl.shape[0]):
            raise ValidationError(
                f"cross block shape {c.shape} inconsistent with {q.shape} and {cl.shape}"
            )
        _check_symmetric(q)
        _check_symmetric(cl)
        for m in (q, c, cl):
            m.flags.writeable = False
        object.__setattr__(self, "quantum", q)
        object.__setattr__(self, "cross", c)
        object.__setattr__(self, "classical", cl)

    @property
    def n_modes(self) -> int:
        return self.quantum.shape[0] // 2

    @property
    def n_classical(self) -> int:
        return self.classical.shape[0]


def condition_on_classical(joint: AugmentedCovariance, which=None) -> CovarianceMatrix:
    """Schur complement of the selected classical variables.

    which selects classical variable indices; None conditions on all of them.
    """
    if which is None:
        which = list(range(joint.n_classical))
    which = list(which)
    if not which:
        return CovarianceMatrix(joint.quantum)
    v_cl = joint.classical[np.ix_(which, which)]
    c = joint.cross[:, which]
    try:
        sol = np.linalg.solve(v_cl, c.T)
    except np.linalg.LinAlgError:
        raise DegenerateConditioningError("classical covariance block is singular") from None
    cond = float(np.linalg.cond(v_cl))
    if not np.isfinite(cond) or cond > 1e14:
        raise DegenerateConditioningError("classical covariance block is singular")
    return CovarianceMatrix(joint.quantum - c @ sol)


def condition_on_heterodyne(joint: CovarianceMatrix, measured_mode: int) -> CovarianceMatrix:
    """Conditional state of the remaining modes after heterodyning one mode.

    V' = V_rest - C (V_meas + I)^-1 C^T; the added identity is the vacuum of
    the heterodyne ancilla.
    """
    n = joint.n_modes
    if not 0 <= measured_mode < n:
        raise ValidationError(f"measured mode {measured_mode} out of range for {n} modes")
    keep = [m for m in range(n) if m != measured_mode]
    ki = _mode_indices(keep)
    mi = _mode_indices([measured_mode])
    v = joint.matrix
    v_rest = v[np.ix_(ki, ki)]
    c = v[np.ix_(ki, mi)]
    v_meas = v[np.ix_(mi, mi)] + np.eye(2)
    return CovarianceMatrix(v_rest - c @ np.linalg.solve(v_meas, c.T))


def condition_on_homodyne(
    joint: CovarianceMatrix, measured_mode: int, quadrature: str = "q"
) -> CovarianceMatrix:
    """Conditional state after homodyning one quadrature of one mode."""
    if quadrature not in ("q", "p"):
        raise ValidationError(f"quadrature must be 'q' or 'p', got {quadrature!r}")
    n = joint.n_modes
    if not 0 <= measured_mode < n:
        raise ValidationError(f"measured mode {measured_mode} out of range for {n} modes")
    keep = [m for m in range(n) if m != measured_mode]
    ki = _mode_indices(keep)
    col = 2 * measured_mode + (0 if quadrature == "q" else 1)
    v = joint.matrix
    c = v[np.ix_(ki, [col])]
    return CovarianceMatrix(v[np.ix_(ki, ki)] - (c @ c.T) / v[col, col])


def vacuum_cm(n_modes: int) -> CovarianceMatrix:
    return CovarianceMatrix(np.eye(2 * n_modes))


def thermal_cm(variances) -> CovarianceMatrix:
    """Product of thermal modes; one quadrature-symmetric variance per mode."""
    diag = np.repeat(np.asarray(variances, dtype=float), 2)
    return CovarianceMatrix(np.diag(diag))


def tmsv_cm(omega: float) -> CovarianceMatrix:
    """Two-mode squeezed vacuum with local thermal variance omega >= 1."""
    if omega < 1.0:
        raise ValidationError(f"TMSV variance {omega} below 1")
    c = math.sqrt(omega * omega - 1.0)
    z = np.diag([c, -c])
    block = omega * np.eye(2)
    return CovarianceMatrix(np.block([[block, z], [z, block]]))
