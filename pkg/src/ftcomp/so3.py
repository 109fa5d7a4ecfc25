"""Rotation and skew-symmetric helpers plus the gravitational wrench map.

All vectors are plain ``numpy`` arrays of shape ``(3,)`` and all matrices are
``(3, 3)`` arrays. Units are SI throughout (N, N*m, m).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ROTATION_TOL = 1e-6


class NotARotation(ValueError):
    """Raised when a matrix fails the SO(3) orthonormality/determinant check."""


@dataclass
class Wrench:
    """Force (N) and torque (N*m) pair expressed in the sensor frame."""

    force: np.ndarray = field(default_factory=lambda: np.zeros(3))
    torque: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.force = np.asarray(self.force, dtype=float).reshape(3)
        self.torque = np.asarray(self.torque, dtype=float).reshape(3)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.force, self.torque])

    def __add__(self, other: "Wrench") -> "Wrench":
        return Wrench(self.force + other.force, self.torque + other.torque)


def skew(p) -> np.ndarray:
    """Return the cross-product matrix of ``p`` so that ``skew(p) @ v == p x v``."""
    px, py, pz = np.asarray(p, dtype=float).reshape(3)
    return np.array([[0.0, -pz, py],
                     [pz, 0.0, -px],
                     [-py, px, 0.0]])


def rotation_error(M) -> tuple[float, float]:
    """Frobenius orthonormality error and determinant of ``M``."""
    M = np.asarray(M, dtype=float)
    return float(np.linalg.norm(M.T @ M - np.eye(3))), float(np.linalg.det(M))


def is_rotation(M, tol: float = ROTATION_TOL) -> bool:
    M = np.asarray(M, dtype=float)
    if M.shape != (3, 3) or not np.all(np.isfinite(M)):
        return False
    ortho, det = rotation_error(M)
    return ortho <= tol and abs(det - 1.0) <= tol


def validate_rotation(M, mode: str = "strict", tol: float = ROTATION_TOL) -> np.ndarray:
    """Check or repair a candidate rotation matrix.

    ``mode="strict"`` returns ``M`` unchanged when it lies in SO(3) within
    ``tol`` and raises :class:`NotARotation` otherwise. ``mode="project"``
    returns the closest rotation in the Frobenius sense (orthogonal polar
    factor, with the sign fixed so that the determinant is +1).
    """
    M = np.asarray(M, dtype=float)
    if M.shape != (3, 3):
        raise NotARotation(f"expected a 3x3 matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NotARotation("matrix has non-finite entries")

    if mode == "strict":
        ortho, det = rotation_error(M)
        if ortho > tol or abs(det - 1.0) > tol:
            raise NotARotation(
                f"||R^T R - I||_F = {ortho:.3e}, det R = {det:.6f} (tol {tol:g})")
        return M
    if mode == "project":
        U, _, Vt = np.linalg.svd(M)
        D = np.diag([1.0, 1.0, np.sign(np.linalg.det(U @ Vt)) or 1.0])
        return U @ D @ Vt
    raise ValueError(f"unknown mode {mode!r}; use 'strict' or 'project'")


def gravity_wrench(R_sg, p, f_mg) -> Wrench:
    """Gravity wrench of a point mass seen from the sensor frame.

    ``R_sg`` rotates gravity-frame vectors into the sensor frame, ``p`` is the
    centre of mass in the sensor frame and ``f_mg`` the gravity-frame weight
    (normally ``[0, 0, -m g]``). The gravity-frame torque is zero by choice
    of origin, so only the force is transported.
    """
    force = np.asarray(R_sg, dtype=float) @ np.asarray(f_mg, dtype=float)
    return Wrench(force, skew(p) @ force)
