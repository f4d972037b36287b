"""Six-angle orbit parameterization of the tilde-orthonormal basis.

A complex orthogonal matrix Y (Y^T Y = I) generates a tilde-orthonormal basis
through X = O^T eta^{-1} Y, whose columns |x'_i> satisfy
X^T (sigma_y x sigma_y) X = I.  The section used here factors Y into three
hyperbolic block factors with angles (theta_1, theta_2), (xi_1, xi_2),
(phi_1, phi_2); together with four weights lambda_i it generates a state
orbit, and the squared norms K_i = <x'_i|x'_i> have closed forms in the six
angles.  All angles zero reproduces the Bell basis with K_i = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import DensityMatrix
from .tolerances import DEFAULT, Tolerances


class DegenerateInput(ValueError):
    """All weights are zero; no state can be formed."""


@dataclass(frozen=True)
class CosetParams:
    """Six hyperbolic angles plus four descending nonnegative weights.

    The xi angles must be nonnegative (they are the diagonal of the middle
    factor's singular-value block); the others are unrestricted.  The weights
    may be unnormalized; :func:`density_from_params` rescales them so the
    resulting state has unit trace.
    """

    theta1: float
    theta2: float
    xi1: float
    xi2: float
    phi1: float
    phi2: float
    lam: np.ndarray

    def __post_init__(self):
        if self.xi1 < 0.0 or self.xi2 < 0.0:
            raise ValueError(f"xi angles must be nonnegative, got ({self.xi1}, {self.xi2})")
        lam = np.array(self.lam, dtype=float)
        if lam.shape != (4,):
            raise ValueError("lam must hold four weights")
        if np.any(lam < 0.0):
            raise ValueError(f"weights must be nonnegative, got {lam.tolist()}")
        if np.any(np.diff(lam) > 0.0):
            raise ValueError("weights must be sorted in descending order")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @property
    def angles(self):
        return (self.theta1, self.theta2, self.xi1, self.xi2, self.phi1, self.phi2)

    def to_dict(self) -> dict:
        d = {name: float(getattr(self, name))
             for name in ("theta1", "theta2", "xi1", "xi2", "phi1", "phi2")}
        d["lambda"] = [float(v) for v in self.lam]
        return d

    @classmethod
    def from_dict(cls, payload: dict) -> "CosetParams":
        return cls(
            theta1=float(payload["theta1"]), theta2=float(payload["theta2"]),
            xi1=float(payload["xi1"]), xi2=float(payload["xi2"]),
            phi1=float(payload["phi1"]), phi2=float(payload["phi2"]),
            lam=np.array(payload["lambda"], dtype=float),
        )


def matrix_O() -> np.ndarray:
    """The fixed real orthogonal matrix with entries in {0, +-1/sqrt(2)}."""
    return np.array(
        [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, -1, 0], [1, 0, 0, -1]],
        dtype=complex,
    ) / np.sqrt(2.0)


def matrix_eta() -> np.ndarray:
    """The fixed diagonal phase matrix diag(i, 1, i, 1)."""
    return np.diag([1j, 1.0, 1j, 1.0])


def _hyperbolic_block(angle: float) -> np.ndarray:
    return np.array([
        [np.cosh(angle), 1j * np.sinh(angle)],
        [-1j * np.sinh(angle), np.cosh(angle)],
    ])


def build_Y(params: CosetParams) -> np.ndarray:
    """The complex orthogonal matrix Y(theta) Y(xi) Y(phi); Y^T Y = I."""
    t1, t2, xi1, xi2, p1, p2 = params.angles
    z = np.zeros((2, 2))
    y_theta = np.block([[_hyperbolic_block(t1), z], [z, _hyperbolic_block(t2)]])
    y_xi = np.array([
        [np.cosh(xi1), 0, 1j * np.sinh(xi1), 0],
        [0, np.cosh(xi2), 0, 1j * np.sinh(xi2)],
        [-1j * np.sinh(xi1), 0, np.cosh(xi1), 0],
        [0, -1j * np.sinh(xi2), 0, np.cosh(xi2)],
    ])
    y_phi = np.block([[_hyperbolic_block(p1), z], [z, _hyperbolic_block(p2)]])
    return y_theta @ y_xi @ y_phi


def build_X(params: CosetParams) -> np.ndarray:
    """Basis matrix X = O^T eta^{-1} Y; its columns are the |x'_i>.

    Satisfies X^T (sigma_y x sigma_y) X = I for any parameter values.
    """
    eta_inv = np.diag([-1j, 1.0, -1j, 1.0])
    return matrix_O().T @ eta_inv @ build_Y(params)


def closed_form_x(params: CosetParams):
    """The four subnormalized vectors |x_i> = sqrt(lambda_i) |x'_i> in closed form.

    Transcribed literally, including the fixed phases; they agree with
    ``sqrt(lambda_i) * build_X(params)[:, i]`` entry by entry.
    """
    t1, t2, xi1, xi2, p1, p2 = params.angles
    c1, s1 = np.cosh(xi1), np.sinh(xi1)
    c2, s2 = np.cosh(xi2), np.sinh(xi2)
    ct1, st1 = np.cosh(t1), np.sinh(t1)
    ct2, st2 = np.cosh(t2), np.sinh(t2)
    cp1, sp1 = np.cosh(p1), np.sinh(p1)
    cp2, sp2 = np.cosh(p2), np.sinh(p2)
    lam = params.lam
    pref = np.sqrt(lam / 2.0)
    x1 = pref[0] * np.array([
        -(s1*st2*cp1 + s2*ct2*sp1) - 1j*(c1*ct1*cp1 + c2*st1*sp1),
        -(s1*ct2*cp1 + s2*st2*sp1) - 1j*(c1*st1*cp1 + c2*ct1*sp1),
        +(s1*ct2*cp1 + s2*st2*sp1) - 1j*(c1*st1*cp1 + c2*ct1*sp1),
        +(s1*st2*cp1 + s2*ct2*sp1) - 1j*(c1*ct1*cp1 + c2*st1*sp1),
    ])
    x2 = pref[1] * np.array([
        (c1*ct1*sp1 + c2*st1*cp1) - 1j*(s1*st2*sp1 + s2*ct2*cp1),
        (c1*st1*sp1 + c2*ct1*cp1) - 1j*(s1*ct2*sp1 + s2*st2*cp1),
        (c1*st1*sp1 + c2*ct1*cp1) + 1j*(s1*ct2*sp1 + s2*st2*cp1),
        (c1*ct1*sp1 + c2*st1*cp1) + 1j*(s1*st2*sp1 + s2*ct2*cp1),
    ])
    x3 = pref[2] * np.array([
        (s1*ct1*cp2 + s2*st1*sp2) - 1j*(c1*st2*cp2 + c2*ct2*sp2),
        (s1*st1*cp2 + s2*ct1*sp2) - 1j*(c1*ct2*cp2 + c2*st2*sp2),
        (s1*st1*cp2 + s2*ct1*sp2) + 1j*(c1*ct2*cp2 + c2*st2*sp2),
        (s1*ct1*cp2 + s2*st1*sp2) + 1j*(c1*st2*cp2 + c2*ct2*sp2),
    ])
    x4 = pref[3] * np.array([
        (c1*st2*sp2 + c2*ct2*cp2) + 1j*(s1*ct1*sp2 + s2*st1*cp2),
        (c1*ct2*sp2 + c2*st2*cp2) + 1j*(s1*st1*sp2 + s2*ct1*cp2),
        -(c1*ct2*sp2 + c2*st2*cp2) + 1j*(s1*st1*sp2 + s2*ct1*cp2),
        -(c1*st2*sp2 + c2*ct2*cp2) + 1j*(s1*ct1*sp2 + s2*st1*cp2),
    ])
    return [x1, x2, x3, x4]


def k_closed_form(params: CosetParams) -> np.ndarray:
    """Closed-form K_i as functions of the six angles; all angles zero gives 1."""
    t1, t2, xi1, xi2, p1, p2 = params.angles
    sh, ch = np.sinh, np.cosh
    cross1 = sh(xi1) * sh(xi2) * sh(2 * t2) + ch(xi1) * ch(xi2) * sh(2 * t1)
    cross2 = sh(xi1) * sh(xi2) * sh(2 * t1) + ch(xi1) * ch(xi2) * sh(2 * t2)
    k1 = (ch(2*t2) * (sh(xi1)**2 * ch(p1)**2 + sh(xi2)**2 * sh(p1)**2)
          + ch(2*t1) * (ch(xi1)**2 * ch(p1)**2 + ch(xi2)**2 * sh(p1)**2)
          + sh(2*p1) * cross1)
    k2 = (ch(2*t2) * (sh(xi1)**2 * sh(p1)**2 + sh(xi2)**2 * ch(p1)**2)
          + ch(2*t1) * (ch(xi1)**2 * sh(p1)**2 + ch(xi2)**2 * ch(p1)**2)
          + sh(2*p1) * cross1)
    k3 = (ch(2*t1) * (sh(xi1)**2 * ch(p2)**2 + sh(xi2)**2 * sh(p2)**2)
          + ch(2*t2) * (ch(xi1)**2 * ch(p2)**2 + ch(xi2)**2 * sh(p2)**2)
          + sh(2*p2) * cross2)
    k4 = (ch(2*t1) * (sh(xi1)**2 * sh(p2)**2 + sh(xi2)**2 * ch(p2)**2)
          + ch(2*t2) * (ch(xi1)**2 * sh(p2)**2 + ch(xi2)**2 * ch(p2)**2)
          + sh(2*p2) * cross2)
    return np.array([k1, k2, k3, k4])


def density_from_params(params: CosetParams, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """State sum_i lambda_i |x'_i><x'_i| with the weights rescaled to unit trace.

    Raises
    ------
    DegenerateInput
        If every weight is zero.
    """
    k = k_closed_form(params)
    total = float(np.sum(params.lam * k))
    if total <= 0.0:
        raise DegenerateInput("all weights are zero")
    lam = params.lam / total
    x = build_X(params)
    return DensityMatrix((x * lam[None, :]) @ x.conj().T, tol)


def sample_params(rng: np.random.Generator, angle_scale: float = 1.0,
                  min_gap: float = 0.0) -> CosetParams:
    """Random orbit parameters: angles uniform in the scaled box, Dirichlet weights.

    ``min_gap`` rejects weight draws whose smallest relative gap is below the
    bound, which keeps the recovered basis well conditioned.
    """
    t1, t2, p1, p2 = rng.uniform(-angle_scale, angle_scale, 4)
    xi1, xi2 = rng.uniform(0.0, angle_scale, 2)
    while True:
        lam = np.sort(rng.dirichlet(np.ones(4)))[::-1]
        if min_gap <= 0.0 or np.min(np.abs(np.diff(lam))) / lam[0] >= min_gap:
            break
    return CosetParams(theta1=t1, theta2=t2, xi1=xi1, xi2=xi2, phi1=p1, phi2=p2, lam=lam)
