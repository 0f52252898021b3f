"""
Optimal cloner for the two qubit states cos(t)|0> + sin(t)|1> and
sin(t)|0> + cos(t)|1>.

Valid for 0 <= t < pi/4. The coefficient formulas divide by cos(2t), and at
t = pi/4 the two inputs coincide anyway, so that point is excluded.
"""

from dataclasses import dataclass

import numpy as np

from .qcore import fidelity, partial_trace, projector

THETA_MAX = np.pi / 4


class DomainError(ValueError):
    """Angle outside the cloner's domain [0, pi/4)."""


def check_theta(theta):
    theta = float(theta)
    if not (0.0 <= theta < THETA_MAX) or not np.isfinite(theta):
        raise DomainError(f"theta must lie in [0, pi/4), got {theta!r}")
    return theta


@dataclass(frozen=True)
class ClonerParams:
    theta: float
    a: float
    b: float
    c: float
    P: float
    Q: float

    def output_coefficients(self):
        """Amplitudes of ``|u'>`` on ``|00>``, ``|01>`` (= ``|10>``), ``|11>``."""
        ct, st = np.cos(self.theta), np.sin(self.theta)
        return (
            self.a * ct + self.c * st,
            self.b * (ct + st),
            self.c * ct + self.a * st,
        )


def cloner_params(theta):
    theta = check_theta(theta)
    c2, s2 = np.cos(2 * theta), np.sin(2 * theta)
    ct, st = np.cos(theta), np.sin(theta)
    P = 0.5 * np.sqrt(1 + s2) / np.sqrt(1 + s2**2)
    Q = 0.5 * np.sqrt(1 - s2) / c2
    a = (ct * (P + Q * c2) - st * (P - Q * c2)) / c2
    b = P * s2 * (ct - st) / c2
    c = (ct * (P - Q * c2) - st * (P + Q * c2)) / c2
    return ClonerParams(theta=theta, a=float(a), b=float(b), c=float(c), P=float(P), Q=float(Q))


def cloner_states(theta):
    """Inputs ``u, v`` (qubits) and cloner outputs ``u', v'`` (two qubits).

    ``v'`` is ``u'`` with the roles of ``a`` and ``c`` exchanged, which amounts
    to reversing the amplitude vector.
    """
    params = cloner_params(theta)
    ct, st = np.cos(params.theta), np.sin(params.theta)
    f00, f01, f11 = params.output_coefficients()
    u_in = np.array([ct, st], dtype=complex)
    v_in = np.array([st, ct], dtype=complex)
    u_out = np.array([f00, f01, f01, f11], dtype=complex)
    v_out = np.array([f11, f01, f01, f00], dtype=complex)
    return u_in, v_in, u_out, v_out


def cloner_fidelity(theta):
    """Overlap of one output copy with the ideal input, ``<u|Tr_A |u'><u'| |u>``."""
    u_in, _, u_out, _ = cloner_states(theta)
    return float(fidelity(u_in, partial_trace(projector(u_out), (2, 2), keep="B")))
