#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Differentiaalisen virityksen NMR-simulaattori (yksi spin-1/2).

Pulssisarja koostuu M+1 pienen kääntökulman θ pulssista, joiden vaiheet
φ_m = 2π m² N / l koodaavat Gaussin summan termit. Simulaattori laskee:

1. Yksittäisen pulssin propagaattorin U_m = exp{-iθ(I_x cos φ_m + I_y sin φ_m)}
   suljetussa SU(2)-muodossa
2. Aikajärjestetyn tulon U = U_M ... U_1 U_0
3. Ensimmäisen kertaluvun approksimaation (pulssit lähes kommutoivat):
   yksi kierto kulmalla θ|Σ e^{iφ_m}| vaiheeseen arg Σ e^{iφ_m}
4. Signaalin 2(<I_x> + i<I_y>) tasapainopoikkeamasta I_z
5. Gaussin summan estimaatin suhteena nollavaiheiseen referenssisarjaan

Normitus: 90° pulssi tasapainotilaan antaa signaalin itseisarvon 1.

Käyttö:
    from nmr_simulator import sequence_for_trial, estimate_gauss

    seq = sequence_for_trial(157573, 18, M=20, theta=1e-4)
    print(estimate_gauss(seq))
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from exponential_sums import (
    Amplitude, SumSpec, UNITY, phase_residues, residue_from_phase, truncation_bound,
)

logger = logging.getLogger(__name__)

# Konfiguraatio
DEFAULT_THETA = 1e-3
MAX_GUARDED_M = 100
UNITARY_TOL = 1e-12
REFERENCE_TOL = 1e-12
DEGENERATE_TOL = 1e-12

TWO_PI = 2.0 * math.pi

# Spin-1/2 operaattorit (Paulin matriisit / 2)
IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
I_X = SIGMA_X / 2
I_Y = SIGMA_Y / 2
I_Z = SIGMA_Z / 2
I_PLUS = I_X + 1j * I_Y


class ReferenceSignalError(ValueError):
    """Nollavaiheisen referenssisarjan signaali häviää ((M+1)θ = kπ)."""


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def canonicalize_phases(phases) -> np.ndarray:
    """Vaiheet välille [0, 2π)."""
    arr = np.mod(np.asarray(phases, dtype=np.float64), TWO_PI)
    # mod voi pyöristyä tasan 2π:ksi pienillä negatiivisilla arvoilla
    arr[arr >= TWO_PI] = 0.0
    return arr


@dataclass
class PulseSequence:
    """
    Pulssisarja: kääntökulma θ ja vaiheet φ_0..φ_M radiaaneina.

    Pienen kulman alue vaatii θ·(M+1) < π ja M ≤ MAX_GUARDED_M;
    niiden ulkopuolella annetaan varoitus, ei virhettä.
    """
    theta: float
    phases: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if not math.isfinite(self.theta) or self.theta <= 0:
            raise ValueError(f"Kääntökulman θ pitää olla > 0 (saatiin {self.theta})")
        self.phases = canonicalize_phases(self.phases)
        n = len(self.phases)
        if self.theta * n >= math.pi:
            logger.warning(f"θ·(M+1) = {self.theta * n:.4g} ≥ π: pienen kulman "
                           f"approksimaatio ei ole voimassa")
        if n - 1 > MAX_GUARDED_M:
            logger.warning(f"M = {n - 1} > {MAX_GUARDED_M}: ensimmäisen kertaluvun "
                           f"approksimaatio heikkenee")

    @property
    def M(self) -> int:
        return len(self.phases) - 1


def phases_for(N: int, l: int, M: int) -> np.ndarray:
    """φ_m = 2π r_m / l jäännöksistä (j = 2), arvot välillä [0, 2π)."""
    res = phase_residues(SumSpec(N=N, l=l, M=M, j=2))
    return np.array([TWO_PI * r / l for r in res.residues], dtype=np.float64)


def sequence_for_trial(N: int, l: int, M: int = None,
                       theta: float = DEFAULT_THETA) -> PulseSequence:
    """Pulssisarja koetekijälle l; M oletuksena truncation_bound(N)."""
    if M is None:
        M = truncation_bound(N)
    return PulseSequence(theta=theta, phases=phases_for(N, l, M))


def pulse_propagator(theta: float, phi: float) -> np.ndarray:
    """
    Yksittäisen pulssin propagaattori suljetussa muodossa:

        cos(θ/2)·1 - i sin(θ/2)·(σ_x cos φ + σ_y sin φ)
    """
    if not (math.isfinite(theta) and math.isfinite(phi)):
        raise ValueError(f"θ ja φ pitää olla äärellisiä (saatiin {theta}, {phi})")
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    return np.array([
        [c, -1j * s * complex(math.cos(phi), -math.sin(phi))],
        [-1j * s * complex(math.cos(phi), math.sin(phi)), c],
    ], dtype=np.complex128)


def _time_ordered(theta: float, phases: np.ndarray) -> np.ndarray:
    U = IDENTITY.copy()
    for phi in phases:
        U = pulse_propagator(theta, float(phi)) @ U
    return U


def _combined_rotation(theta: float, phases: np.ndarray) -> np.ndarray:
    total = complex(np.exp(1j * np.asarray(phases)).sum())
    if abs(total) < DEGENERATE_TOL:
        # Osoittimet kumoavat toisensa: nettokierto nolla
        return IDENTITY.copy()
    return pulse_propagator(theta * abs(total), math.atan2(total.imag, total.real))


def sequence_propagator(seq: PulseSequence) -> np.ndarray:
    """Aikajärjestetty tulo U_M ... U_1 U_0 (U_0 vaikuttaa ensin)."""
    return _time_ordered(seq.theta, seq.phases)


def first_order_propagator(seq: PulseSequence) -> np.ndarray:
    """
    Ensimmäisen kertaluvun propagaattori exp{-iθ Σ (I_x cos φ_m + I_y sin φ_m)}.

    Yksi kierto kulmalla Θ = θ|Σ e^{iφ_m}| poikittaisakselin vaiheeseen
    Φ = arg Σ e^{iφ_m}. Jos summa häviää, palautetaan identiteetti.
    """
    return _combined_rotation(seq.theta, seq.phases)


_PROPAGATORS = {
    'exact': _time_ordered,
    'first_order': _combined_rotation,
}


def is_unitary(U: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (2, 2):
        return False
    if np.linalg.norm(U @ U.conj().T - IDENTITY, 'fro') > tol:
        return False
    return abs(abs(np.linalg.det(U)) - 1.0) <= tol


def check_unitary(U: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    """Palauttaa U:n kompleksitaulukkona tai nostaa ValueError."""
    U = np.asarray(U, dtype=np.complex128)
    if U.shape != (2, 2):
        raise ValueError(f"Odotettiin 2×2-matriisia, saatiin muoto {U.shape}")
    if not is_unitary(U, tol):
        err = np.linalg.norm(U @ U.conj().T - IDENTITY, 'fro')
        raise ValueError(f"Matriisi ei ole unitaarinen (‖UU† - 1‖ = {err:.3e})")
    return U


def _evolved_state(U: np.ndarray) -> np.ndarray:
    return U @ I_Z @ U.conj().T


def bloch_vector(U: np.ndarray) -> Tuple[float, float, float]:
    """Kehittyneen tilan U I_z U† Blochin vektori (alkutila (0, 0, 1))."""
    rho = _evolved_state(check_unitary(U))
    return tuple(float(2 * np.trace(rho @ op).real) for op in (I_X, I_Y, I_Z))


def simulate_signal(U: np.ndarray) -> complex:
    """Normitettu poikittaismagnetoituma 2(<I_x> + i<I_y>) tilasta U I_z U†."""
    rho = _evolved_state(check_unitary(U))
    return complex(2 * np.trace(rho @ I_PLUS))


def estimate_gauss(seq: PulseSequence, propagator: str = 'exact') -> Amplitude:
    """
    Gaussin summan estimaatti simuloidusta signaalista.

    Laskee s = signaali(seq) ja s_ref = signaali(sama θ, nollavaiheet) ja
    palauttaa conj(s / s_ref). Ensimmäisessä kertaluvussa s ∝ Σ e^{+iφ_m},
    eli (M+1)·conj(A); virhe on O(θ²).

    Raises:
        ReferenceSignalError: jos s_ref häviää ((M+1)θ on π:n monikerta)
    """
    if propagator not in _PROPAGATORS:
        raise ValueError(f"Tuntematon propagaattori '{propagator}' "
                         f"(vaihtoehdot: {', '.join(_PROPAGATORS)})")
    build = _PROPAGATORS[propagator]
    s = simulate_signal(build(seq.theta, seq.phases))
    s_ref = simulate_signal(build(seq.theta, np.zeros(len(seq.phases))))
    if abs(s_ref) < REFERENCE_TOL:
        raise ReferenceSignalError(
            f"Referenssisignaali häviää: (M+1)θ = {len(seq.phases) * seq.theta:.15g} "
            f"on π:n monikerta, valitse toinen θ")
    if s == s_ref:
        return UNITY
    return Amplitude.from_complex((s / s_ref).conjugate())


def propagator_distance(A: np.ndarray, B: np.ndarray) -> float:
    """
    Globaalista vaiheesta riippumaton etäisyys min_α ‖A - e^{iα} B‖_F.

    Optimi α = arg tr(B† A).
    """
    A = check_unitary(A)
    B = check_unitary(B)
    overlap = complex(np.trace(B.conj().T @ A))
    alpha = math.atan2(overlap.imag, overlap.real)
    return float(np.linalg.norm(A - np.exp(1j * alpha) * B, 'fro'))


def leaked_remainder(seq: PulseSequence, l: int) -> int:
    """Jäännös N mod l luettuna suoraan pulssin φ_1 vaiheesta."""
    if len(seq.phases) < 2:
        raise ValueError("Vaihe φ_1 puuttuu (M = 0)")
    return residue_from_phase(float(seq.phases[1]), l)
