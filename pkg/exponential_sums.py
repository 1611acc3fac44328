#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Gaussin summat - katkaistut eksponenttisummat tekijätestaukseen.

Laskee katkaistun Gaussin summan

    A_N^M(l) = 1/(M+1) * Σ_{m=0}^{M} exp(-i 2π m^j N / l)

sekä sen satunnaisotannan, korkeamman potenssin (j > 2) ja jatkuvan
parametrin f variantit.

Vaiheet lasketaan modulaarisina jäännöksinä r_m = (m^j · N) mod l eikä
liukulukujakona N/l: tällöin A = 1 täsmälleen silloin kun l jakaa N:n.
Huomaa että jo r_1 = N mod l kertoo suoraan onko l tekijä - summaa ei
tarvitsisi laskea lainkaan (divisibility_witness).

Käyttö:
    from exponential_sums import SumSpec, gauss_sum, divisibility_witness

    spec = SumSpec.for_trial(157573, 17)      # M = ⌈N^(1/4)⌉
    amp = gauss_sum(spec)
    print(amp.magnitude, classify(amp))
"""

import math
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np

# Konfiguraatio
# Kalibroitu luokittelukynnys (qa/calibration.py, qa_logs/ghost_calibration.json)
DEFAULT_THRESHOLD = 0.75
MAX_EXPONENT = 16
# Jäännösmatriisin alkioita per lohko (int64 ja complex128 väliaikaiset)
AMPLITUDE_BLOCK_ELEMENTS = 2 ** 20

FACTOR = 'Factor'
NON_FACTOR = 'NonFactor'

# Vektoroitu polku pysyy int64:ssä kun l < 2^31 (tulot < 2^62)
_INT64_SAFE_MODULUS = 2 ** 31


@dataclass(frozen=True)
class SumSpec:
    """
    Yhden eksponenttisumman täydellinen kuvaus.

    Attributes:
        N: Tekijöitävä luku (≥ 2)
        l: Koetekijä (≥ 1)
        M: Katkaisuparametri (≥ 0), summassa M+1 termiä
        j: Eksponentti (2 = Gaussin summa, 3..16 yleistetyt summat)
    """
    N: int
    l: int
    M: int
    j: int = 2

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"N:n pitää olla ≥ 2 (saatiin {self.N})")
        if self.l < 1:
            raise ValueError(f"Koetekijän l pitää olla ≥ 1 (saatiin {self.l})")
        if self.M < 0:
            raise ValueError(f"Katkaisuparametrin M pitää olla ≥ 0 (saatiin {self.M})")
        if not 2 <= self.j <= MAX_EXPONENT:
            raise ValueError(f"Eksponentin j pitää olla välillä 2..{MAX_EXPONENT} (saatiin {self.j})")

    @classmethod
    def for_trial(cls, N: int, l: int, M: int = None, j: int = 2) -> 'SumSpec':
        """Summa koetekijälle l; M oletuksena truncation_bound(N)."""
        if M is None:
            M = truncation_bound(N)
        return cls(N=N, l=l, M=M, j=j)


@dataclass(frozen=True)
class Amplitude:
    """Kompleksinen summan arvo (re, im)."""
    re: float
    im: float

    @classmethod
    def from_complex(cls, z: complex) -> 'Amplitude':
        # + 0.0 poistaa negatiivisen nollan tulosteista
        return cls(float(z.real) + 0.0, float(z.imag) + 0.0)

    @property
    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def phase(self) -> float:
        return math.atan2(self.im, self.re)

    def as_complex(self) -> complex:
        return complex(self.re, self.im)

    def conj(self) -> 'Amplitude':
        return Amplitude(self.re, -self.im + 0.0)

    @property
    def is_unity(self) -> bool:
        """Täsmälleen 1+0i (ei toleranssia)."""
        return self.re == 1.0 and self.im == 0.0


UNITY = Amplitude(1.0, 0.0)


@dataclass(frozen=True)
class PhaseResidues:
    """Vaihejäännökset r_m = (m^j · N) mod l, m = 0..M."""
    residues: Tuple[int, ...]
    modulus: int

    @property
    def all_zero(self) -> bool:
        return not any(self.residues)

    def fractions(self) -> np.ndarray:
        """r_m / l liukulukuina (Pythonin int-jako pyöristää oikein)."""
        return np.array([r / self.modulus for r in self.residues], dtype=np.float64)


def truncation_bound(N: int) -> int:
    """
    Pienin M jolle M^4 ≥ N, eli ⌈N^(1/4)⌉ kokonaislukuaritmetiikalla.

    Haamutekijät vaimenevat tehokkaasti kun M = ⁴√N.
    """
    if N < 2:
        raise ValueError(f"N:n pitää olla ≥ 2 (saatiin {N})")
    # isqrt(isqrt(N)) = ⌊N^(1/4)⌋
    root = math.isqrt(math.isqrt(N))
    if root ** 4 < N:
        root += 1
    return root


def phase_residues(spec: SumSpec) -> PhaseResidues:
    """
    Laskee jäännökset r_m = ((m^j mod l) · (N mod l)) mod l.

    Tuloa m^j · N ei koskaan muodosteta redusoimattomana.
    """
    l = spec.l
    n_mod = spec.N % l
    residues = tuple(pow(m, spec.j, l) * n_mod % l for m in range(spec.M + 1))
    return PhaseResidues(residues=residues, modulus=l)


def _mean_of_phasors(fractions: np.ndarray) -> complex:
    return complex(np.exp(-2j * np.pi * fractions).mean())


def gauss_sum(spec: SumSpec) -> Amplitude:
    """
    Katkaistu Gaussin summa jäännöspolkua pitkin.

    Palauttaa täsmälleen 1+0i kun kaikki jäännökset ovat nollia
    (ei pyöristyspolkua).
    """
    res = phase_residues(spec)
    if res.all_zero:
        return UNITY
    return Amplitude.from_complex(_mean_of_phasors(res.fractions()))


def gauss_sum_sampled(spec: SumSpec, count: int, seed: int) -> Amplitude:
    """
    Satunnaisotannalla laskettu summa.

    Arpoo count kappaletta m-arvoja tasajakaumasta 0..truncation_bound(N)
    palauttaen (numpy default_rng(seed)), joten tulos on deterministinen
    annetulla siemenellä. Otantaväli ei riipu spec.M:stä. Tekijälle tulos
    on aina täsmälleen 1+0i.
    """
    if count < 1:
        raise ValueError(f"Otoskoon pitää olla ≥ 1 (saatiin {count})")
    rng = np.random.default_rng(seed)
    ms = rng.integers(0, truncation_bound(spec.N) + 1, size=count)
    l = spec.l
    n_mod = spec.N % l
    residues = [pow(int(m), spec.j, l) * n_mod % l for m in ms]
    if not any(residues):
        return UNITY
    fractions = np.array([r / l for r in residues], dtype=np.float64)
    return Amplitude.from_complex(_mean_of_phasors(fractions))


def continuous_sum(f: float, M: int) -> Amplitude:
    """
    Jatkuvan parametrin summa 1/(M+1) Σ exp(-i 2π m² f).

    Tämä on tarkoituksella liukulukupolku: N/l korvataan mielivaltaisella
    f:llä. m²·f redusoidaan modulo 1 ennen eksponenttia, joten jokainen
    kokonaisluku f antaa täsmälleen 1+0i - myös ne joille N/f ei ole
    kokonaisluku.
    """
    if not math.isfinite(f):
        raise ValueError(f"f:n pitää olla äärellinen (saatiin {f})")
    if M < 0:
        raise ValueError(f"Katkaisuparametrin M pitää olla ≥ 0 (saatiin {M})")
    m = np.arange(M + 1, dtype=np.float64)
    fractions = np.mod(m * m * f, 1.0)
    return Amplitude.from_complex(_mean_of_phasors(fractions))


def naive_gauss_sum(N: int, l: int, M: int) -> complex:
    """
    Suora summaus liukulukuvaiheilla (m²·N/l) mod 1.

    Vertailuoraakkeli testeille; m²·N on tarkka vain kun se on < 2^53.
    """
    m = np.arange(M + 1, dtype=np.float64)
    fractions = np.mod(m * m * float(N) / l, 1.0)
    return _mean_of_phasors(fractions)


def divisibility_witness(N: int, l: int) -> Tuple[bool, int]:
    """
    Jäännöstodistaja: (l jakaa N:n, N mod l).

    Sama arvo lasketaan implisiittisesti phase_residues:ssa kohdassa m = 1
    (r_1 = N mod l). Pulssivaiheiden esilaskenta siis ratkaisee jo
    jaollisuuden ennen kuin yhtään summaa evaluoidaan.
    """
    if N < 2:
        raise ValueError(f"N:n pitää olla ≥ 2 (saatiin {N})")
    if l < 1:
        raise ValueError(f"Koetekijän l pitää olla ≥ 1 (saatiin {l})")
    remainder = N % l
    return remainder == 0, remainder


def residue_from_phase(phi: float, l: int) -> int:
    """Palauttaa jäännöksen r yhdestä pulssivaiheesta φ = 2π r / l."""
    if l < 1:
        raise ValueError(f"Koetekijän l pitää olla ≥ 1 (saatiin {l})")
    return int(round(phi * l / (2 * math.pi))) % l


def classify(a: Amplitude, threshold: float = DEFAULT_THRESHOLD) -> str:
    """
    Luokittelu pelkän itseisarvon perusteella: Factor jos |A| ≥ threshold.

    Tarkkaa tulosta tarvitseva kutsuja käyttää divisibility_witness:iä.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"Kynnyksen pitää olla välillä (0, 1) (saatiin {threshold})")
    return FACTOR if a.magnitude >= threshold else NON_FACTOR


def trial_blocks(trials: Sequence[int], M: int) -> Iterator[Sequence[int]]:
    """
    Pilkkoo koetekijät lohkoihin joiden jäännösmatriisissa on enintään
    AMPLITUDE_BLOCK_ELEMENTS alkiota (vähintään yksi rivi per lohko).
    """
    rows = max(1, AMPLITUDE_BLOCK_ELEMENTS // (M + 1))
    for start in range(0, len(trials), rows):
        yield trials[start:start + rows]


def _validated_trials(N: int, trials: Sequence[int], M: int, j: int) -> List[int]:
    SumSpec(N=N, l=1, M=M, j=j)  # validointi
    trials = [int(l) for l in trials]
    if trials and min(trials) < 1:
        raise ValueError("Koetekijöiden pitää olla ≥ 1")
    return trials


def _residue_matrix(N: int, ls: np.ndarray, M: int, j: int) -> np.ndarray:
    """Jäännösmatriisi (koetekijä × m), ls sarakevektorina."""
    base = np.arange(M + 1, dtype=np.int64)[None, :] % ls
    power = base.copy()
    for _ in range(j - 1):
        power = (power * base) % ls
    n_mod = np.array([N % int(l) for l in ls[:, 0]], dtype=np.int64)[:, None]
    return (power * n_mod) % ls


def trial_partial_amplitudes(N: int, trials: Sequence[int], M: int,
                             j: int = 2) -> np.ndarray:
    """
    Gaussin summat usealle koetekijälle ja kaikille katkaisuille 0..M.

    Jäännösmatriisi lasketaan int64-aritmetiikalla lohko kerrallaan
    (trial_blocks), joten muistinkäyttö ei kasva koetekijöiden määrän
    mukana. Jos jokin koetekijä on ≥ 2^31, käytetään Pythonin kokonaislukuja.
    Sarake k on gauss_sum(SumSpec(N, l, k, j)) kumulatiivisena keskiarvona
    samoista termeistä. Sarake on täsmälleen 1+0j kun jäännökset
    r_0..r_k ovat kaikki nollia.

    Returns:
        Kompleksimatriisi, muoto (koetekijät, M+1)
    """
    trials = _validated_trials(N, trials, M, j)
    partial = np.empty((len(trials), M + 1), dtype=np.complex128)
    if not trials:
        return partial
    counts = np.arange(1, M + 2)

    if max(trials) >= _INT64_SAFE_MODULUS:
        for i, l in enumerate(trials):
            res = phase_residues(SumSpec(N, l, M, j))
            zero_prefix = np.cumsum(np.array(res.residues) != 0) == 0
            partial[i] = np.cumsum(np.exp(-2j * np.pi * res.fractions())) / counts
            partial[i, zero_prefix] = 1.0 + 0.0j
        return partial

    pos = 0
    for block in trial_blocks(trials, M):
        ls = np.array(block, dtype=np.int64)[:, None]
        residues = _residue_matrix(N, ls, M, j)
        chunk = np.cumsum(np.exp(-2j * np.pi * (residues / ls)), axis=1) / counts
        chunk[np.cumsum(residues != 0, axis=1) == 0] = 1.0 + 0.0j
        partial[pos:pos + len(block)] = chunk
        pos += len(block)
    return partial

