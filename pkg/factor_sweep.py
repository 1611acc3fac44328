#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Koetekijäpyyhkäisyt, tekijöinti ja haamutekijäanalyysi.

Sisältää:
- Koetekijöiden luettelointi (kaikki kokonaisluvut tai alkuluvut ≤ √N)
- Alkulukuseula ja alkulukufunktio π(x) ~ x/ln x
- Pyyhkäisy koetekijävälin yli (|A|, vaihe, jäännöstodistaja, tulos)
- Täydellinen tekijöinti toistetulla tekijätestillä
- Haamutekijöiden haku ja vaimenemiskäyrät
- Jatkuvan f-parametrin skannaus ja piikkien kuvaus koetekijöiksi N/f

Pyyhkäisyn tulos (verdict) perustuu aina tarkkaan jäännökseen N mod l.
Itseisarvokynnys lasketaan rinnalla; jos ne ovat eri mieltä, siitä
kirjataan varoitus (huono kynnys), ei koskaan hiljaa.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import List, Optional, Tuple

import numpy as np

from exponential_sums import (
    DEFAULT_THRESHOLD, FACTOR, NON_FACTOR, SumSpec,
    classify, continuous_sum, divisibility_witness, gauss_sum, gauss_sum_sampled,
    trial_blocks, trial_partial_amplitudes, truncation_bound,
)

logger = logging.getLogger(__name__)

# Konfiguraatio
PEAK_TOLERANCE = 1e-6
INTEGER_TRIAL_TOL = 1e-9
DEFAULT_GHOST_THRESHOLD = 0.95
TRIAL_BLOCK = 2 ** 20
TRIAL_POLICIES = ('all', 'primes')

# Miller-Rabin kannat: deterministinen kun n < 3.3·10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


# =============================================================================
# ALKULUVUT
# =============================================================================

def primes_up_to(x: int) -> np.ndarray:
    """Eratostheneen seula: alkuluvut ≤ x nousevassa järjestyksessä."""
    if x < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(x + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(x) + 1, 2):
        if sieve[p]:
            sieve[p * p::2 * p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def count_primes(x: int) -> Tuple[int, float]:
    """Alkulukufunktio: (tarkka π(x) seulalla, arvio x / ln x)."""
    if x < 2:
        raise ValueError(f"x:n pitää olla ≥ 2 (saatiin {x})")
    return int(len(primes_up_to(x))), x / math.log(x)


def is_prime(n: int) -> bool:
    """Deterministinen Miller-Rabin (n < 3.3·10^24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = pow(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


def enumerate_trials(N: int, policy: str = 'all') -> List[int]:
    """Koetekijät 2..⌊√N⌋ ('all') tai niiden alkuluvut ('primes')."""
    if N < 2:
        raise ValueError(f"N:n pitää olla ≥ 2 (saatiin {N})")
    if policy not in TRIAL_POLICIES:
        raise ValueError(f"Tuntematon koetekijäpolitiikka '{policy}'")
    upper = math.isqrt(N)
    if policy == 'primes':
        return primes_up_to(upper).tolist()
    return list(range(2, upper + 1))


# =============================================================================
# PYYHKÄISY
# =============================================================================

@dataclass
class SweepConfig:
    """
    Pyyhkäisyn asetukset.

    Attributes:
        N: Tekijöitävä luku
        l_min, l_max: Koetekijäväli (l_max oletuksena ⌊√N⌋)
        trial_policy: 'all' tai 'primes'
        M: Kiinteä katkaisuparametri tai None = ⌈N^(1/4)⌉
        j: Eksponentti (yleistetyt summat)
        threshold: Itseisarvokynnys rinnakkaiselle luokittelulle
        samples, seed: Satunnaisotanta (siemen pakollinen)
    """
    N: int
    l_min: int = 2
    l_max: Optional[int] = None
    trial_policy: str = 'all'
    M: Optional[int] = None
    j: int = 2
    threshold: float = DEFAULT_THRESHOLD
    samples: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"N:n pitää olla ≥ 2 (saatiin {self.N})")
        if self.l_max is None:
            self.l_max = min(self.N, max(self.l_min, math.isqrt(self.N)))
        if not 2 <= self.l_min <= self.l_max <= self.N:
            raise ValueError(f"Virheellinen koetekijäväli [{self.l_min}, {self.l_max}] "
                             f"(vaaditaan 2 ≤ l_min ≤ l_max ≤ N = {self.N})")
        if self.trial_policy not in TRIAL_POLICIES:
            raise ValueError(f"Tuntematon koetekijäpolitiikka '{self.trial_policy}'")
        if self.M is not None and self.M < 0:
            raise ValueError(f"M:n pitää olla ≥ 0 (saatiin {self.M})")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"Kynnyksen pitää olla välillä (0, 1) (saatiin {self.threshold})")
        if self.samples is not None:
            if self.samples < 1:
                raise ValueError(f"Otoskoon pitää olla ≥ 1 (saatiin {self.samples})")
            if self.seed is None:
                raise ValueError("Satunnaisotanta vaatii siemenen (seed)")
        SumSpec(N=self.N, l=1, M=0, j=self.j)

    @property
    def truncation(self) -> int:
        return self.M if self.M is not None else truncation_bound(self.N)

    def trials(self) -> List[int]:
        if self.trial_policy == 'primes':
            primes = primes_up_to(self.l_max)
            return primes[primes >= self.l_min].tolist()
        return list(range(self.l_min, self.l_max + 1))


@dataclass
class SweepRow:
    """Yhden koetekijän tulos."""
    l: int
    magnitude: float
    phase: float
    remainder: int
    verdict: str
    threshold_verdict: str

    @property
    def agrees(self) -> bool:
        return self.verdict == self.threshold_verdict


def _sweep_row(config: SweepConfig, l: int) -> SweepRow:
    spec = SumSpec(N=config.N, l=l, M=config.truncation, j=config.j)
    if config.samples is not None:
        amp = gauss_sum_sampled(spec, config.samples, config.seed)
    else:
        amp = gauss_sum(spec)
    is_factor, remainder = divisibility_witness(config.N, l)
    verdict = FACTOR if is_factor else NON_FACTOR
    threshold_verdict = classify(amp, config.threshold)
    if threshold_verdict != verdict:
        logger.warning(f"Kynnys ja jäännöstodistaja eri mieltä: N={config.N}, l={l}, "
                       f"|A|={amp.magnitude:.6f}, kynnys={config.threshold}, "
                       f"jäännös={remainder}")
    return SweepRow(l=l, magnitude=amp.magnitude, phase=amp.phase, remainder=remainder,
                    verdict=verdict, threshold_verdict=threshold_verdict)


def sweep(config: SweepConfig, workers: int = 1) -> List[SweepRow]:
    """
    Pyyhkäisee koetekijävälin. Rivit ovat toisistaan riippumattomia;
    workers > 1 laskee ne säiepoolissa, tulos on sama kuin sarjassa.
    """
    trials = config.trials()
    compute = partial(_sweep_row, config)
    if workers > 1 and len(trials) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(compute, trials))
    else:
        rows = [compute(l) for l in trials]
    rows.sort(key=lambda r: r.l)

    n_factors = sum(1 for r in rows if r.verdict == FACTOR)
    logger.info(f"Pyyhkäisy N={config.N}, l=[{config.l_min}, {config.l_max}], "
                f"M={config.truncation}: {len(rows)} koetekijää, {n_factors} tekijää")
    return rows


# =============================================================================
# TEKIJÖINTI
# =============================================================================

def _smallest_divisor(n: int, start: int = 2) -> int:
    """Pienin jakaja d ≥ start (n itse jos sellaista ei ole ≤ √n)."""
    if start <= 2 and n % 2 == 0:
        return 2
    limit = math.isqrt(n)
    first = max(3, start | 1)
    if limit - first < TRIAL_BLOCK // 16 or n >= 2 ** 63:
        for d in range(first, limit + 1, 2):
            if n % d == 0:
                return d
        return n

    # Lohkoittainen koejako numpyllä, lohko kasvaa kunnes TRIAL_BLOCK
    n64 = np.int64(n)
    lo, size = first, TRIAL_BLOCK // 256
    while lo <= limit:
        candidates = np.arange(lo, min(lo + 2 * size, limit + 1), 2, dtype=np.int64)
        hits = np.flatnonzero(n64 % candidates == 0)
        if hits.size:
            return int(candidates[hits[0]])
        lo += 2 * size
        size = min(2 * size, TRIAL_BLOCK)
    return n


def factorize(N: int) -> List[int]:
    """
    Alkutekijät nousevassa järjestyksessä (monikertoineen).

    Etsii toistuvasti pienimmän l ≥ 2 jonka jäännöstodistaja on nolla,
    varmistaa sen Gaussin summalla (A = 1) ja jakaa sen pois.
    """
    if N < 2:
        raise ValueError(f"N:n pitää olla ≥ 2 (saatiin {N})")
    factors = []
    n = N
    d = 2
    while n > 1:
        d = _smallest_divisor(n, d)
        if not gauss_sum(SumSpec.for_trial(n, d)).is_unity:
            raise RuntimeError(f"Tekijän {d} Gaussin summa ei ole 1 (n = {n})")
        factors.append(d)
        n //= d
    logger.debug(f"{N} = {' × '.join(map(str, factors))}")
    return factors


# =============================================================================
# HAAMUTEKIJÄT
# =============================================================================

@dataclass
class GhostReport:
    """
    Haamutekijäraportti.

    Attributes:
        ghosts: (l, |A| pienellä M:llä) ei-tekijöille joilla |A| ≥ kynnys
        max_nonfactor_magnitude_at_small: Suurin ei-tekijän |A| kun M = M_small
        max_nonfactor_magnitude_at_suppressed: Suurin ei-tekijän |A| kun M = ⌈N^(1/4)⌉
    """
    N: int
    ghosts: List[Tuple[int, float]]
    M_small: int
    M_suppressed: int
    max_nonfactor_magnitude_at_small: float
    max_nonfactor_magnitude_at_suppressed: float
    ghost_threshold: float = DEFAULT_GHOST_THRESHOLD


def find_ghosts(N: int, M_small: int = 1,
                ghost_threshold: float = DEFAULT_GHOST_THRESHOLD) -> GhostReport:
    """Hakee ei-tekijät l ∈ 2..⌊√N⌋ joiden |A| ≥ kynnys pienellä M:llä."""
    if M_small < 0:
        raise ValueError(f"M_small:n pitää olla ≥ 0 (saatiin {M_small})")
    if not 0.0 < ghost_threshold <= 1.0:
        raise ValueError(f"Haamukynnyksen pitää olla välillä (0, 1] (saatiin {ghost_threshold})")
    M_suppressed = truncation_bound(N)
    M_max = max(M_small, M_suppressed)
    nonfactors = [l for l in range(2, math.isqrt(N) + 1) if N % l]

    # Molemmat katkaisut samasta osasummamatriisista, lohko kerrallaan
    ghosts = []
    max_small = max_suppressed = 0.0
    for block in trial_blocks(nonfactors, M_max):
        sums = trial_partial_amplitudes(N, block, M_max)
        small = np.abs(sums[:, M_small])
        suppressed = np.abs(sums[:, M_suppressed])
        max_small = max(max_small, float(small.max()))
        max_suppressed = max(max_suppressed, float(suppressed.max()))
        ghosts.extend((l, float(mag)) for l, mag in zip(block, small)
                      if mag >= ghost_threshold)

    report = GhostReport(
        N=N,
        ghosts=ghosts,
        M_small=M_small,
        M_suppressed=M_suppressed,
        max_nonfactor_magnitude_at_small=max_small,
        max_nonfactor_magnitude_at_suppressed=max_suppressed,
        ghost_threshold=ghost_threshold,
    )
    logger.info(f"Haamut N={N}: {len(ghosts)} kpl (M={M_small}), "
                f"max |A| {report.max_nonfactor_magnitude_at_small:.4f} → "
                f"{report.max_nonfactor_magnitude_at_suppressed:.4f} (M={M_suppressed})")
    return report


def suppression_curve(N: int, l: int, M_max: int) -> List[Tuple[int, float]]:
    """|A| kun M = 0..M_max (kumulatiiviset keskiarvot samoista termeistä)."""
    if M_max < 0:
        raise ValueError(f"M_max:n pitää olla ≥ 0 (saatiin {M_max})")
    sums = trial_partial_amplitudes(N, [l], M_max)[0]
    return [(M, float(mag)) for M, mag in enumerate(np.abs(sums))]


# =============================================================================
# JATKUVA f-SKANNAUS
# =============================================================================

@dataclass
class FScanConfig:
    """
    f-skannauksen hila: f_min, f_min + step, ..., ≤ f_max.

    f_min = f_max on sallittu (yksi piste).
    """
    f_min: float
    f_max: float
    step: float
    M: int
    N: int

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.f_min, self.f_max, self.step)):
            raise ValueError("f-hilan rajojen ja askeleen pitää olla äärellisiä")
        if self.step <= 0:
            raise ValueError(f"Askeleen pitää olla > 0 (saatiin {self.step})")
        if self.f_min > self.f_max:
            raise ValueError(f"f_min > f_max ({self.f_min} > {self.f_max})")
        if self.M < 0:
            raise ValueError(f"M:n pitää olla ≥ 0 (saatiin {self.M})")
        if self.N < 2:
            raise ValueError(f"N:n pitää olla ≥ 2 (saatiin {self.N})")

    def grid(self) -> np.ndarray:
        n = int(math.floor((self.f_max - self.f_min) / self.step + 1e-9)) + 1
        return self.f_min + self.step * np.arange(n)


@dataclass
class Peak:
    """Piikki f-skannauksessa ja sitä vastaava koetekijä N/f."""
    f: float
    magnitude: float
    trial: float
    integer_trial: bool


@dataclass
class FScanResult:
    grid: List[Tuple[float, float]] = field(default_factory=list)
    peaks: List[Peak] = field(default_factory=list)


def _map_trial(N: int, f: float) -> Tuple[float, bool]:
    if f == 0:
        return math.inf, False
    trial = N / f
    return trial, abs(trial - round(trial)) < INTEGER_TRIAL_TOL


def f_scan(config: FScanConfig) -> FScanResult:
    """
    Laskee continuous_sum:n hilalla ja etsii piikit.

    Piikki on hilan paikallinen maksimi jolla |A| ≥ 1 - PEAK_TOLERANCE.
    Jokainen kokonaisluku f antaa piikin; vain N/f:n kokonaislukuisuus
    erottaa aidon tekijän, itseisarvo ei.
    """
    fs = config.grid()
    mags = [continuous_sum(float(f), config.M).magnitude for f in fs]
    result = FScanResult(grid=[(float(f), mag) for f, mag in zip(fs, mags)])

    for i, mag in enumerate(mags):
        left = mags[i - 1] if i > 0 else -math.inf
        right = mags[i + 1] if i + 1 < len(mags) else -math.inf
        if mag >= left and mag >= right and mag >= 1.0 - PEAK_TOLERANCE:
            f = float(fs[i])
            trial, integer_trial = _map_trial(config.N, f)
            result.peaks.append(Peak(f=f, magnitude=mag, trial=trial,
                                     integer_trial=integer_trial))

    logger.info(f"f-skannaus [{config.f_min}, {config.f_max}] askel {config.step}: "
                f"{len(fs)} pistettä, {len(result.peaks)} piikkiä")
    return result
