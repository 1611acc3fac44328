#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
GaussFactor - Luokittelukynnyksen kalibrointi haamutekijöiden vaimenemisesta

Kalibrointijoukko (qa_logs/calibration_set.json):
- kaikki N välillä 10^4 .. 10^4 + 100
- N = 157573 = 13 × 17 × 23 × 31
- 100 satunnaista puolialkulukua ≤ 10^8

Jokaiselle N:lle lasketaan raakalaskennalla (kaikki ei-tekijät l ≤ √N):
- suurin ei-tekijän |A| kun M = 1 ja haamujen määrä (|A| ≥ 0.95)
- suurin ei-tekijän |A| kun M = ⌈N^(1/4)⌉

Kalibroitu kynnys = ⌈(max vaimennettu |A| + marginaali) / 0.05⌉ · 0.05.
Raportti tallennetaan testien fixtureksi qa_logs/ghost_calibration.json.

Käyttö:
    python3 qa/calibration.py                   # tulosta yhteenveto
    python3 qa/calibration.py --write           # päivitä fixture
    python3 qa/calibration.py --regenerate-set --seed 7
"""

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np

# Lisää projekti polkuun
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from factor_sweep import find_ghosts, is_prime  # noqa: E402

# Konfiguraatio
QA_LOGS_DIR = Path(__file__).resolve().parent.parent / "qa_logs"
CALIBRATION_SET_PATH = QA_LOGS_DIR / "calibration_set.json"
REPORT_PATH = QA_LOGS_DIR / "ghost_calibration.json"

CALIBRATION_M_SMALL = 1
CALIBRATION_GHOST_THRESHOLD = 0.95
THRESHOLD_MARGIN = 0.02
THRESHOLD_GRID = 0.05
REPORT_VERSION = "1.0.0"


def load_calibration_set(path: Path = CALIBRATION_SET_PATH) -> List[int]:
    """Kalibrointijoukon luvut: välit, lisäluvut ja puolialkuluvut."""
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    numbers = []
    for lo, hi in data.get('ranges', []):
        numbers.extend(range(lo, hi + 1))
    numbers.extend(data.get('extra', []))
    numbers.extend(entry[0] for entry in data.get('semiprimes', []))
    return numbers


def generate_semiprimes(count: int = 100, limit: int = 10 ** 8,
                        seed: int = 0) -> List[Tuple[int, int, int]]:
    """Arpoo count erillistä puolialkulukua p·q ≤ limit (p ≤ q)."""
    rng = np.random.default_rng(seed)
    p_max = math.isqrt(limit)
    found: Dict[int, Tuple[int, int, int]] = {}
    while len(found) < count:
        p = int(rng.integers(2, p_max + 1))
        if not is_prime(p):
            continue
        q = int(rng.integers(p, limit // p + 1))
        if not is_prime(q):
            continue
        found.setdefault(p * q, (p * q, p, q))
    return list(found.values())


def calibration_entry(N: int) -> Dict:
    """Yhden N:n haamu- ja vaimenemistilastot."""
    report = find_ghosts(N, CALIBRATION_M_SMALL, CALIBRATION_GHOST_THRESHOLD)
    return {
        'N': N,
        'M_suppressed': report.M_suppressed,
        'max_nonfactor_magnitude_at_small': report.max_nonfactor_magnitude_at_small,
        'ghost_count': len(report.ghosts),
        'max_nonfactor_magnitude_at_suppressed': report.max_nonfactor_magnitude_at_suppressed,
    }


def calibrated_threshold(max_suppressed: float) -> float:
    steps = math.ceil((max_suppressed + THRESHOLD_MARGIN) / THRESHOLD_GRID)
    return round(steps * THRESHOLD_GRID, 2)


def build_calibration_report(numbers: List[int]) -> Dict:
    """Kalibrointiraportti annetulle lukujoukolle."""
    entries = [calibration_entry(N) for N in numbers]
    worst = max(entries, key=lambda e: e['max_nonfactor_magnitude_at_suppressed'])
    max_suppressed = worst['max_nonfactor_magnitude_at_suppressed']
    return {
        'version': REPORT_VERSION,
        'M_small': CALIBRATION_M_SMALL,
        'ghost_threshold': CALIBRATION_GHOST_THRESHOLD,
        'threshold_margin': THRESHOLD_MARGIN,
        'threshold_grid': THRESHOLD_GRID,
        'max_suppressed': max_suppressed,
        'max_suppressed_N': worst['N'],
        'calibrated_threshold': calibrated_threshold(max_suppressed),
        'entries': entries,
    }


def load_report(path: Path = REPORT_PATH) -> Dict:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def write_report(report: Dict, path: Path = REPORT_PATH):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(report, f, ensure_ascii=False, indent=2)
        f.write('\n')


def main():
    parser = argparse.ArgumentParser(
        description='Luokittelukynnyksen kalibrointi haamutekijöiden vaimenemisesta',
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--write', action='store_true',
                        help=f'Tallenna raportti ({REPORT_PATH.name})')
    parser.add_argument('--regenerate-set', action='store_true',
                        help='Arvo uudet puolialkuluvut kalibrointijoukkoon')
    parser.add_argument('--seed', type=int, default=None,
                        help='Siemen puolialkulukujen arvontaan (pakollinen --regenerate-set:n kanssa)')
    parser.add_argument('--count', type=int, default=100,
                        help='Puolialkulukujen määrä (oletus: 100)')
    args = parser.parse_args()

    if args.regenerate_set:
        if args.seed is None:
            print("VIRHE: --regenerate-set vaatii --seed parametrin")
            sys.exit(2)
        with open(CALIBRATION_SET_PATH, 'r', encoding='utf-8') as f:
            data = json.load(f)
        data['semiprimes'] = [list(t) for t in generate_semiprimes(args.count, seed=args.seed)]
        data['seed'] = args.seed
        with open(CALIBRATION_SET_PATH, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2)
            f.write('\n')
        print(f"Kalibrointijoukko päivitetty: {CALIBRATION_SET_PATH}")

    numbers = load_calibration_set()
    print(f"\nKalibroidaan {len(numbers)} lukua...")
    report = build_calibration_report(numbers)

    print("\n" + "=" * 60)
    print("HAAMUTEKIJÖIDEN VAIMENEMINEN")
    print("=" * 60)
    with_ghosts = sum(1 for e in report['entries'] if e['ghost_count'] > 0)
    print(f"  Lukuja joilla haamuja (M={CALIBRATION_M_SMALL}): {with_ghosts}/{len(numbers)}")
    print(f"  Suurin vaimennettu |A|: {report['max_suppressed']:.15g} "
          f"(N = {report['max_suppressed_N']})")
    print(f"  Kalibroitu kynnys: {report['calibrated_threshold']}")
    print("=" * 60)

    if args.write:
        write_report(report)
        print(f"\nRaportti tallennettu: {REPORT_PATH}")


if __name__ == '__main__':
    main()
