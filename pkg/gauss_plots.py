#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Kuvaajat tekijätestauksen tuloksista.

- plot_sweep: |A| koetekijän funktiona, tekijät korostettuna
- plot_suppression: haamutekijöiden |A| katkaisuparametrin M funktiona
- plot_fscan: jatkuvan f-parametrin spektri ja piikit
"""

from pathlib import Path
from typing import Dict, List, Tuple

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

from exponential_sums import FACTOR
from factor_sweep import FScanResult, SweepRow


def _save(fig, output_path: str):
    Path(output_path).parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(output_path, dpi=150)
    plt.close(fig)


def plot_sweep(rows: List[SweepRow], N: int, M: int, threshold: float, output_path: str):
    """Pylväskuva |A|(l); tekijät vihreällä, kynnys katkoviivana."""
    fig, ax = plt.subplots(figsize=(10, 5))
    ls = [r.l for r in rows]
    mags = [r.magnitude for r in rows]
    colors = ['#2e8b57' if r.verdict == FACTOR else '#9aa5b1' for r in rows]

    ax.bar(ls, mags, color=colors, edgecolor='black', linewidth=0.5)
    ax.axhline(threshold, color='#c0392b', linestyle='--', linewidth=1,
               label=f'Kynnys {threshold:g}')
    ax.set_xlabel('Koetekijä l')
    ax.set_ylabel('|A|')
    ax.set_ylim(0, 1.05)
    ax.set_title(f'Gaussin summa, N = {N}, M = {M}', fontweight='bold')
    ax.legend(loc='upper right')
    _save(fig, output_path)


def plot_suppression(curves: Dict[int, List[Tuple[int, float]]], N: int, output_path: str):
    """Vaimenemiskäyrät: yksi viiva per haamutekijä."""
    fig, ax = plt.subplots(figsize=(10, 5))
    for l, curve in sorted(curves.items()):
        ax.plot([M for M, _ in curve], [mag for _, mag in curve],
                marker='o', markersize=3, linewidth=1, label=f'l = {l}')
    ax.set_xlabel('Katkaisuparametri M')
    ax.set_ylabel('|A|')
    ax.set_ylim(0, 1.05)
    ax.set_title(f'Haamutekijöiden vaimeneminen, N = {N}', fontweight='bold')
    if curves:
        ax.legend(loc='upper right', fontsize=8, ncol=2)
    _save(fig, output_path)


def plot_fscan(result: FScanResult, N: int, M: int, output_path: str):
    """|A|(f) ja piikit merkittyinä (N/f kokonaisluku vihreällä)."""
    fig, ax = plt.subplots(figsize=(10, 5))
    ax.plot([f for f, _ in result.grid], [mag for _, mag in result.grid],
            color='#34495e', linewidth=1)
    for peak in result.peaks:
        color = '#2e8b57' if peak.integer_trial else '#c0392b'
        ax.plot(peak.f, peak.magnitude, 'o', color=color)
        ax.annotate(f'N/f = {peak.trial:.7f}', (peak.f, peak.magnitude),
                    textcoords='offset points', xytext=(0, 8), ha='center', fontsize=8)
    ax.set_xlabel('f')
    ax.set_ylabel('|A|')
    ax.set_ylim(0, 1.15)
    ax.set_title(f'Jatkuva f-skannaus, N = {N}, M = {M}', fontweight='bold')
    _save(fig, output_path)
