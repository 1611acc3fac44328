#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
GaussFactor - komentorivityökalu Gaussin summiin perustuvaan tekijätestaukseen

Alikomennot:
    check      Yksittäinen tekijätesti (|A|, vaihe, jäännökset, todistaja)
    sweep      Koetekijäpyyhkäisy välillä [l_min, l_max]
    nmr        Differentiaalisen virityksen NMR-simulaatio
    fscan      Jatkuvan f-parametrin skannaus ja piikkien kuvaus N/f:ksi
    ghosts     Haamutekijät ja niiden vaimeneminen
    factorize  Alkutekijät toistetulla tekijätestillä
    primes     Alkulukufunktio π(x) ja arvio x/ln x

Paluukoodit: 0 = ok / tekijä, 1 = ei tekijä (check), 2 = virheellinen
komento, 3 = referenssisignaali häviää (nmr).

Käyttö:
    python3 gauss_cli.py check 157573 17
    python3 gauss_cli.py sweep 157573 2 35 --format csv
    python3 gauss_cli.py nmr 10 4 --theta 1e-3 --compare
    python3 gauss_cli.py fscan 157573 9267.5 9269.5 0.25 --plot fscan.png
"""

import argparse
import csv
import io
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from exponential_sums import (
    DEFAULT_THRESHOLD, FACTOR, NON_FACTOR, SumSpec, classify, divisibility_witness,
    gauss_sum, gauss_sum_sampled, phase_residues, truncation_bound,
)
from factor_sweep import (
    DEFAULT_GHOST_THRESHOLD, FScanConfig, SweepConfig, count_primes, f_scan,
    factorize, find_ghosts, suppression_curve, sweep,
)
from nmr_simulator import (
    DEFAULT_THETA, ReferenceSignalError, estimate_gauss, first_order_propagator,
    leaked_remainder, propagator_distance, sequence_for_trial, sequence_propagator,
    simulate_signal,
)
from qa.logger import OutputRecord, RunLogger

VERSION = "1.0.0"
RULER = "=" * 60
MAX_PLOTTED_GHOSTS = 8

logger = logging.getLogger(__name__)


@dataclass
class CommandOutput:
    """Alikomennon tulos: JSON-hyötykuorma, tekstiraportti ja CSV-taulut."""
    result: Dict[str, Any]
    text: List[str]
    tables: List[List[List[Any]]] = field(default_factory=list)
    exit_code: int = 0


def _f15(x: float) -> str:
    return f"{x:.15g}"


def _clean(obj):
    """
    Liukuluvut 15 merkitsevään numeroon (riittää kaksoistarkkuuden palautukseen).
    Ääretön tai NaN muuttuu None:ksi (JSON null).
    """
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return float(_f15(obj)) if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _cell(value) -> str:
    if isinstance(value, bool):
        return '1' if value else '0'
    if isinstance(value, float):
        return _f15(value)
    return str(value)


def _key_value_table(result: Dict[str, Any]) -> List[List[Any]]:
    rows = [['key', 'value']]
    rows.extend([k, v] for k, v in result.items() if not isinstance(v, (list, dict)))
    return rows


# =============================================================================
# ALIKOMENNOT
# =============================================================================

def cmd_check(args) -> CommandOutput:
    M = args.M if args.M is not None else truncation_bound(args.N)
    spec = SumSpec(N=args.N, l=args.l, M=M, j=args.power)
    if args.samples is not None and args.seed is None:
        raise ValueError("--samples vaatii --seed parametrin (ei piilotettua satunnaisuutta)")

    residues = phase_residues(spec)
    if args.samples is not None:
        amp = gauss_sum_sampled(spec, args.samples, args.seed)
    else:
        amp = gauss_sum(spec)
    is_factor, remainder = divisibility_witness(args.N, args.l)
    verdict = FACTOR if is_factor else NON_FACTOR
    threshold_verdict = classify(amp, args.threshold)
    if threshold_verdict != verdict:
        logger.warning(f"Kynnys {args.threshold} antaa tuloksen {threshold_verdict}, "
                       f"jäännöstodistaja {verdict}")

    n_zero = sum(1 for r in residues.residues if r == 0)
    result = {
        'N': args.N, 'l': args.l, 'M': M, 'j': args.power,
        're': amp.re, 'im': amp.im,
        'magnitude': amp.magnitude, 'phase': amp.phase,
        'residues_total': len(residues.residues),
        'residues_zero': n_zero,
        'residues_distinct': len(set(residues.residues)),
        'remainder': remainder,
        'verdict': verdict,
        'threshold_verdict': threshold_verdict,
    }
    if args.samples is not None:
        result.update({'samples': args.samples, 'seed': args.seed,
                       'sample_range_max': truncation_bound(args.N)})

    preview = ' '.join(str(r) for r in residues.residues[:10])
    if len(residues.residues) > 10:
        preview += ' ...'
    text = [
        RULER,
        "GAUSSIN SUMMA - TEKIJÄTESTI",
        RULER,
        f"  N = {args.N}, l = {args.l}, M = {M}, j = {args.power}",
        f"  |A|    = {_f15(amp.magnitude)}",
        f"  vaihe  = {_f15(amp.phase)} rad",
        f"  jäännökset (m^j·N mod l): {preview}",
        f"    nollia {n_zero}/{len(residues.residues)}, erillisiä {len(set(residues.residues))}",
        f"  jäännöstodistaja N mod l = {remainder}",
        f"  kynnysluokitus ({args.threshold:g}): {threshold_verdict}",
        f"  Tulos: {verdict}",
    ]
    return CommandOutput(result=result, text=text, tables=[_key_value_table(result)],
                         exit_code=0 if is_factor else 1)


def cmd_sweep(args) -> CommandOutput:
    config = SweepConfig(
        N=args.N, l_min=args.l_min, l_max=args.l_max,
        trial_policy='primes' if args.primes_only else 'all',
        M=args.M, j=args.power, threshold=args.threshold,
        samples=args.samples, seed=args.seed,
    )
    rows = sweep(config, workers=args.workers)
    factors = [r.l for r in rows if r.verdict == FACTOR]
    disagreements = [r.l for r in rows if not r.agrees]

    result = {
        'N': config.N, 'l_min': config.l_min, 'l_max': config.l_max,
        'M': config.truncation, 'j': config.j, 'trial_policy': config.trial_policy,
        'threshold': config.threshold,
        'rows': [{'l': r.l, 'magnitude': r.magnitude, 'phase': r.phase,
                  'remainder': r.remainder, 'verdict': r.verdict} for r in rows],
        'factors': factors,
        'disagreements': disagreements,
    }

    text = [
        RULER,
        f"KOETEKIJÄPYYHKÄISY  N = {config.N}, l = {config.l_min}..{config.l_max}, "
        f"M = {config.truncation}, j = {config.j}",
        RULER,
        f"  {'l':>6s} {'|A|':>20s} {'vaihe':>20s} {'jäännös':>9s}  tulos",
    ]
    for r in rows:
        text.append(f"  {r.l:6d} {_f15(r.magnitude):>20s} {_f15(r.phase):>20s} "
                    f"{r.remainder:9d}  {r.verdict}")
    text.append(RULER)
    text.append(f"  Tekijät: {' '.join(map(str, factors)) if factors else '-'}")
    if disagreements:
        text.append(f"  VAROITUS: kynnys {config.threshold:g} eri mieltä riveillä "
                    f"{' '.join(map(str, disagreements))}")

    table = [['l', 'magnitude', 'phase', 'remainder', 'verdict']]
    table.extend([r.l, r.magnitude, r.phase, r.remainder, r.verdict] for r in rows)

    if args.plot:
        from gauss_plots import plot_sweep
        plot_sweep(rows, config.N, config.truncation, config.threshold, args.plot)
    return CommandOutput(result=result, text=text, tables=[table])


def cmd_nmr(args) -> CommandOutput:
    M = args.M if args.M is not None else truncation_bound(args.N)
    seq = sequence_for_trial(args.N, args.l, M, args.theta)
    kind = args.propagator
    U = sequence_propagator(seq) if kind == 'exact' else first_order_propagator(seq)
    signal = simulate_signal(U)
    estimate = estimate_gauss(seq, kind)
    direct = gauss_sum(SumSpec(N=args.N, l=args.l, M=M))
    difference = abs(estimate.as_complex() - direct.as_complex())

    result = {
        'N': args.N, 'l': args.l, 'M': M, 'theta': args.theta, 'propagator': kind,
        'signal_re': signal.real, 'signal_im': signal.imag, 'signal_magnitude': abs(signal),
        'estimate_re': estimate.re, 'estimate_im': estimate.im,
        'direct_re': direct.re, 'direct_im': direct.im,
        'difference': difference,
    }
    text = [
        RULER,
        f"NMR-SIMULAATIO  N = {args.N}, l = {args.l}, M = {M}, θ = {args.theta:g}",
        RULER,
        f"  propagaattori: {'aikajärjestetty tulo' if kind == 'exact' else '1. kertaluku'}",
        f"  signaali       = {_f15(signal.real)} {_f15(signal.imag):+s}i "
        f"(|s| = {_f15(abs(signal))})",
        f"  estimaatti A   = {_f15(estimate.re)} {_f15(estimate.im):+s}i",
        f"  suora summa A  = {_f15(direct.re)} {_f15(direct.im):+s}i",
        f"  erotus         = {_f15(difference)}",
    ]
    if M >= 1:
        leaked = leaked_remainder(seq, args.l)
        result['leaked_remainder'] = leaked
        text.append(f"  φ_1 paljastaa jo jäännöksen N mod l = {leaked}")
    if args.compare:
        distance = propagator_distance(sequence_propagator(seq), first_order_propagator(seq))
        result['propagator_distance'] = distance
        text.append(f"  etäisyys tarkka ↔ 1. kertaluku = {_f15(distance)}")
    return CommandOutput(result=result, text=text, tables=[_key_value_table(result)])


def cmd_fscan(args) -> CommandOutput:
    M = args.M if args.M is not None else truncation_bound(args.N)
    config = FScanConfig(f_min=args.f_min, f_max=args.f_max, step=args.step, M=M, N=args.N)
    scan = f_scan(config)

    result = {
        'N': args.N, 'M': M, 'f_min': args.f_min, 'f_max': args.f_max, 'step': args.step,
        'grid': [{'f': f, 'magnitude': mag} for f, mag in scan.grid],
        'peaks': [{'f': p.f, 'magnitude': p.magnitude, 'trial': p.trial,
                   'integer_trial': p.integer_trial} for p in scan.peaks],
    }
    text = [
        RULER,
        f"f-SKANNAUS  N = {args.N}, f = {args.f_min:g}..{args.f_max:g}, "
        f"askel {args.step:g}, M = {M}",
        RULER,
        f"  {'f':>20s} {'|A|':>20s}",
    ]
    text.extend(f"  {_f15(f):>20s} {_f15(mag):>20s}" for f, mag in scan.grid)
    text.append(RULER)
    text.append("  Piikit (|A| = 1):")
    for p in scan.peaks:
        kind = 'kokonaisluku → tekijä' if p.integer_trial else 'EI kokonaisluku'
        text.append(f"    f = {_f15(p.f)}: N/f = {_f15(p.trial)} ({kind})")
    if not scan.peaks:
        text.append("    -")

    grid_table = [['f', 'magnitude']] + [[f, mag] for f, mag in scan.grid]
    peak_table = [['f', 'trial', 'integer_trial']] + \
        [[p.f, p.trial, p.integer_trial] for p in scan.peaks]

    if args.plot:
        from gauss_plots import plot_fscan
        plot_fscan(scan, args.N, M, args.plot)
    return CommandOutput(result=result, text=text, tables=[grid_table, peak_table])


def cmd_ghosts(args) -> CommandOutput:
    report = find_ghosts(args.N, args.M_small, args.threshold)
    curves = {l: suppression_curve(args.N, l, report.M_suppressed) for l, _ in report.ghosts}

    ghosts = [{'l': l, 'magnitude_small': mag,
               'magnitude_suppressed': curves[l][-1][1]} for l, mag in report.ghosts]
    result = {
        'N': report.N, 'M_small': report.M_small, 'M_suppressed': report.M_suppressed,
        'ghost_threshold': report.ghost_threshold,
        'max_nonfactor_magnitude_at_small': report.max_nonfactor_magnitude_at_small,
        'max_nonfactor_magnitude_at_suppressed': report.max_nonfactor_magnitude_at_suppressed,
        'suppressed': report.max_nonfactor_magnitude_at_suppressed
        < report.max_nonfactor_magnitude_at_small,
        'ghosts': ghosts,
    }
    text = [
        RULER,
        f"HAAMUTEKIJÄT  N = {report.N}, M = {report.M_small}, kynnys {report.ghost_threshold:g}",
        RULER,
        f"  {'l':>8s} {'|A| (M=' + str(report.M_small) + ')':>20s} "
        f"{'|A| (M=' + str(report.M_suppressed) + ')':>20s}",
    ]
    text.extend(f"  {g['l']:8d} {_f15(g['magnitude_small']):>20s} "
                f"{_f15(g['magnitude_suppressed']):>20s}" for g in ghosts)
    text.append(RULER)
    text.append(f"  Haamuja: {len(ghosts)}")
    text.append(f"  Suurin ei-tekijän |A|: {_f15(report.max_nonfactor_magnitude_at_small)} "
                f"(M={report.M_small}) → {_f15(report.max_nonfactor_magnitude_at_suppressed)} "
                f"(M={report.M_suppressed})")

    table = [['l', 'magnitude_small', 'magnitude_suppressed']]
    table.extend([g['l'], g['magnitude_small'], g['magnitude_suppressed']] for g in ghosts)

    if args.plot:
        from gauss_plots import plot_suppression
        strongest = sorted(report.ghosts, key=lambda g: -g[1])[:MAX_PLOTTED_GHOSTS]
        plot_suppression({l: curves[l] for l, _ in strongest}, report.N, args.plot)
    return CommandOutput(result=result, text=text, tables=[table])


def cmd_factorize(args) -> CommandOutput:
    factors = factorize(args.N)
    result = {'N': args.N, 'factors': factors}
    table = [['factor']] + [[p] for p in factors]
    return CommandOutput(result=result, text=[' '.join(map(str, factors))], tables=[table])


def cmd_primes(args) -> CommandOutput:
    exact, estimate = count_primes(args.x)
    result = {'x': args.x, 'exact': exact, 'estimate': estimate, 'ratio': exact / estimate}
    text = [
        f"π({args.x}) = {exact}",
        f"x / ln x = {_f15(estimate)}",
        f"suhde    = {_f15(exact / estimate)}",
    ]
    return CommandOutput(result=result, text=text, tables=[_key_value_table(result)])


# =============================================================================
# KOMENTORIVI
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['text', 'csv', 'json'], default='text',
                        help='Tulostusmuoto (oletus: text)')
    common.add_argument('--no-timing', action='store_true',
                        help='Jätä suoritusaika pois (tavuidenttinen tuloste)')
    common.add_argument('--qa-log', metavar='DIR', default=None,
                        help='Tallenna ajo QA-lokiin hakemistoon DIR')
    common.add_argument('--verbose', '-v', action='store_true', help='Debug-lokitus')
    common.add_argument('--quiet', '-q', action='store_true', help='Vain varoitukset')

    parser = argparse.ArgumentParser(
        description='Gaussin summiin perustuva tekijätestaus ja NMR-simulaatio',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Esimerkkejä:
  python3 gauss_cli.py check 157573 17
  python3 gauss_cli.py sweep 157573 2 35 --format csv
  python3 gauss_cli.py nmr 157573 18 --theta 1e-4 --compare
  python3 gauss_cli.py fscan 157573 9267.5 9269.5 0.25
  python3 gauss_cli.py ghosts 157573 --M-small 1
  python3 gauss_cli.py factorize 157573
  python3 gauss_cli.py primes 1000000
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    def add_sum_options(p):
        p.add_argument('--M', type=int, default=None,
                       help='Katkaisuparametri (oletus: ⌈N^(1/4)⌉)')
        p.add_argument('--power', '-j', type=int, default=2,
                       help='Eksponentti j (oletus: 2)')
        p.add_argument('--threshold', type=float, default=DEFAULT_THRESHOLD,
                       help=f'Luokittelukynnys (oletus: {DEFAULT_THRESHOLD}, kalibroitu)')
        p.add_argument('--samples', type=int, default=None,
                       help='Satunnaisotannan koko, m väliltä 0..⌈N^(1/4)⌉ (vaatii --seed)')
        p.add_argument('--seed', type=int, default=None, help='Satunnaisotannan siemen')

    p = sub.add_parser('check', parents=[common], help='Yksittäinen tekijätesti')
    p.add_argument('N', type=int)
    p.add_argument('l', type=int)
    add_sum_options(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser('sweep', parents=[common], help='Koetekijäpyyhkäisy')
    p.add_argument('N', type=int)
    p.add_argument('l_min', type=int)
    p.add_argument('l_max', type=int)
    p.add_argument('--primes-only', action='store_true', help='Vain alkuluvut koetekijöinä')
    p.add_argument('--workers', type=int, default=1, help='Rinnakkaiset säikeet (oletus: 1)')
    p.add_argument('--plot', metavar='FILE', default=None, help='Tallenna kuvaaja')
    add_sum_options(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('nmr', parents=[common], help='NMR-pulssisarjan simulaatio')
    p.add_argument('N', type=int)
    p.add_argument('l', type=int)
    p.add_argument('--theta', type=float, default=DEFAULT_THETA,
                   help=f'Kääntökulma radiaaneina (oletus: {DEFAULT_THETA})')
    p.add_argument('--M', type=int, default=None, help='Katkaisuparametri (oletus: ⌈N^(1/4)⌉)')
    mode = p.add_mutually_exclusive_group()
    mode.add_argument('--exact', dest='propagator', action='store_const', const='exact',
                      help='Aikajärjestetty tulo (oletus)')
    mode.add_argument('--first-order', dest='propagator', action='store_const',
                      const='first_order', help='Ensimmäisen kertaluvun yhdistetty pulssi')
    p.add_argument('--compare', action='store_true',
                   help='Tulosta propagaattorien etäisyys')
    p.set_defaults(func=cmd_nmr, propagator='exact')

    p = sub.add_parser('fscan', parents=[common], help='Jatkuvan f-parametrin skannaus')
    p.add_argument('N', type=int)
    p.add_argument('f_min', type=float)
    p.add_argument('f_max', type=float)
    p.add_argument('step', type=float)
    p.add_argument('--M', type=int, default=None, help='Katkaisuparametri (oletus: ⌈N^(1/4)⌉)')
    p.add_argument('--plot', metavar='FILE', default=None, help='Tallenna kuvaaja')
    p.set_defaults(func=cmd_fscan)

    p = sub.add_parser('ghosts', parents=[common], help='Haamutekijät ja vaimeneminen')
    p.add_argument('N', type=int)
    p.add_argument('--M-small', dest='M_small', type=int, default=1,
                   help='Pieni katkaisuparametri (oletus: 1)')
    p.add_argument('--threshold', type=float, default=DEFAULT_GHOST_THRESHOLD,
                   help=f'Haamukynnys (oletus: {DEFAULT_GHOST_THRESHOLD})')
    p.add_argument('--plot', metavar='FILE', default=None, help='Tallenna vaimenemiskäyrät')
    p.set_defaults(func=cmd_ghosts)

    p = sub.add_parser('factorize', parents=[common], help='Alkutekijät')
    p.add_argument('N', type=int)
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser('primes', parents=[common], help='Alkulukufunktio π(x)')
    p.add_argument('x', type=int)
    p.set_defaults(func=cmd_primes)

    return parser


def _configure_logging(args):
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def _parameters(args) -> Dict[str, Any]:
    skip = {'func', 'format', 'no_timing', 'qa_log', 'verbose', 'quiet'}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _write_tables(tables: List[List[List[Any]]], out):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    for i, table in enumerate(tables):
        if i > 0:
            buffer.write('\n')
        writer.writerows([[_cell(v) for v in row] for row in table])
    out.write(buffer.getvalue())


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse: --help → 0, virheellinen komento → 2
        return exc.code if isinstance(exc.code, int) else 2

    _configure_logging(args)
    start = time.perf_counter()
    try:
        output = args.func(args)
    except ReferenceSignalError as e:
        print(f"VIRHE: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        parser.print_usage(sys.stderr)
        print(f"VIRHE: {e}", file=sys.stderr)
        return 2
    elapsed = None if args.no_timing else time.perf_counter() - start

    record = OutputRecord(
        command=' '.join(argv),
        parameters=_clean(_parameters(args)),
        result=_clean(output.result),
        version=VERSION,
        elapsed_s=None if elapsed is None else float(_f15(elapsed)),
    )

    if args.format == 'json':
        print(record.to_json())
    elif args.format == 'csv':
        _write_tables(output.tables, sys.stdout)
    else:
        print('\n'.join(output.text))
        if elapsed is not None:
            print(f"\nLaskenta-aika: {elapsed:.3f} s")

    if args.qa_log:
        qa = RunLogger(output_dir=args.qa_log)
        qa.log(record)
        qa.save()

    return output.exit_code


if __name__ == '__main__':
    sys.exit(main())
