#!/usr/bin/env python3
"""
Testaa komentorivityökalu: paluukoodit, CSV/JSON-tulosteet ja toistettavuus

Ajo: pytest test_gauss_cli.py
"""

import csv
import io
import json
import math

import pytest

from factor_sweep import SweepConfig, sweep
from gauss_cli import VERSION, main
from qa.logger import OutputRecord


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_sections(text):
    """CSV-osiot tyhjällä rivillä erotettuina, tiukka lukija."""
    assert '\r' not in text
    return [list(csv.reader(io.StringIO(block + '\n'), strict=True))
            for block in text.rstrip('\n').split('\n\n')]


# =============================================================================
# check
# =============================================================================

def test_check_factor_exit_zero(capsys):
    code, out, _ = run(capsys, 'check', 157573, 17)
    assert code == 0
    assert 'Tulos: Factor' in out
    assert 'N mod l = 0' in out


def test_check_non_factor_exit_one(capsys):
    code, out, _ = run(capsys, 'check', 157573, 18)
    assert code == 1
    assert 'Tulos: NonFactor' in out
    assert 'N mod l = 1' in out


def test_check_missing_argument_exit_two(capsys):
    code, _, err = run(capsys, 'check', 157573)
    assert code == 2
    assert 'usage' in err


@pytest.mark.parametrize("argv", [
    ['check', 'abc', 17],
    ['check', 1, 17],
    ['check', 157573, 0],
    ['check', 157573, 17, '--power', 1],
    ['check', 157573, 18, '--samples', 20],
    ['frobnicate', 3],
])
def test_check_invalid_arguments_exit_two(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_check_json_payload(capsys):
    code, out, _ = run(capsys, 'check', 157573, 18, '--M', 20, '--format', 'json', '--no-timing')
    assert code == 1
    record = OutputRecord.from_json(out)
    assert record.version == VERSION
    assert record.elapsed_s is None
    assert record.command == 'check 157573 18 --M 20 --format json --no-timing'
    assert record.parameters['N'] == 157573
    assert record.result['verdict'] == 'NonFactor'
    assert record.result['remainder'] == 1
    assert record.result['magnitude'] == pytest.approx(0.118825, abs=1e-6)
    assert record.result['residues_total'] == 21


def test_check_sampled_with_seed(capsys):
    code, out, _ = run(capsys, 'check', 157573, 13, '--samples', 20, '--seed', 4,
                       '--format', 'json', '--no-timing')
    assert code == 0
    result = json.loads(out)['result']
    assert result['re'] == 1.0 and result['im'] == 0.0
    assert result['seed'] == 4


# =============================================================================
# sweep
# =============================================================================

def test_sweep_csv_157573(capsys):
    code, out, _ = run(capsys, 'sweep', 157573, 2, 35, '--M', 20, '--format', 'csv', '--no-timing')
    assert code == 0
    [table] = csv_sections(out)
    assert table[0] == ['l', 'magnitude', 'phase', 'remainder', 'verdict']
    rows = table[1:]
    assert len(rows) == 34
    assert [int(r[0]) for r in rows if r[4] == 'Factor'] == [13, 17, 23, 31]

    expected = sweep(SweepConfig(157573, 2, 35, M=20))
    for row, exp in zip(rows, expected):
        assert int(row[0]) == exp.l
        assert float(row[1]) == pytest.approx(exp.magnitude, rel=1e-14, abs=1e-300)
        assert float(row[2]) == pytest.approx(exp.phase, rel=1e-14, abs=1e-300)
        assert int(row[3]) == exp.remainder


def test_sweep_small(capsys):
    code, out, _ = run(capsys, 'sweep', 16, 2, 4, '--format', 'csv', '--no-timing')
    assert code == 0
    [table] = csv_sections(out)
    assert len(table) == 4
    assert [r[4] for r in table[1:]] == ['Factor', 'NonFactor', 'Factor']


def test_sweep_inverted_range_exit_two(capsys):
    code, _, err = run(capsys, 'sweep', 10, 9, 2)
    assert code == 2
    assert 'VIRHE' in err


def test_sweep_primes_only_and_workers(capsys):
    code, out, _ = run(capsys, 'sweep', 157573, 2, 35, '--primes-only', '--workers', 4,
                       '--format', 'json', '--no-timing')
    assert code == 0
    result = json.loads(out)['result']
    assert [r['l'] for r in result['rows']] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    assert result['factors'] == [13, 17, 23, 31]
    assert result['disagreements'] == []


def test_sweep_text_report(capsys):
    code, out, _ = run(capsys, 'sweep', 157573, 2, 35)
    assert code == 0
    assert 'Tekijät: 13 17 23 31' in out
    assert 'Laskenta-aika' in out


def test_sweep_plot(capsys, tmp_path):
    path = tmp_path / 'plots' / 'sweep.png'
    code, _, _ = run(capsys, 'sweep', 157573, 2, 35, '--plot', path, '--no-timing')
    assert code == 0
    assert path.stat().st_size > 0


# =============================================================================
# nmr
# =============================================================================

def test_nmr_factor_is_exact(capsys):
    code, out, _ = run(capsys, 'nmr', 157573, 13, '--theta', 1e-3, '--format', 'json', '--no-timing')
    assert code == 0
    result = json.loads(out)['result']
    assert result['estimate_re'] == 1.0
    assert result['estimate_im'] == 0.0
    assert result['difference'] == 0.0
    assert result['leaked_remainder'] == 0


def test_nmr_worked_example(capsys):
    code, out, _ = run(capsys, 'nmr', 10, 4, '--theta', 1e-3, '--compare',
                       '--format', 'json', '--no-timing')
    assert code == 0
    result = json.loads(out)['result']
    assert result['M'] == 2
    assert result['estimate_re'] == pytest.approx(1 / 3, abs=1e-4)
    assert result['estimate_im'] == pytest.approx(0.0, abs=1e-4)
    assert result['difference'] < 1e-4
    assert result['leaked_remainder'] == 2
    assert 0.0 <= result['propagator_distance'] < 1e-5


def test_nmr_first_order_text(capsys):
    code, out, _ = run(capsys, 'nmr', 157573, 18, '--first-order', '--compare', '--no-timing')
    assert code == 0
    assert '1. kertaluku' in out
    assert 'N mod l = 1' in out
    assert 'etäisyys' in out


def test_nmr_vanishing_reference_exit_three(capsys):
    code, out, err = run(capsys, 'nmr', 10, 4, '--theta', repr(math.pi / 3))
    assert code == 3
    assert out == ''
    assert 'VIRHE' in err


def test_nmr_mode_flags_are_exclusive(capsys):
    code, _, _ = run(capsys, 'nmr', 10, 4, '--exact', '--first-order')
    assert code == 2


def test_nmr_bad_theta_exit_two(capsys):
    code, _, _ = run(capsys, 'nmr', 10, 4, '--theta', 0)
    assert code == 2


# =============================================================================
# fscan
# =============================================================================

def test_fscan_csv_counterexample(capsys):
    code, out, _ = run(capsys, 'fscan', 157573, 9267.5, 9269.5, 0.25, '--M', 20,
                       '--format', 'csv', '--no-timing')
    assert code == 0
    grid, peaks = csv_sections(out)
    assert grid[0] == ['f', 'magnitude']
    assert len(grid) == 10
    assert peaks[0] == ['f', 'trial', 'integer_trial']
    assert [(float(r[0]), r[2]) for r in peaks[1:]] == [(9268.0, '0'), (9269.0, '1')]
    assert f"{float(peaks[1][1]):.7f}" == "17.0018343"
    assert float(peaks[2][1]) == 17.0


def test_fscan_single_integer_point(capsys):
    code, out, _ = run(capsys, 'fscan', 157573, 9269, 9269, 1, '--format', 'json', '--no-timing')
    assert code == 0
    result = json.loads(out)['result']
    assert result['grid'] == [{'f': 9269.0, 'magnitude': 1.0}]


def test_fscan_zero_f_gives_strict_json(capsys):
    def reject(name):
        raise ValueError(name)

    code, out, _ = run(capsys, 'fscan', 157573, 0, 0, 1, '--format', 'json', '--no-timing')
    assert code == 0
    result = json.loads(out, parse_constant=reject)['result']
    assert result['peaks'] == [{'f': 0.0, 'magnitude': 1.0, 'trial': None, 'integer_trial': False}]


def test_check_sampled_range_ignores_M(capsys):
    outputs = []
    for M in (0, 20):
        code, out, _ = run(capsys, 'check', 157573, 18, '--M', M, '--samples', 20, '--seed', 4,
                           '--format', 'json', '--no-timing')
        assert code == 1
        outputs.append(json.loads(out)['result'])
    assert outputs[0]['re'] == outputs[1]['re']
    assert outputs[0]['im'] == outputs[1]['im']
    assert outputs[0]['magnitude'] < 1.0


def test_fscan_zero_step_exit_two(capsys):
    code, _, _ = run(capsys, 'fscan', 157573, 9267, 9270, 0)
    assert code == 2


def test_fscan_plot(capsys, tmp_path):
    path = tmp_path / 'fscan.png'
    code, _, _ = run(capsys, 'fscan', 157573, 9267.5, 9269.5, 0.25, '--plot', path)
    assert code == 0
    assert path.exists()


# =============================================================================
# ghosts, factorize, primes
# =============================================================================

def test_factorize_157573(capsys):
    code, out, _ = run(capsys, 'factorize', 157573, '--no-timing')
    assert code == 0
    assert out == '13 17 23 31\n'


def test_factorize_two(capsys):
    code, out, _ = run(capsys, 'factorize', 2, '--no-timing')
    assert code == 0
    assert out == '2\n'


@pytest.mark.parametrize("argv", [['factorize', 1], ['ghosts', 1], ['primes', 1]])
def test_small_N_exit_two(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_ghosts_report(capsys, tmp_path):
    path = tmp_path / 'ghosts.png'
    code, out, _ = run(capsys, 'ghosts', 157573, '--M-small', 1, '--plot', path,
                       '--format', 'json', '--no-timing')
    assert code == 0
    result = json.loads(out)['result']
    assert result['ghosts']
    assert result['suppressed'] is True
    assert result['M_suppressed'] == 20
    assert all(g['magnitude_suppressed'] < g['magnitude_small'] for g in result['ghosts'])
    assert path.exists()


def test_ghosts_csv(capsys):
    code, out, _ = run(capsys, 'ghosts', 10000, '--format', 'csv', '--no-timing')
    assert code == 0
    [table] = csv_sections(out)
    assert table[0] == ['l', 'magnitude_small', 'magnitude_suppressed']
    assert len(table) == 17


def test_primes(capsys):
    code, out, _ = run(capsys, 'primes', 1000000, '--format', 'json', '--no-timing')
    assert code == 0
    result = json.loads(out)['result']
    assert result['exact'] == 78498
    assert result['estimate'] == pytest.approx(72382.4, abs=0.1)


# =============================================================================
# Toistettavuus ja QA-loki
# =============================================================================

@pytest.mark.parametrize("argv", [
    ['sweep', 157573, 2, 35],
    ['nmr', 157573, 18, '--compare', '--format', 'json'],
    ['check', 157573, 18, '--samples', 20, '--seed', 9, '--format', 'csv'],
])
def test_output_is_byte_identical_without_timing(capsys, argv):
    first = run(capsys, *argv, '--no-timing')
    second = run(capsys, *argv, '--no-timing')
    assert first[:2] == second[:2]


def test_timing_is_reported_in_json(capsys):
    code, out, _ = run(capsys, 'primes', 100, '--format', 'json')
    assert code == 0
    assert json.loads(out)['elapsed_s'] >= 0.0


def test_qa_log_is_written(capsys, tmp_path):
    run(capsys, 'check', 157573, 17, '--qa-log', tmp_path)
    run(capsys, 'factorize', 157573, '--qa-log', tmp_path)
    data = json.loads((tmp_path / 'gauss_run_log.json').read_text(encoding='utf-8'))
    assert [e['record']['command'].split()[0] for e in data['entries']] == ['check', 'factorize']
    assert (tmp_path / 'gauss_run_log.csv').read_text(encoding='utf-8').startswith(
        'timestamp,command,version,elapsed_s\n')
