import json

import pytest

import config
from config import ExitCode
from conversion_cli import create_parser, main
from converters import MajorSolution, max_fidelity_major

SOURCE = ['--source', '0.8,0.2']
TARGET = ['--target', '0.6,0.4']


@pytest.fixture
def small_validation(monkeypatch):
    for key, value in {'oracle_pairs': 10, 'dominance_pairs': 10, 'overlap_instances': 4,
                       'attainment_instances': 1, 'nu_grid': [0.5]}.items():
        monkeypatch.setitem(config.VALIDATION_CONFIG, key, value)


def test_parser_subcommands():
    parser = create_parser()
    args = parser.parse_args(['finite-n', *SOURCE, *TARGET, '--n-grid', '8,16', '--b', '0'])
    assert args.command == 'finite-n'
    assert args.n_grid == '8,16'


def test_rate_json(capsys):
    assert main(['rate', *SOURCE, *TARGET, '--nu', '0.9', '--format', 'json']) == ExitCode.OK
    record = json.loads(capsys.readouterr().out)
    assert record['regime'] == 'ratio_less'
    assert record['a'] == pytest.approx(0.74354, abs=1e-5)
    assert record['threshold'] is not None


def test_rate_csv(capsys):
    assert main(['rate', *SOURCE, *TARGET, '--nu', '0.9']) == ExitCode.OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'a,r2,regime,c_pq,threshold,residual'
    assert len(lines) == 2


def test_missing_nu_is_usage_error(capsys):
    assert main(['rate', *SOURCE, *TARGET]) == ExitCode.IO_ERROR
    assert '--nu' in capsys.readouterr().err


def test_both_uniform_is_regime_error(capsys):
    assert main(['rate', '--source', '0.5,0.5', '--target', '0.25,0.25,0.25,0.25', '--nu', '0.5']) \
        == ExitCode.REGIME_ERROR
    assert capsys.readouterr().out == ''


@pytest.mark.parametrize("argv", [
    [],
    ['rate', '--bogus'],
    ['rate', '--source', '0.5,0.6', *TARGET, '--nu', '0.5'],
    ['rate', '--source', 'missing_file.txt', *TARGET, '--nu', '0.5'],
    ['curve', *SOURCE, *TARGET, '--b-grid', '1:0:1'],
])
def test_bad_input_exit_code(argv, capsys):
    assert main(argv) == ExitCode.IO_ERROR


def test_curve_csv_with_attainment(capsys):
    argv = ['curve', *SOURCE, *TARGET, '--b-grid', '-1:1:1', '--attainment', '-1:1:0.5']
    assert main(argv) == ExitCode.OK
    out = capsys.readouterr().out
    main_table, attainment = out.split('\n\n')
    assert main_table.splitlines()[0] == 'b,fidelity,regime'
    assert len(main_table.splitlines()) == 4
    assert attainment.splitlines()[0] == 'x,g_p,g_pqb,a'
    assert len(attainment.strip().splitlines()) == 6


def test_curve_attainment_to_file(tmp_path, capsys):
    extra = tmp_path / 'attain.csv'
    argv = ['curve', *SOURCE, *TARGET, '--b-grid', '0', '--attainment', '0:1:1',
            '--attainment-out', str(extra)]
    assert main(argv) == ExitCode.OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'b,fidelity,regime'
    assert len(lines) == 2
    assert extra.read_text(encoding='utf-8').splitlines()[0] == 'x,g_p,g_pqb,a'


def test_curve_is_deterministic(capsys):
    argv = ['curve', '--source', '0.6,0.4', '--target', '0.8,0.2', '--b-grid', '-2:2:0.5']
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_curve_json(capsys):
    assert main(['curve', *SOURCE, '--target', '0.5,0.5', '--b-grid', '0', '--format', 'json']) == ExitCode.OK
    records = json.loads(capsys.readouterr().out)
    assert records == [{'b': 0.0, 'fidelity': pytest.approx(0.5 ** 0.5), 'regime': 'target_uniform'}]


def test_finite_n_to_file(tmp_path, capsys):
    out = tmp_path / 'runs' / 'finite.csv'
    argv = ['finite-n', *SOURCE, *TARGET, '--n-grid', '8,16', '--b', '0', '--out', str(out)]
    assert main(argv) == ExitCode.OK
    assert capsys.readouterr().out == ''
    lines = out.read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'n,L,fm,limit,gap'
    assert [line.split(',')[0] for line in lines[1:]] == ['8', '16']


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / 'run.cfg'
    cfg.write_text('source = 0.8,0.2\ntarget = 0.6,0.4\nnu = 0.9\nformat = json\n', encoding='utf-8')
    assert main(['rate', '--config', str(cfg)]) == ExitCode.OK
    assert json.loads(capsys.readouterr().out)['regime'] == 'ratio_less'


def test_oneshot_json(capsys):
    argv = ['oneshot', '--source', '0.5,0.3,0.2', '--target', '0.7,0.3', '--format', 'json']
    assert main(argv) == ExitCode.OK
    record = json.loads(capsys.readouterr().out)
    assert record['assignment'] == [0, 1, 0]
    assert record['gap'] == pytest.approx(0.0, abs=1e-12)
    assert 'blocks' in record['solution']


def test_oneshot_exact_fidelity(capsys):
    argv = ['oneshot', '--source', '0.25,0.25,0.25,0.25', '--target', '0.5,0.5', '--nu', '1',
            '--format', 'json']
    assert main(argv) == ExitCode.OK
    assert json.loads(capsys.readouterr().out)['oneshot_L'] == 2


def test_rate_with_nu_one_is_usage_error(capsys):
    assert main(['rate', *SOURCE, *TARGET, '--nu', '1']) == ExitCode.IO_ERROR
    assert 'nu' in capsys.readouterr().err


def test_validate_passes(small_validation, capsys):
    assert main(['validate']) == ExitCode.OK
    assert capsys.readouterr().out.splitlines()[0] == 'suite,checked,failed,max_error'


def test_validate_reports_injected_fault(small_validation, capsys):
    def faulty(source, target):
        solution = max_fidelity_major(source, target)
        return MajorSolution(solution.fidelity * 0.98, solution.optimizer, solution.active_breakpoints)

    assert main(['validate'], major_solver=faulty) == ExitCode.IO_ERROR
    assert 'oracle_equivalence' in capsys.readouterr().err
