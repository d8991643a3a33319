"""
Tests for the stein-embed command line and its reports.
"""

import dataclasses
import json

import numpy as np
import pytest

from stein_embed.cli.main import main
from stein_embed.cli.report import CSV_COLUMNS, SCHEMA, Report, _plain, reevaluate, verdict
from stein_embed.registry import KERNEL_MODEL, registry
from stein_embed.ustats import format_kernel_table, get_kernel


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args])


def report_of(result):
    return json.loads(result.stdout)


class TestReport:
    """Tests for Report and verdict"""

    def test_verdicts(self):
        """Test the three relations"""
        assert verdict('close', 1.0, 1.05, 0.1)
        assert not verdict('close', 1.0, 1.2, 0.1)
        assert verdict('le', 1.0, 1.0, 0.0)
        assert not verdict('le', 1.0, 1.5, 0.1)
        assert verdict('info', 1.0, 99.0, 0.0)
        with pytest.raises(ValueError):
            verdict('ge', 1.0, 1.0, 0.0)

    def test_nan_fails(self):
        """Test that a missing value never passes"""
        assert not verdict('le', 1.0, None, 0.0)

    def test_plain(self):
        """Test numpy values and infinities become JSON-safe"""
        assert _plain({'a': np.float64(1.5), 'b': np.arange(2), 'c': float('inf')}) == \
            {'a': 1.5, 'b': [0, 1], 'c': 'inf'}

    def test_passed(self):
        """Test that one failing check fails the report"""
        report = Report('demo', {'n': 4})
        report.close('good', 1.0, 1.0, 0.0)
        assert report.passed
        report.at_most('bad', 0.0, 1.0)
        assert not report.passed
        data = json.loads(report.to_json())
        assert data['schema'] == SCHEMA
        assert [c['passed'] for c in data['checks']] == [True, False]

    def test_csv(self):
        """Test the CSV header and one row per check"""
        report = Report('demo', {})
        report.info('x', 1.0, 2.0)
        lines = report.to_csv().splitlines()
        assert lines[0] == ','.join(CSV_COLUMNS)
        assert len(lines) == 2

    def test_reevaluate_schema(self):
        """Test that foreign documents are refused"""
        with pytest.raises(ValueError):
            reevaluate(json.dumps({'schema': 'other', 'checks': []}))


class TestGraphCommands:
    """Tests for graph-moments, graph-verify and graph-bound"""

    def test_graph_moments_enumerated(self, runner):
        """Test the closed forms against enumeration at n = 4"""
        result = invoke(runner, 'graph-moments', '--n', 4, '--p', 0.5, '--enumerate', '--no-timestamp')
        assert result.exit_code == 0, result.output
        data = report_of(result)
        assert data['passed']
        assert data['command'] == 'graph-moments'
        assert 'timestamp' not in data
        assert data['values']['means']['value'] == [3.0, 3.0, 0.5]

    def test_reevaluate_matches(self, runner):
        """Test recomputed verdicts agree with the recorded ones"""
        result = invoke(runner, 'graph-moments', '--n', 5, '--p', 0.3, '--no-timestamp')
        for row in reevaluate(result.stdout):
            assert row['recorded'] == row['recomputed'], row['name']

    def test_csv_format(self, runner):
        """Test --format csv"""
        result = invoke(runner, 'graph-moments', '--n', 6, '--p', 0.5, '--format', 'csv')
        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == ','.join(CSV_COLUMNS)

    def test_enumeration_too_large(self, runner):
        """Test --enumerate above the enumeration cap"""
        result = invoke(runner, 'graph-moments', '--n', 8, '--p', 0.5, '--enumerate')
        assert result.exit_code == 2

    def test_invalid_probability(self, runner):
        """Test p outside (0, 1)"""
        result = invoke(runner, 'graph-moments', '--n', 8, '--p', 1.5)
        assert result.exit_code == 2

    def test_graph_verify(self, runner):
        """Test a small verification run"""
        result = invoke(runner, 'graph-verify', '--n', 6, '--p', 0.5, '--graphs', 50,
                        '--samples', 20000, '--seed', 3, '--no-timestamp')
        assert result.exit_code == 0, result.output
        assert report_of(result)['seed'] == 3

    def test_graph_verify_bad_file(self, runner, tmp_path):
        """Test a malformed edge list"""
        path = tmp_path / 'graph.txt'
        path.write_text('6\n0 x\n')
        result = invoke(runner, 'graph-verify', '--n', 6, '--p', 0.5, '--graph', path, '--samples', 100)
        assert result.exit_code == 2

    def test_graph_bound(self, runner):
        """Test the smooth bound against its closed form"""
        result = invoke(runner, 'graph-bound', '--n', 10, '--p', 0.5, '--samples', 20000,
                        '--abc-samples', 4000, '--seed', 5, '--no-timestamp')
        assert result.exit_code == 0, result.output


class TestUStatCommands:
    """Tests for ustat-verify and ustat-bound"""

    def test_ustat_verify(self, runner):
        """Test the default kernel at a small n"""
        result = invoke(runner, 'ustat-verify', '--n', 8, '--trials', 20, '--samples', 20000, '--no-timestamp')
        assert result.exit_code == 0, result.output

    def test_ustat_verify_table_file(self, runner, tmp_path):
        """Test a kernel table passed as path:FILE"""
        path = tmp_path / 'tern.txt'
        path.write_text(format_kernel_table(get_kernel('ternary-variance')))
        result = invoke(runner, 'ustat-verify', '--kernel', f'path:{path}', '--n', 6, '--trials', 10,
                        '--samples', 20000, '--no-timestamp')
        assert result.exit_code == 0, result.output

    def test_ustat_bound(self, runner):
        """Test the ternary kernel with exact conditional products"""
        result = invoke(runner, 'ustat-bound', '--kernel', 'ternary-variance', '--n', 8,
                        '--samples', 20000, '--abc-samples', 2000, '--seed', 9, '--no-timestamp')
        assert result.exit_code == 0, result.output
        names = [c['name'] for c in report_of(result)['checks']]
        assert 'aprime_within_simplified' in names

    def test_rank_one_limit_checked(self, runner):
        """Test Σ at --limit-n is judged against k·l·Var ψ₁ entry by entry"""
        args = ('ustat-verify', '--kernel', 'pm1-mean', '--n', 6, '--trials', 10, '--samples', 20000,
                '--seed', 6, '--no-timestamp')
        result = invoke(runner, *args, '--limit-n', 400)
        assert result.exit_code == 0, result.output
        checks = {c['name']: c for c in report_of(result)['checks']}
        for name in ('rank_one_limit[1][1]', 'rank_one_limit[1][2]', 'rank_one_limit[2][2]'):
            assert checks[name]['relation'] == 'close'
            assert checks[name]['passed']
        assert checks['rank_one_limit[2][2]']['target'] == 1.0

        skipped = invoke(runner, *args, '--limit-n', 0)
        assert not any(c['name'].startswith('rank_one_limit') for c in report_of(skipped)['checks'])

    def test_rank_one_limit_fails_on_wrong_variance(self, runner):
        """Test a kernel declaring the wrong Var ψ₁ fails the report"""
        wrong = dataclasses.replace(get_kernel('pm1-mean'), name='pm1-wrong-variance', var_psi1=1.0)
        registry.register(KERNEL_MODEL, 'pm1-wrong-variance', lambda: wrong)
        try:
            result = invoke(runner, 'ustat-verify', '--kernel', 'pm1-wrong-variance', '--n', 6, '--trials', 10,
                            '--samples', 20000, '--limit-n', 400, '--seed', 6, '--no-timestamp')
        finally:
            registry.unregister(KERNEL_MODEL, 'pm1-wrong-variance')
        assert result.exit_code == 1
        checks = {c['name']: c for c in report_of(result)['checks']}
        assert not checks['rank_one_limit[2][2]']['passed']
        assert not report_of(result)['passed']

    def test_unknown_kernel(self, runner):
        """Test exit code 2 for an unregistered kernel"""
        result = invoke(runner, 'ustat-verify', '--kernel', 'no-such-kernel')
        assert result.exit_code == 2

    def test_malformed_table(self, runner, tmp_path):
        """Test exit code 2 for a broken kernel table"""
        path = tmp_path / 'bad.txt'
        path.write_text('1 2\n-1 0.4\n1 0.5\n-0.5\n0.5\n')
        result = invoke(runner, 'ustat-verify', '--kernel', f'path:{path}')
        assert result.exit_code == 2


class TestChaosAndEval:
    """Tests for chaos-verify and stein-eval"""

    def test_chaos_verify(self, runner):
        """Test random coefficients at d = 3"""
        result = invoke(runner, 'chaos-verify', '--d', 3, '--samples', 20000, '--abc-samples', 2000,
                        '--seed', 4, '--no-timestamp')
        assert result.exit_code == 0, result.output

    def test_worker_count_does_not_change_report(self, runner):
        """Test byte-identical reports for 1 and 4 workers"""
        args = ('chaos-verify', '--d', 3, '--samples', 20000, '--abc-samples', 2000, '--seed', 8,
                '--no-timestamp')
        one = invoke(runner, *args, '--workers', 1)
        four = invoke(runner, *args, '--workers', 4)
        assert one.exit_code == four.exit_code
        assert one.stdout == four.stdout

    def test_missing_coefficient_file(self, runner, tmp_path):
        """Test a --coeffs path that does not exist"""
        result = invoke(runner, 'chaos-verify', '--d', 3, '--coeffs', tmp_path / 'missing.txt')
        assert result.exit_code == 2

    def test_stein_eval_zero(self, runner):
        """Test that zero statistics give a zero bound"""
        result = invoke(runner, 'stein-eval', '--abc', 0, 0, 0, '--d', 3, '--signorm', 1, '--h', 'cos111')
        assert result.exit_code == 0
        assert report_of(result)['bounds']['smooth']['value'] == 0.0

    def test_stein_eval_nonsmooth(self, runner):
        """Test the non-smooth reference value"""
        result = invoke(runner, 'stein-eval', '--abc', 1, 1, 0, '--d', 2, '--signorm', 1,
                        '--h2', 1, '--h3', 1, '--nonsmooth', 0, 2, 0, 1, 1)
        assert result.exit_code == 0
        assert report_of(result)['bounds']['nonsmooth']['value'] == pytest.approx(2.0, rel=1e-12)

    def test_stein_eval_degenerate(self, runner):
        """Test exit code 2 when A′ = B′ = C′ = 0"""
        result = invoke(runner, 'stein-eval', '--abc', 0, 0, 0, '--d', 2, '--signorm', 1,
                        '--nonsmooth', 0, 0, 0, 1, 1)
        assert result.exit_code == 2

    def test_help_lists_commands(self, runner):
        """Test the top-level help"""
        result = invoke(runner, '--help')
        assert result.exit_code == 0
        for name in ('graph-moments', 'graph-verify', 'graph-bound', 'ustat-verify', 'ustat-bound',
                     'chaos-verify', 'stein-eval'):
            assert name in result.output
