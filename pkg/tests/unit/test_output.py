"""Tests for result files and charts."""

import json
from fractions import Fraction
from pathlib import Path

import click
import pytest

from traffic_queues import __version__
from traffic_queues.cli.charts import ChartError, ChartKind, ChartSpec, render_chart
from traffic_queues.cli.output import (
    OutputFormat,
    RunConfig,
    read_csv_rows,
    render_csv,
    render_json,
    write_csv,
    write_rows,
)


@pytest.fixture
def config():
    return RunConfig(command='tlq predict', options={'p': '1/3', 'n': 1000000, 'ell': 1})


class TestRunConfig:
    """Tests for provenance records."""

    def test_from_context(self):
        ctx = click.Context(click.Command('predict'), info_name='predict')
        ctx.params = {'p': Fraction(1, 3), 'format': OutputFormat.CSV, 'out': Path('a.csv'), 'ks': (1, 2)}
        config = RunConfig.from_context(ctx)
        assert config.command == 'predict'
        assert config.options == {'p': '1/3', 'format': 'csv', 'out': 'a.csv', 'ks': [1, 2]}
        assert config.version == __version__

    def test_json_is_canonical(self, config):
        """Test that equal configs serialise to identical text."""
        other = RunConfig(command='tlq predict', options={'ell': 1, 'n': 1000000, 'p': '1/3'})
        assert config.to_json() == other.to_json()
        assert config.to_json().startswith('{"command":"tlq predict","options":{"ell":1,')
        assert ', ' not in config.to_json()
        assert '": ' not in config.to_json()


class TestCsv:
    """Tests for CSV output."""

    def test_provenance_header(self, config):
        lines = render_csv(['m', 'pmf'], [[0, 0.5], [1, 0.5]], config).splitlines()
        assert lines[0] == f'# traffic_queues {__version__}'
        assert lines[1] == f'# config: {config.to_json()}'
        assert lines[2:] == ['m,pmf', '0,0.5', '1,0.5']

    def test_read_back(self, config, tmp_path):
        path = tmp_path / 'out.csv'
        write_csv(['level', 'count'], [[3, 10], [4, 2]], config, path)
        assert read_csv_rows(path) == (['level', 'count'], [['3', '10'], ['4', '2']])

    def test_stdout(self, config, capsys):
        write_csv(['a'], [[1]], config)
        assert capsys.readouterr().out.endswith('a\n1\n')

    def test_missing_header(self, tmp_path):
        path = tmp_path / 'empty.csv'
        path.write_text('# only provenance\n')
        with pytest.raises(click.BadParameter):
            read_csv_rows(path)


class TestJsonAndRows:
    """Tests for JSON documents and format dispatch."""

    def test_document(self, config):
        document = json.loads(render_json({'value': '0.125'}, config))
        assert document['version'] == __version__
        assert document['config']['command'] == 'tlq predict'
        assert document['value'] == '0.125'

    def test_rows_as_json(self, config, tmp_path):
        path = tmp_path / 'rows.json'
        write_rows(OutputFormat.JSON, 'title', ['m', 'cdf'], [[0, 0.25], [1, 1.0]], config, path)
        assert json.loads(path.read_text())['rows'] == [{'m': 0, 'cdf': 0.25}, {'m': 1, 'cdf': 1.0}]

    def test_explicit_payload(self, config, tmp_path):
        path = tmp_path / 'rows.json'
        write_rows(OutputFormat.JSON, 'title', ['m'], [[0]], config, path, payload={'mean': 1.5})
        document = json.loads(path.read_text())
        assert document['mean'] == 1.5
        assert 'rows' not in document

    def test_table(self, config, capsys, monkeypatch):
        monkeypatch.setenv('COLUMNS', '100')
        write_rows(OutputFormat.TABLE, 'Expected maxima', ['p', 'E1'], [[0.2, 9.5]], config)
        out = capsys.readouterr().out
        assert 'Expected' in out
        assert 'maxima' in out
        assert '0.2' in out
        assert '9.5' in out


class TestCharts:
    """Tests for SVG rendering."""

    @pytest.fixture
    def overlay(self):
        return ChartSpec(
            kind=ChartKind.HISTOGRAM_OVERLAY,
            series={'empirical': [(0, 0.2), (1, 0.5), (2, 0.3)], 'predicted': [(0, 0.25), (1, 0.45), (2, 0.3)]},
            title='M_n',
            description='tlq plot histogram',
        )

    def test_svg_document(self, overlay):
        svg = render_chart(overlay)
        assert svg.lstrip().startswith('<?xml')
        assert '<svg' in svg
        assert 'tlq plot histogram' in svg

    def test_deterministic(self, overlay):
        assert render_chart(overlay) == render_chart(overlay)

    def test_line_family(self):
        spec = ChartSpec(
            kind=ChartKind.LINE_FAMILY,
            series={'E0': [(0.2, 12.0), (0.3, 20.0)], 'E1': [(0.2, 8.0), (0.3, 11.0)]},
        )
        assert '<svg' in render_chart(spec)

    def test_nothing_to_draw(self):
        with pytest.raises(ChartError):
            render_chart(ChartSpec(kind=ChartKind.LINE_FAMILY, series={'E0': []}))
