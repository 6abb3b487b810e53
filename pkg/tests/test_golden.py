import json
import os

import pytest
import yaml

from catalog import MAP_NAMES, SPACE_NAMES
from tcbound import main

with open(os.path.join(os.path.dirname(os.path.abspath(__file__)), 'golden', 'reports.yaml')) as f:
    GOLDEN = yaml.safe_load(f)


def _report(capsys, command, name):
    code = main([command, '--builtin', name, '--field', 'q', '--field', 'f2', '--format', 'json'])
    assert code == 0
    return json.loads(capsys.readouterr().out)


def _interval(doc):
    return [doc['lo'], doc['hi']]


def test_golden_covers_catalog():
    assert set(GOLDEN['spaces']) == set(SPACE_NAMES)
    assert set(GOLDEN['maps']) == set(MAP_NAMES)


@pytest.mark.parametrize('name', sorted(GOLDEN['spaces']))
def test_space_report(capsys, name):
    expected = GOLDEN['spaces'][name]
    doc = _report(capsys, 'space', name)
    assert doc['schema'] == 'tcbound-report/1'
    space = doc['space']
    for field, dims in expected['cohomology'].items():
        assert space['cohomology'][field] == dims
    for key in ('cup_length', 'zcl'):
        for field, value in expected[key].items():
            assert space[key][field]['value'] == value, (key, field)
    assert _interval(space['cat']) == expected['cat']
    assert _interval(space['tc']) == expected['tc']


@pytest.mark.parametrize('name', sorted(GOLDEN['maps']))
def test_map_report(capsys, name):
    expected = GOLDEN['maps'][name]
    doc = _report(capsys, 'map', name)
    assert _interval(doc['map']['tc']) == expected['tc']
    assert _interval(doc['map']['sec']) == expected['sec']
