import json
from fractions import Fraction

import pytest

from bounds import analyze_map, analyze_space
from catalog import builtin_map, builtin_space
from report import SCHEMA, map_report, plain, render, space_report


@pytest.fixture
def rp2_doc(fields):
    entry = builtin_space('rp2')
    return space_report(entry, analyze_space(entry.model, fields, entry.assertions, entry.known), rings=True)


@pytest.fixture
def cover_doc(fields):
    entry = builtin_map('s2_to_rp2')
    analysis = analyze_map(entry.model, fields, entry.assertions, entry.domain.known, entry.codomain.known)
    return map_report(entry, analysis)


def test_plain_values():
    assert plain(float('inf')) == 'inf'
    assert plain(Fraction(4, 2)) == 2
    assert plain(Fraction(1, 3)) == '1/3'
    assert plain({1: (Fraction(1, 2),)}) == {'1': ['1/2']}


def test_space_report_fields(rp2_doc):
    assert rp2_doc['schema'] == SCHEMA
    space = rp2_doc['space']
    assert space['homology']['torsion'] == [[], [2], []]
    assert space['cohomology']['f2'] == [1, 1, 1]
    assert space['tc']['lo'] == 4 and space['tc']['hi'] == 5
    assert space['zcl']['f2']['value'] == 4
    products = space['rings']['f2']['products']
    assert ['e1.0', 'e1.0', 'e2.0', 1] in products


def test_json_is_deterministic(rp2_doc):
    text = render(rp2_doc, 'json')
    assert text == render(rp2_doc, 'json')
    assert json.loads(text)['space']['tc']['binding_lower'] == ['tc.zcl']


def test_map_report(cover_doc):
    m = cover_doc['map']
    assert m['tc']['lo'] == 3 and m['tc']['hi'] == 4
    assert m['fstar_injective'] == {'q': True, 'f2': False}
    assert m['fixed_point_passes'] >= 1
    assert any(a['rule'] == 'R11' and a['note'] for a in m['tc']['trace'])
    assert 'rings' not in m['domain']


def test_markdown(cover_doc):
    text = render(cover_doc, 'markdown')
    assert text.startswith(f'# tcbound report ({SCHEMA})')
    assert '**TC(f)** = [3, 4]' in text
    assert '| R11 | upper | 4 |' in text


def test_unknown_format(cover_doc):
    with pytest.raises(ValueError):
        render(cover_doc, 'html')
