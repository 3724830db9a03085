import json
import os

import pytest

from identities import Window
from persist import ReportCache, fingerprint


def test_fingerprint_is_stable():
    echo = (('f', '-j'), ('a', '1'))
    first = fingerprint(echo, 'lsa', Window(-2, 2), 20, {'x0': 1})
    assert first == fingerprint(echo, 'lsa', Window(-2, 2), 20, {'x0': '1'})
    assert first != fingerprint(echo, 'lsa', Window(-2, 3), 20, {'x0': 1})
    assert first != fingerprint(echo, 'lsa', Window(-2, 2), None, {'x0': 1})
    assert first != fingerprint(echo, 'skew', Window(-2, 2), 20, {'x0': 1})


def test_cache_roundtrip(tmp_path):
    path = str(tmp_path / 'nested' / 'cache.json')
    cache = ReportCache(path)
    assert len(cache) == 0
    cache['k'] = [{'check': 'lsa-element', 'verdict': 'holds'}]
    assert 'k' in cache
    assert ReportCache(path)['k'][0]['verdict'] == 'holds'
    assert list(cache) == ['k']
    assert cache.get('missing') is None
    del cache['k']
    assert len(cache) == 0
    with pytest.raises(KeyError):
        del cache['k']
    assert not os.path.exists(path + '_')


def test_cache_clear(tmp_path):
    cache = ReportCache(str(tmp_path / 'cache.json'))
    cache['a'] = []
    cache.clear()
    with open(cache.filepath, encoding='utf-8') as fh:
        assert json.load(fh) == {}


def test_corrupt_cache_reads_empty(tmp_path, caplog):
    path = tmp_path / 'cache.json'
    path.write_text('{not json', encoding='utf-8')
    cache = ReportCache(str(path))
    assert len(cache) == 0
    assert 'unreadable' in caplog.text
    cache['a'] = [1]
    assert cache['a'] == [1]
