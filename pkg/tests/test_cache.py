import json
import threading

import pytest

from sptcong import cache
from sptcong.errors import CacheInconsistency
from sptcong.forms import statistic
from sptcong.series import QSeries


def test_memory_only_without_env():
    cache.clear_memory()
    calls = []

    def builder(n):
        calls.append(n)
        return QSeries.from_q({k: k for k in range(n)}, n)

    assert cache.get("t-mem", 10, builder).q_precision == 10
    assert cache.get("t-mem", 5, builder).q_precision == 5
    assert calls == [10]
    cache.get("t-mem", 20, builder)
    assert calls == [10, 20]


def test_disk_round_trip(cache_dir):
    s = statistic("spt", 50)
    files = list(cache_dir.glob("stat-spt*.json"))
    assert len(files) == 1
    stored = QSeries.from_json(files[0].read_text())
    assert stored.q_coeff(5) == 14
    cache.clear_memory()
    assert statistic("spt", 50) == s


def test_disk_entry_is_trusted(cache_dir):
    statistic("p", 30)
    path = next(cache_dir.glob("stat-p*.json"))
    obj = json.loads(path.read_text())
    obj["terms"] = [t if t[0] != 5 * 24 else [t[0], 8, 1] for t in obj["terms"]]
    path.write_text(json.dumps(obj))
    cache.clear_memory()
    assert statistic("p", 30).q_coeff(5) == 8


def test_damaged_entry_is_reported_on_rebuild(cache_dir):
    statistic("p", 30)
    path = next(cache_dir.glob("stat-p*.json"))
    obj = json.loads(path.read_text())
    obj["terms"] = [t if t[0] != 5 * 24 else [t[0], 8, 1] for t in obj["terms"]]
    path.write_text(json.dumps(obj))
    cache.clear_memory()
    with pytest.raises(CacheInconsistency) as err:
        statistic("p", 500)
    assert err.value.index == 5 * 24


def test_persist_false_skips_disk(cache_dir):
    cache.get("t-nodisk", 5, lambda n: QSeries.from_q({0: 1}, n), persist=False)
    assert not cache_dir.exists() or not list(cache_dir.glob("t-nodisk*"))


def test_concurrent_fill_is_idempotent():
    cache.clear_memory()
    out = []

    def work():
        out.append(cache.get("t-conc", 40, lambda n: QSeries.from_q({1: 1}, n)))

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(s == out[0] for s in out)
