import logging

from generalized_turan.cache_manager import ResultCache
from generalized_turan.oracle import ExtremalResult


def _result(**overrides) -> ExtremalResult:
    data = {"n": 4, "h_g6": "A_", "f_g6": "Bw", "value": 4, "witness_g6": "CF"}
    return ExtremalResult(**{**data, **overrides})


def test_store_and_load(tmp_path):
    cache = ResultCache(tmp_path / "cache")
    cache.store(_result())
    loaded = cache.load(4, "A_", "Bw")
    assert loaded is not None
    assert loaded.value == 4
    assert (cache.hits, cache.misses) == (1, 0)


def test_entries_use_the_schema_alias(tmp_path):
    cache = ResultCache(tmp_path)
    cache.store(_result())
    text = cache.path_for(4, "A_", "Bw").read_text()
    assert '"schema": 1' in text


def test_missing_entry_is_a_miss(tmp_path):
    cache = ResultCache(tmp_path)
    assert cache.load(5, "A_", "Bw") is None
    assert cache.misses == 1


def test_keys_separate_instances(tmp_path):
    """Different n, H or F never share a file."""
    keys = {ResultCache.key(4, "A_", "Bw"), ResultCache.key(5, "A_", "Bw"), ResultCache.key(4, "Bw", "A_")}
    assert len(keys) == 3


def test_corrupt_entry_is_logged_and_ignored(tmp_path, caplog):
    cache = ResultCache(tmp_path)
    path = cache.path_for(4, "A_", "Bw")
    path.write_text("{not json")
    with caplog.at_level(logging.WARNING, logger="generalized_turan.cache_manager"):
        assert cache.load(4, "A_", "Bw") is None
    assert cache.misses == 1
    assert any("corrupt" in r.getMessage() for r in caplog.records)


def test_mismatched_entry_is_ignored(tmp_path):
    cache = ResultCache(tmp_path)
    cache.path_for(4, "A_", "Bw").write_text(_result(n=5).model_dump_json(by_alias=True))
    assert cache.load(4, "A_", "Bw") is None


def test_disabled_cache_does_nothing(tmp_path):
    cache = ResultCache(tmp_path / "off", enabled=False)
    cache.store(_result())
    assert cache.load(4, "A_", "Bw") is None
    assert not (tmp_path / "off").exists()
    assert cache.misses == 0


def test_clear(tmp_path):
    cache = ResultCache(tmp_path)
    cache.store(_result())
    cache.store(_result(n=5))
    assert cache.clear() == 2
    assert cache.clear() == 0
