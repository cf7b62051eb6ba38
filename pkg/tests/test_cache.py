# stdlib
import json

# 3rd party
import pytest
from domdf_python_tools.paths import PathPlus

# this package
from curvquot.cache import TABLE_COLUMNS, ProfileCache, profile_table


@pytest.fixture()
def testing_cache(tmp_pathplus: PathPlus):
	cache = ProfileCache("testing_curvquot", cache_dir=tmp_pathplus / "cache")
	yield cache
	assert cache.clear()


def test_profile_table():
	table = profile_table("g0", 5)
	assert tuple(table) == TABLE_COLUMNS
	assert table['r'] == [0.0, 0.25, 0.5, 0.75, 1.0]
	assert table["g'''"] == [-6.0] * 5
	assert all(isinstance(value, float) for value in table['g'])


@pytest.mark.parametrize(
		"name, grid, key",
		[
				("g0", 16, "g0-16"),
				("geps:0.05", 1024, "geps_0.05-1024"),
				("sin", 2, "sin-2"),
				]
		)
def test_key(name: str, grid: int, key: str):
	assert ProfileCache.key(name, grid) == key


def test_cache(testing_cache: ProfileCache, monkeypatch):
	calls = []

	def counting_table(name: str, grid: int):
		calls.append((name, grid))
		return profile_table(name, grid)

	monkeypatch.setattr("curvquot.cache.profile_table", counting_table)

	assert testing_cache.get("linear", 3) is None
	table = testing_cache.table("linear", 3)
	assert table['g'] == [0.0, 0.5, 1.0]
	assert (testing_cache.cache_dir / "linear-3.json").is_file()

	for _ in range(5):
		assert testing_cache.table("linear", 3) == table

	assert calls == [("linear", 3)]

	# A new instance reads the file rather than resampling.
	fresh = ProfileCache("testing_curvquot", cache_dir=testing_cache.cache_dir)
	assert fresh.table("linear", 3) == table
	assert calls == [("linear", 3)]


def test_clear(testing_cache: ProfileCache):
	testing_cache.table("linear", 3)
	testing_cache.table("linear", 4)
	testing_cache.table("g0", 3)

	assert testing_cache.clear("linear", 3)
	assert not (testing_cache.cache_dir / "linear-3.json").is_file()
	assert (testing_cache.cache_dir / "linear-4.json").is_file()
	assert "linear-3" not in testing_cache.tables

	assert testing_cache.clear("linear")
	assert not (testing_cache.cache_dir / "linear-4.json").is_file()
	assert (testing_cache.cache_dir / "g0-3.json").is_file()

	assert testing_cache.clear()
	assert testing_cache.cache_dir.is_dir()
	assert not list(testing_cache.cache_dir.iterdir())
	assert testing_cache.tables == {}


def test_unreadable_file(testing_cache: ProfileCache, caplog):
	(testing_cache.cache_dir / "linear-3.json").write_text("{")

	assert testing_cache.get("linear", 3) is None
	assert "Ignoring unreadable cache file" in caplog.text

	assert testing_cache.table("linear", 3)['r'] == [0.0, 0.5, 1.0]
	assert json.loads((testing_cache.cache_dir / "linear-3.json").read_text())['r'] == [0.0, 0.5, 1.0]
