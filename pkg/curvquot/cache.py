#!/usr/bin/env python
#
#  cache.py
"""
On-disk cache of sampled warp profiles.

Tables of :math:`g_\\varepsilon` are costly to build, so :class:`~.ProfileCache` keeps them
as JSON files in the user cache directory, one per profile and grid size.
"""
#
#  Copyright © 2024 Dominic Davis-Foster <dominic@davis-foster.co.uk>
#
#  This program is free software; you can redistribute it and/or modify
#  it under the terms of the GNU Lesser General Public License as published by
#  the Free Software Foundation; either version 3 of the License, or
#  (at your option) any later version.
#
#  This program is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
#  GNU Lesser General Public License for more details.
#
#  You should have received a copy of the GNU Lesser General Public License
#  along with this program; if not, write to the Free Software
#  Foundation, Inc., 51 Franklin Street, Fifth Floor, Boston,
#  MA 02110-1301, USA.
#

# stdlib
import json
import logging
import re
import shutil
import warnings
from typing import Dict, List, Optional

# 3rd party
import platformdirs
from domdf_python_tools.paths import PathPlus
from domdf_python_tools.typing import PathLike

# this package
from curvquot.smoothing import profile_from_name

__all__ = ["ProfileCache", "TABLE_COLUMNS", "profile_table"]

_log = logging.getLogger(__name__)

#: The column names of a profile table.
TABLE_COLUMNS = ("r", "g", "g'", "g''", "g'''")

Table = Dict[str, List[float]]


def _stem(name: str) -> str:
	return re.sub(r"[^A-Za-z0-9.+-]", "_", str(name))


def profile_table(name: str, grid: int) -> Table:
	"""
	Sample the profile called ``name`` on ``grid`` points and return its columns.

	:param name: A profile name, as accepted by :func:`curvquot.smoothing.profile_from_name`.
	:param grid:
	"""

	array = profile_from_name(name).to_table(grid)
	return {column: array[:, index].tolist() for index, column in enumerate(TABLE_COLUMNS)}


class ProfileCache:
	"""
	Cache profile tables in an in-memory dictionary and in JSON files.

	:param app_name: The name of the app. This dictates the name of the cache directory.
	:param cache_dir: Use this directory instead of the user cache directory.
	"""

	app_name: str  #: The name of the app. This dictates the name of the cache directory.
	cache_dir: PathPlus  #: The location of the cache directory on disk.
	tables: Dict[str, Table]  #: Mapping of cache keys to tables loaded so far.

	def __init__(self, app_name: str = "curvquot", cache_dir: Optional[PathLike] = None):
		self.app_name: str = str(app_name)

		if cache_dir is None:
			self.cache_dir = PathPlus(platformdirs.user_cache_dir(f"{self.app_name}_cache"))
		else:
			self.cache_dir = PathPlus(cache_dir)

		self.cache_dir.maybe_make(parents=True)
		self.tables: Dict[str, Table] = {}

	@staticmethod
	def key(name: str, grid: int) -> str:
		"""
		Returns the cache key, which is also the file stem, for a profile and grid size.

		:param name:
		:param grid:
		"""

		return f"{_stem(name)}-{int(grid)}"

	def _path(self, key: str) -> PathPlus:
		return self.cache_dir / f"{key}.json"

	def get(self, name: str, grid: int) -> Optional[Table]:
		"""
		Returns the cached table, or :py:obj:`None` if there is none.

		:param name:
		:param grid:
		"""

		key = self.key(name, grid)
		if key in self.tables:
			return self.tables[key]

		cache_file = self._path(key)
		if not cache_file.is_file():
			return None

		try:
			table = json.loads(cache_file.read_text())
		except ValueError:
			_log.warning("Ignoring unreadable cache file %s", cache_file)
			return None

		self.tables[key] = table
		return table

	def put(self, name: str, grid: int, table: Table) -> None:
		"""
		Store a table.

		:param name:
		:param grid:
		:param table:
		"""

		key = self.key(name, grid)
		self.tables[key] = table
		self._path(key).write_clean(json.dumps(table))

	def table(self, name: str, grid: int) -> Table:
		"""
		Returns the table for ``name`` on ``grid`` points, computing and storing it if it is not cached.

		:param name:
		:param grid:
		"""

		table = self.get(name, grid)
		if table is None:
			_log.debug("Sampling %s on %d points", name, grid)
			table = profile_table(name, grid)
			self.put(name, grid, table)
		return table

	def clear(self, name: Optional[str] = None, grid: Optional[int] = None) -> bool:
		"""
		Clear the cache.

		:param name: Optional profile to clear the cache for.
			By default, the whole cache is cleared.
		:param grid: With ``name``, clear only this grid size.
		:no-default name:

		:returns: True to indicate success. False otherwise.
		"""

		try:
			if name is None:
				shutil.rmtree(self.cache_dir)
				self.cache_dir.maybe_make(parents=True)
				self.tables = {}
			else:
				pattern = f"{self.key(name, grid)}.json" if grid is not None else f"{_stem(name)}-*.json"
				for cache_file in self.cache_dir.glob(pattern):
					cache_file.unlink()
					self.tables.pop(cache_file.stem, None)

			return True

		except Exception as e:  # pragma: no cover
			warnings.warn(f"Could not remove cache. The error was: {e}")
			return False
