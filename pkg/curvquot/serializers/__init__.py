#!/usr/bin/env python
#
#  __init__.py
"""
JSON and CSV serializers for check reports and function tables.

.. automodulesumm:: curvquot.serializers
	:autosummary-sections: ;;
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
import csv
import io
import json
import math
from typing import Any, Dict, List, Mapping, MutableMapping, Optional, Type

# 3rd party
import numpy as np
from domdf_python_tools.stringlist import StringList

# this package
from curvquot.exceptions import ConfigError
from curvquot.serializers._abc import Serializer

__all__ = [
		"CsvSerializer",
		"JsonSerializer",
		"Serializer",
		"SerializerNotAvailable",
		"SerializerRegistry",
		"to_jsonable",
		]


def to_jsonable(obj: Any) -> Any:
	"""
	Convert ``obj`` into plain Python containers and numbers.

	NumPy scalars and arrays become floats, ints and lists; tuples become lists;
	non-finite floats become :py:obj:`None`.

	.. code-block:: python

		>>> to_jsonable({"a": np.float64(1.5), "b": (np.inf, 2)})
		{'a': 1.5, 'b': [None, 2]}

	:param obj:
	"""

	if isinstance(obj, Mapping):
		return {str(key): to_jsonable(value) for key, value in obj.items()}
	elif isinstance(obj, (list, tuple, np.ndarray)):
		return [to_jsonable(value) for value in obj]
	elif isinstance(obj, (bool, np.bool_)):
		return bool(obj)
	elif isinstance(obj, (int, np.integer)):
		return int(obj)
	elif isinstance(obj, (float, np.floating)):
		value = float(obj)
		return value if math.isfinite(value) else None
	return obj


class JsonSerializer(Serializer):
	"""
	Serializer for JSON reports.

	Keys are sorted and indented by two spaces, so that equal data always gives identical text.
	"""

	content_types = ["application/json", "text/x-json"]
	key = "json"
	suffix = ".json"

	def loads(self, data: str) -> MutableMapping[str, Any]:
		"""
		Parse a JSON report.

		:param data:
		"""

		return json.loads(data)

	def dumps(self, data: Mapping[str, Any]) -> str:
		"""
		Render a report as JSON, converting NumPy values with :func:`~.to_jsonable`.

		:param data:
		"""

		return json.dumps(to_jsonable(data), sort_keys=True, indent=2) + '\n'


class CsvSerializer(Serializer):
	"""
	Serializer for function tables, given as a mapping of column names to equal-length columns.

	Column order is preserved, and values are written with :func:`repr` so they round-trip exactly.
	"""

	content_types = ["text/csv"]
	key = "csv"
	suffix = ".csv"

	def loads(self, data: str) -> MutableMapping[str, Any]:
		"""
		Read a table back as a mapping of column names to lists of floats.

		:param data:

		:returns: An empty mapping when ``data`` has no header row.
		"""

		reader = csv.reader(io.StringIO(data))
		try:
			header = next(reader)
		except StopIteration:
			return {}

		columns: Dict[str, List[float]] = {name: [] for name in header}
		for row in reader:
			if not row:
				continue
			for name, value in zip(header, row):
				columns[name].append(float(value))

		return columns

	def dumps(self, data: Mapping[str, Any]) -> str:
		"""
		Write the columns as CSV with a header row.

		:param data:

		:raises ValueError: if the columns differ in length.
		"""

		names = list(data)
		columns = [np.ravel(np.asarray(data[name], dtype=float)) for name in names]
		lengths = {len(column) for column in columns}
		if len(lengths) > 1:
			raise ValueError(f"Columns have differing lengths {sorted(lengths)}")

		output = StringList([','.join(names)])
		for row in zip(*columns):
			output.append(','.join(repr(float(value)) for value in row))
		output.blankline(ensure_single=True)
		return str(output)


_SERIALIZERS: List[Type[Serializer]] = [JsonSerializer, CsvSerializer]


class SerializerRegistry:
	"""
	Looks up serializers by format name or content type.

	:param default: The :attr:`~.Serializer.key` used when no format is given.
	:param serializers: The formats to offer. Defaults to JSON and CSV.
	"""

	def __init__(self, default: str = "json", serializers: Optional[List[Serializer]] = None):

		#: The available formats, by :attr:`~.Serializer.key`.
		self.serializers: Dict[str, Serializer] = {}

		for serializer in serializers or [x() for x in _SERIALIZERS]:
			self.serializers[serializer.key] = serializer

		#: The format used when none is given.
		self.default: str = default

	def get_serializer(self, name: Optional[str] = None, content_type: Optional[str] = None) -> Serializer:
		"""
		Look up a format by media type if ``content_type`` is given, otherwise by name.

		:param name: The format name. Defaults to :attr:`default`.
		:param content_type:

		:raises SerializerNotAvailable: if nothing matches.
		"""

		if content_type is not None:
			for serializer in self.serializers.values():
				if content_type in serializer.content_types:
					return serializer
			raise SerializerNotAvailable(content_type)

		name = self.default if name is None else name
		try:
			return self.serializers[name]
		except KeyError:
			raise SerializerNotAvailable(name) from None

	def loads(
			self,
			data: str,
			format: Optional[str] = None,  # noqa: A002  # pylint: disable=redefined-builtin
			) -> MutableMapping[str, Any]:
		"""
		Parse ``data`` with the named format.

		:param data:
		:param format: Defaults to :attr:`default`.
		"""

		return self.get_serializer(format).loads(data)

	def dumps(
			self,
			data: Mapping[str, Any],
			format: Optional[str] = None,  # noqa: A002  # pylint: disable=redefined-builtin
			) -> str:
		"""
		Render ``data`` with the named format.

		:param data:
		:param format: Defaults to :attr:`default`.
		"""

		return self.get_serializer(format).dumps(data)


class SerializerNotAvailable(ConfigError):
	"""
	The chosen :class:`Serializer` is not available.
	"""

	def __init__(self, content_type: str):
		super().__init__(f"No serializer available for {content_type!r}.", field="format")


Serializer.__module__ = JsonSerializer.__module__
