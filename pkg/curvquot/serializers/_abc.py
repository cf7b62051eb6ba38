#!/usr/bin/env python
#
#  _abc.py
"""
The interface shared by the report and table formats.
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
from abc import ABC, abstractmethod
from typing import Any, ClassVar, List, Mapping, MutableMapping

# 3rd party
from domdf_python_tools.paths import PathPlus
from domdf_python_tools.typing import PathLike

__all__ = ["Serializer"]


class Serializer(ABC):
	"""
	A text format that check reports or function tables can be written in.

	Subclasses set :attr:`key`, :attr:`suffix` and :attr:`content_types`,
	and implement :meth:`dumps` and :meth:`loads`.
	The file helpers :meth:`dump` and :meth:`load` are built on those two methods.
	"""

	#: Media types this format is known by. The first is the canonical one.
	content_types: ClassVar[List[str]]

	@property
	@abstractmethod
	def key(self) -> str:  # pragma: no cover
		"""
		The short format name used on the command line and in :class:`~.SerializerRegistry`, e.g. ``'csv'``.
		"""

		return NotImplemented

	@property
	@abstractmethod
	def suffix(self) -> str:  # pragma: no cover
		"""
		The file suffix for this format, including the leading dot.
		"""

		return NotImplemented

	def get_content_type(self) -> str:
		"""
		Returns the canonical media type for this format.
		"""

		return self.content_types[0]

	@abstractmethod
	def loads(self, data: str) -> MutableMapping[str, Any]:
		"""
		Parse ``data`` back into a mapping.

		:param data:
		"""

		raise NotImplementedError()

	@abstractmethod
	def dumps(self, data: Mapping[str, Any]) -> str:
		"""
		Render ``data`` as text, ending with a single newline.

		:param data:
		"""

		raise NotImplementedError()

	def dump(self, data: Mapping[str, Any], filename: PathLike) -> PathPlus:
		"""
		Write ``data`` to ``filename``, creating parent directories as needed.

		:param data:
		:param filename:

		:returns: The path written to.
		"""

		filename = PathPlus(filename)
		filename.parent.maybe_make(parents=True)
		filename.write_clean(self.dumps(data))
		return filename

	def load(self, filename: PathLike) -> MutableMapping[str, Any]:
		"""
		Read a file previously written with :meth:`dump`.

		:param filename:
		"""

		return self.loads(PathPlus(filename).read_text())
