#!/usr/bin/env python3
#
#  config.py
"""
Configuration documents for verification checks.

A configuration is a JSON object such as

.. code-block:: json

	{
		"check": "smoothing-lemma12",
		"seed": 0,
		"scene": {"eps": [0.02, 0.05, 0.1]},
		"tolerances": {"grid": 1e-8},
		"samples": {"grid": 1024}
	}

Only ``"check"`` is required.
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
import math
from dataclasses import dataclass, field, replace
from typing import Any, Collection, Dict, Mapping, Optional

# 3rd party
from domdf_python_tools.paths import PathPlus
from domdf_python_tools.typing import PathLike

# this package
from curvquot.exceptions import ConfigError, UnknownCheckError

__all__ = ["CheckConfig", "load_config", "parse_config"]

_KNOWN_KEYS = frozenset({"check", "seed", "scene", "tolerances", "samples", "out"})


@dataclass(frozen=True)
class CheckConfig:
	"""
	The parameters of one verification run.
	"""

	#: The name of the check.
	check: str

	#: The seed for every random draw made by the check.
	seed: int = 0

	#: Scene parameters, interpreted by each check.
	scene: Mapping[str, Any] = field(default_factory=dict)

	#: Overrides of the check's default tolerances.
	tolerances: Mapping[str, float] = field(default_factory=dict)

	#: Overrides of the check's default sample budgets.
	samples: Mapping[str, int] = field(default_factory=dict)

	#: Where to write the report, if anywhere.
	out: Optional[str] = None

	def with_overrides(self, seed: Optional[int] = None, out: Optional[str] = None, **scene: Any) -> "CheckConfig":
		"""
		Returns a copy with the given values replaced. Keyword arguments which are not :py:obj:`None` update the scene.

		:param seed:
		:param out:
		"""

		changes: Dict[str, Any] = {}
		if seed is not None:
			changes["seed"] = seed
		if out is not None:
			changes["out"] = out

		scene = {key: value for key, value in scene.items() if value is not None}
		if scene:
			changes["scene"] = {**self.scene, **scene}

		return replace(self, **changes)

	def as_dict(self) -> Dict[str, Any]:
		"""
		Returns the configuration as a JSON-serialisable mapping.
		"""

		return {
				"check": self.check,
				"seed": self.seed,
				"scene": dict(self.scene),
				"tolerances": dict(self.tolerances),
				"samples": dict(self.samples),
				}


def _require_mapping(value: Any, name: str) -> Mapping[str, Any]:
	if value is None:
		return {}
	if not isinstance(value, Mapping):
		raise ConfigError(f"{name!r} must be an object, not {type(value).__name__}", field=name)
	return value


def _is_integer(value: Any) -> bool:
	return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
	return isinstance(value, (int, float)) and not isinstance(value, bool)


def parse_config(document: Mapping[str, Any], known_checks: Optional[Collection[str]] = None) -> CheckConfig:
	"""
	Validate a configuration document and return the corresponding :class:`~.CheckConfig`.

	:param document: The parsed JSON object.
	:param known_checks: If given, the check name must be one of these.

	:raises curvquot.exceptions.ConfigError: naming the first offending field.
	:raises curvquot.exceptions.UnknownCheckError: if the check name is not in ``known_checks``.
	"""

	if not isinstance(document, Mapping):
		raise ConfigError("The configuration must be a JSON object", field="<root>")

	unknown = sorted(set(document) - _KNOWN_KEYS)
	if unknown:
		raise ConfigError(f"Unknown configuration key {unknown[0]!r}", field=unknown[0])

	check = document.get("check")
	if not isinstance(check, str) or not check:
		raise ConfigError("'check' must be a non-empty string", field="check")
	if known_checks is not None and check not in known_checks:
		raise UnknownCheckError(check)

	seed = document.get("seed", 0)
	if not _is_integer(seed):
		raise ConfigError(f"'seed' must be an integer, not {seed!r}", field="seed")

	scene = dict(_require_mapping(document.get("scene"), "scene"))

	tolerances: Dict[str, float] = {}
	for key, value in _require_mapping(document.get("tolerances"), "tolerances").items():
		if not _is_number(value) or not math.isfinite(value) or value < 0:
			raise ConfigError(f"Tolerance {key!r} must be a nonnegative number, not {value!r}", field=f"tolerances.{key}")
		tolerances[str(key)] = float(value)

	samples: Dict[str, int] = {}
	for key, value in _require_mapping(document.get("samples"), "samples").items():
		if not _is_integer(value) or value < 1:
			raise ConfigError(f"Sample budget {key!r} must be a positive integer, not {value!r}", field=f"samples.{key}")
		samples[str(key)] = value

	out = document.get("out")
	if out is not None and not isinstance(out, str):
		raise ConfigError(f"'out' must be a string, not {out!r}", field="out")

	return CheckConfig(check=check, seed=seed, scene=scene, tolerances=tolerances, samples=samples, out=out)


def load_config(filename: PathLike, known_checks: Optional[Collection[str]] = None) -> CheckConfig:
	"""
	Read and validate a configuration file.

	:param filename:
	:param known_checks: If given, the check name must be one of these.

	:raises curvquot.exceptions.ConfigError: if the file cannot be read or is invalid.
	"""

	path = PathPlus(filename)

	try:
		document = json.loads(path.read_text())
	except FileNotFoundError:
		raise ConfigError(f"No such configuration file {path.as_posix()!r}", field="config") from None
	except ValueError as e:
		raise ConfigError(f"{path.as_posix()!r} is not valid JSON: {e}", field="config") from None

	return parse_config(document, known_checks)
