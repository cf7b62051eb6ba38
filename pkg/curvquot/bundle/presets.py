#!/usr/bin/env python3
#
#  presets.py
"""
Named base metrics and connections for model bundles.
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
from typing import Any, Callable, Dict, List, Mapping

# 3rd party
import numpy as np

# this package
from curvquot.bundle._model import Connection, ModelBundle
from curvquot.curvature import ChartMetric, euclidean_chart, round_sphere_chart
from curvquot.exceptions import ConfigError
from curvquot.numerics import DEFAULT_POLICY, FDPolicy
from curvquot.smoothing import profile_from_name

__all__ = [
		"BASE_PRESETS",
		"CONNECTION_PRESETS",
		"CURVED_BASES",
		"base_preset",
		"bundle_from_config",
		"connection_preset",
		"model_bundle",
		"rotation_generator",
		]

#: Base points of every preset chart lie in the ball of this radius.
BASE_CHART_RADIUS = 0.75


def _within(radius: float) -> Callable[[np.ndarray], bool]:
	return lambda p: float(np.linalg.norm(p)) <= radius


def _sphere(dimension: int) -> Callable[[FDPolicy], ChartMetric]:

	def factory(policy: FDPolicy) -> ChartMetric:
		sphere = round_sphere_chart(1.0, dimension, policy)
		return ChartMetric(dimension, sphere.tensor, _within(BASE_CHART_RADIUS), policy, f"sphere{dimension}")

	return factory


def _torus(policy: FDPolicy) -> ChartMetric:
	flat = euclidean_chart(2, policy)
	return ChartMetric(2, flat.tensor, _within(BASE_CHART_RADIUS), policy, "torus")


#: Base metrics by name: the unit spheres :math:`S^2` and :math:`S^4` in stereographic charts
#: (sectional curvature ``1``), and a chart of the flat torus.
BASE_PRESETS: Dict[str, Callable[[FDPolicy], ChartMetric]] = {
		"sphere2": _sphere(2),
		"sphere4": _sphere(4),
		"torus": _torus,
		}

#: Base presets with positive sectional curvature; the torus is flat and only serves negative tests.
CURVED_BASES = frozenset({"sphere2", "sphere4"})


def base_preset(name: str, policy: FDPolicy = DEFAULT_POLICY) -> ChartMetric:
	"""
	Returns the base metric called ``name``.

	:param name: One of ``'sphere2'``, ``'sphere4'`` or ``'torus'``.
	:param policy:
	"""

	try:
		return BASE_PRESETS[name](policy)
	except KeyError:
		raise ConfigError(f"Unknown base {name!r}", field="base") from None


def rotation_generator(rank: int, a: int, b: int) -> np.ndarray:
	"""
	Returns the antisymmetric matrix :math:`e_b e_a^T - e_a e_b^T`, the rotation from :math:`e_a` towards :math:`e_b`.

	:param rank:
	:param a:
	:param b:
	"""

	matrix = np.zeros((rank, rank))
	matrix[b, a] = 1.0
	matrix[a, b] = -1.0
	return matrix


def _generators(rank: int) -> List[np.ndarray]:
	return [rotation_generator(rank, a, b) for a in range(rank) for b in range(a + 1, rank)]


def _zero(dimension: int, rank: int, scale: float) -> Connection:
	zeros = np.zeros((dimension, rank, rank))
	return lambda p: zeros


def _constant(dimension: int, rank: int, scale: float) -> Connection:
	# consecutive coordinate rotations; for rank 2 these are all multiples of one generator
	matrices = np.stack([rotation_generator(rank, i % rank, (i + 1) % rank) for i in range(dimension)])
	return lambda p: matrices


def _varying(dimension: int, rank: int, scale: float) -> Connection:
	generators = _generators(rank)
	m = len(generators)

	def connection(p: np.ndarray) -> np.ndarray:
		return scale * np.stack([
				p[(i + 1) % dimension] * generators[0] + (0.5 + 0.25 * p[i]) * generators[i % m]
				for i in range(dimension)
				])

	return connection


#: Connection presets by name.
CONNECTION_PRESETS: Dict[str, Callable[[int, int, float], Connection]] = {
		"zero": _zero,
		"constant": _constant,
		"varying": _varying,
		}


def connection_preset(name: str, dimension: int, rank: int, scale: float = 0.3) -> Connection:
	"""
	Returns the connection called ``name``.

	* ``'zero'``: :math:`Q \\equiv 0`.
	* ``'constant'``: :math:`Q_i` the rotation in the plane of fibre coordinates ``i`` and ``i + 1`` (mod ``k``).
	  Consecutive matrices do not commute when :math:`k \\ge 3`.
	* ``'varying'``: :math:`Q_i(p)` a combination of fixed rotation generators with coefficients
	  depending linearly on ``p``, scaled by ``scale``.

	:param name:
	:param dimension: The base dimension ``n``.
	:param rank: The fibre rank ``k``.
	:param scale: The size of the varying connection.
	"""

	if rank < 2:
		raise ConfigError(f"The fibre rank must be at least 2, not {rank!r}", field="k")

	try:
		factory = CONNECTION_PRESETS[name]
	except KeyError:
		raise ConfigError(f"Unknown connection {name!r}", field="Q") from None

	return factory(dimension, rank, scale)


def model_bundle(
		base: str = "sphere2",
		rank: int = 2,
		connection: str = "zero",
		warp: str = "g0",
		L: float = 0.0,
		policy: FDPolicy = DEFAULT_POLICY,
		) -> ModelBundle:
	"""
	Assemble a :class:`~.ModelBundle` from preset names.

	:param base:
	:param rank:
	:param connection:
	:param warp: A profile name, as accepted by :func:`curvquot.smoothing.profile_from_name`.
	:param L:
	:param policy:
	"""

	base_metric = base_preset(base, policy)

	try:
		profile = profile_from_name(warp)
	except ValueError as e:
		raise ConfigError(str(e), field="warp") from None

	if not L >= 0:
		raise ConfigError(f"L must be nonnegative, not {L!r}", field="L")

	return ModelBundle(
			base=base_metric,
			rank=int(rank),
			connection=connection_preset(connection, base_metric.dimension, int(rank)),
			profile=profile,
			L=float(L),
			base_radius=0.5,
			policy=policy,
			name=f"{base}×R{rank}[Q={connection}, G={profile.name}, L={L}]",
			)


def bundle_from_config(config: Mapping[str, Any], policy: FDPolicy = DEFAULT_POLICY) -> ModelBundle:
	"""
	Assemble a :class:`~.ModelBundle` from a mapping with the keys
	``base``, ``n``, ``k``, ``Q``, ``warp`` and ``L``.

	``n`` is optional, and when given must match the dimension of the base.

	:param config:
	:param policy:

	:raises curvquot.exceptions.ConfigError: naming the offending field.
	"""

	if not isinstance(config, Mapping):
		raise ConfigError("The bundle description must be a mapping", field="bundle")

	base = str(config.get("base", "sphere2"))

	try:
		rank = int(config.get("k", 2))
	except (TypeError, ValueError):
		raise ConfigError(f"k must be an integer, not {config.get('k')!r}", field="k") from None

	try:
		L = float(config.get("L", 0.0))
	except (TypeError, ValueError):
		raise ConfigError(f"L must be a number, not {config.get('L')!r}", field="L") from None

	bundle = model_bundle(
			base=base,
			rank=rank,
			connection=str(config.get("Q", "zero")),
			warp=str(config.get("warp", "g0")),
			L=L,
			policy=policy,
			)

	if "n" in config and config["n"] != bundle.base_dimension:
		raise ConfigError(
				f"n = {config['n']!r} does not match the dimension {bundle.base_dimension} of {base!r}",
				field="n",
				)

	return bundle
