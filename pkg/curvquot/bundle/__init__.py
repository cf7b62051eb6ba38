#!/usr/bin/env python3
#
#  __init__.py
"""
Model vector bundle metrics with rotationally symmetric fibres,
their curvature at the zero section and at regular points,
and the choice of the constant ``L``.

.. automodulesumm:: curvquot.bundle
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

# this package
from curvquot.bundle._model import (
		ExtractedConnection,
		ModelBundle,
		TotalVector,
		basic_lift,
		bracket_operator,
		bracket_vertical,
		connection_derivatives,
		extract_Q,
		fiber_tensor,
		lift_bracket_fd,
		total_metric,
		total_tensor,
		vertical_projection
		)
from curvquot.bundle.forms import v_form, w_form, w_lower_bound
from curvquot.bundle.formulas import (
		Decomposition,
		RadialDerivativeReport,
		curvature_at_N,
		curvature_regular,
		decompose,
		radial_derivative_check,
		radial_fiber_chart,
		zero_section_oracle
		)
from curvquot.bundle.geodesics import fiber_geodesic_drift, zero_section_geodesic_drift
from curvquot.bundle.presets import base_preset, bundle_from_config, connection_preset, model_bundle
from curvquot.bundle.selection import (
		FamilyScanReport,
		base_curvature_minimum,
		bundle_sampler,
		estimate_M1,
		jet_agreement,
		positivity_scan_family,
		select_L
		)

__all__ = [
		"Decomposition",
		"ExtractedConnection",
		"FamilyScanReport",
		"ModelBundle",
		"RadialDerivativeReport",
		"TotalVector",
		"base_curvature_minimum",
		"base_preset",
		"basic_lift",
		"bracket_operator",
		"bracket_vertical",
		"bundle_from_config",
		"bundle_sampler",
		"connection_derivatives",
		"connection_preset",
		"curvature_at_N",
		"curvature_regular",
		"decompose",
		"estimate_M1",
		"extract_Q",
		"fiber_geodesic_drift",
		"fiber_tensor",
		"jet_agreement",
		"lift_bracket_fd",
		"model_bundle",
		"positivity_scan_family",
		"radial_derivative_check",
		"radial_fiber_chart",
		"select_L",
		"total_metric",
		"total_tensor",
		"v_form",
		"vertical_projection",
		"w_form",
		"w_lower_bound",
		"zero_section_geodesic_drift",
		"zero_section_oracle",
		]
