#!/usr/bin/env python3
#
#  __init__.py
"""
Numerical verification of positively curved metrics on vector bundles and Hopf quotients.
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
from curvquot.curvature import ChartMetric, CurvatureReport, min_sectional_scan, sectional
from curvquot.numerics import FDPolicy
from curvquot.smoothing import SmoothFunction1D, build_g_eps

__author__: str = "Dominic Davis-Foster"
__copyright__: str = "2024 Dominic Davis-Foster"
__license__: str = "GNU Lesser General Public License v3 or later (LGPLv3+)"
__version__: str = "0.1.0"
__email__: str = "dominic@davis-foster.co.uk"

__all__ = [
		"ChartMetric",
		"CurvatureReport",
		"FDPolicy",
		"SmoothFunction1D",
		"build_g_eps",
		"min_sectional_scan",
		"sectional",
		]
