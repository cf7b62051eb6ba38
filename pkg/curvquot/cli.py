#!/usr/bin/env python3
#
#  cli.py
"""
Command-line interface.

.. code-block:: bash

	$ python3 -m curvquot list
	$ python3 -m curvquot verify smoothing-lemma12 --config lemma12.json --out report.json
	$ python3 -m curvquot export-profile --profile geps:0.05 --grid 1024

``verify`` exits with ``0`` when the check passes, ``1`` when it fails,
and ``2`` when the configuration is invalid.
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
import argparse
import logging
import sys
from typing import Any, Mapping, Optional, Sequence

# 3rd party
from domdf_python_tools.stringlist import StringList

# this package
from curvquot.cache import ProfileCache, profile_table
from curvquot.checks import list_checks, run_check
from curvquot.config import CheckConfig, load_config
from curvquot.exceptions import ConfigError
from curvquot.hopf import FIBRATIONS
from curvquot.serializers import SerializerRegistry

__all__ = ["EXIT_CONFIG_ERROR", "EXIT_FAILED", "EXIT_PASSED", "build_parser", "main"]

_log = logging.getLogger(__name__)

#: Exit status when the check passed.
EXIT_PASSED = 0

#: Exit status when the check ran and failed.
EXIT_FAILED = 1

#: Exit status for an invalid configuration.
EXIT_CONFIG_ERROR = 2

_serializers = SerializerRegistry()


def build_parser() -> argparse.ArgumentParser:
	"""
	Returns the argument parser for ``curvquot``.
	"""

	parser = argparse.ArgumentParser(
			prog="curvquot",
			description="Numerical verification of curvature constructions on bundles and Hopf quotients.",
			)
	parser.add_argument("-v", "--verbose", action="store_true", help="Log debug messages.")
	commands = parser.add_subparsers(dest="command", metavar="COMMAND")
	commands.required = True

	verify = commands.add_parser("verify", help="Run a named check and write its report.")
	verify.add_argument("check", help="The name of the check, as shown by 'list'.")
	verify.add_argument("--config", metavar="FILE", help="A JSON configuration document.")
	verify.add_argument("--out", metavar="FILE", help="Write the report here instead of to stdout.")
	verify.add_argument("--seed", type=int, help="Override the seed in the configuration.")
	verify.add_argument("--fibration", choices=sorted(FIBRATIONS), help="The Hopf fibration for the 'hopf-' checks.")

	commands.add_parser("list", help="List the available checks.")

	export = commands.add_parser("export-profile", help="Write a warp profile table as CSV.")
	export.add_argument("--profile", required=True, help="'g0', 'geps:<eps>', 'linear' or 'sin'.")
	export.add_argument("--grid", type=int, default=1024, help="The number of sample points (default: %(default)s).")
	export.add_argument("--out", metavar="FILE", help="Write the table here instead of to stdout.")
	export.add_argument("--no-cache", action="store_true", help="Do not read or write the profile cache.")
	export.add_argument("--cache-dir", metavar="DIR", help="Use this directory for the profile cache.")

	return parser


def _write(data: Mapping[str, Any], format: str, out: Optional[str]) -> None:  # noqa: A002  # pylint: disable=redefined-builtin
	serializer = _serializers.get_serializer(format)

	if out is None:
		sys.stdout.write(serializer.dumps(data))
	else:
		_log.info("Wrote %s", serializer.dump(data, out))


def _verify(args: argparse.Namespace) -> int:
	known = [name for name, _ in list_checks()]

	if args.config is None:
		if args.check not in known:
			raise ConfigError(f"Unknown check {args.check!r}.", field="check")
		config = CheckConfig(check=args.check)
	else:
		config = load_config(args.config, known)
		if config.check != args.check:
			raise ConfigError(
					f"The configuration is for {config.check!r}, not {args.check!r}",
					field="check",
					)

	config = config.with_overrides(seed=args.seed, out=args.out, fibration=args.fibration)
	report = run_check(config)
	_write(report, "json", config.out)

	return EXIT_PASSED if report["passed"] else EXIT_FAILED


def _list() -> int:
	checks = list_checks()
	width = max(len(name) for name, _ in checks) + 2

	output = StringList()
	for name, description in checks:
		output.append(f"{name.ljust(width)}{description}")
	output.blankline(ensure_single=True)

	sys.stdout.write(str(output))
	return EXIT_PASSED


def _export_profile(args: argparse.Namespace) -> int:
	if args.grid < 2:
		raise ConfigError(f"--grid must be at least 2, not {args.grid}", field="grid")

	try:
		if args.no_cache:
			table = profile_table(args.profile, args.grid)
		else:
			table = ProfileCache(cache_dir=args.cache_dir).table(args.profile, args.grid)
	except ValueError as e:
		raise ConfigError(str(e), field="profile") from None

	_write(table, "csv", args.out)
	return EXIT_PASSED


def main(argv: Optional[Sequence[str]] = None) -> int:
	"""
	Entry point for ``curvquot`` and ``python3 -m curvquot``.

	:param argv: The command-line arguments. Defaults to :py:data:`sys.argv`.

	:returns: The exit status.
	"""

	parser = build_parser()
	args = parser.parse_args(None if argv is None else list(argv))

	logging.basicConfig(
			level=logging.DEBUG if args.verbose else logging.WARNING,
			format="%(levelname)s %(name)s: %(message)s",
			)

	try:
		if args.command == "verify":
			return _verify(args)
		elif args.command == "list":
			return _list()
		else:
			return _export_profile(args)
	except ConfigError as e:
		print(f"curvquot: error: {getattr(e, 'field', 'config')}: {e}", file=sys.stderr)
		return EXIT_CONFIG_ERROR
