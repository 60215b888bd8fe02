# Copyright 2026 The cqedswitch Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Cavity-QED set-reset switch simulator.

Thin re-export of the compiled ``_core`` module plus a convenience
``simulate`` wrapper that mirrors the command-line ``simulate`` subcommand.
"""

from ._core import *  # noqa: F401,F403
from ._core import (
    CSV_COLUMNS,
    Error,
    IntegrationError,
    NoSwitchError,
    run_scenario,
    scenario_from_settings,
)

__version__ = "0.1.0"


def simulate(**settings):
    """Run a scenario described by configuration keys.

    Keyword arguments use the configuration-file keys (``preset``, ``model``,
    ``scenario``, ``init``, ``t_final``, ``dt``, ``beta``, ...); values are
    converted with ``str``. Returns ``(table, result)`` where ``table`` maps
    each present CSV column to a NumPy array.
    """
    scenario = scenario_from_settings({k: _text(v) for k, v in settings.items()})
    result = run_scenario(scenario)
    return result.table.columns(), result


def _text(value):
    if isinstance(value, complex):
        return f"({value.real!r},{value.imag!r})"
    return str(value)


__all__ = [name for name in dir() if not name.startswith("_")]
