#  MacGyver Tool Construction - A geometric reasoning engine that builds
#  substitute tools out of the parts at hand
#  Copyright (c) 2019 Phil Birkelbach
#
#  This program is free software; you can redistribute it and/or modify
#  it under the terms of the GNU General Public License as published by
#  the Free Software Foundation; either version 2 of the License, or
#  (at your option) any later version.
#
#  This program is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#  GNU General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with this program; if not, write to the Free Software
#  Foundation, Inc., 59 Temple Place - Suite 330, Boston, MA 02111-1307, USA.

# Shipped presets generated once per test run and ranked on demand

import atexit
import os
import shutil
import tempfile

import macgyver

_dir = None
_runs = {}


def scenarioPath(name):
    global _dir
    if _dir is None:
        _dir = tempfile.mkdtemp()
        atexit.register(shutil.rmtree, _dir, True)
    out = os.path.join(_dir, name)
    if not os.path.isdir(out):
        macgyver.generateScenario(name, out)
    return os.path.join(out, "scenario.json")


def presetRun(name, unknown=False):
    """(ranked builds, AttemptLog) for a shipped preset"""
    key = (name, unknown)
    if key not in _runs:
        _runs[key] = macgyver.runPipeline(scenarioPath(name), unknownAttachments=unknown)
    return _runs[key]


def trace(result):
    return [["+".join(a.build.parts), a.outcome] for a in result.attempts]
