#!/usr/bin/env python

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

import logging

log = logging.getLogger("macgyver")

# Number of scalars in a tapered superellipsoid
SQ_PARAMETER_COUNT = 13

# Bounds enforced on the superquadric parameters
SHAPE_MIN = 0.1
SHAPE_MAX = 2.0
TAPER_LIMIT = 0.95
SCALE_MIN = 1e-4

# Weights (scale, shape, ratio, attachment) used for all shipped presets
DEFAULT_WEIGHTS = (1.0, 1.0, 5.0, 5.0)

# Attachment reasoning constants
K_CLOSEST = 20
DEDUP_RADIUS = 0.005
MAX_ALIGNMENTS = 256
ATTACH_RADIUS = 0.02
ATTACHMENT_PROXIMITY = 0.02

# Attempt outcomes
ATTACH_FAILED = "attach_failed"
BROKE_IN_VALIDATION = "broke_in_validation"
TASK_FAILED = "task_failed"
SUCCESS = "success"
OUTCOMES = (ATTACH_FAILED, BROKE_IN_VALIDATION, TASK_FAILED, SUCCESS)


class MacgyverError(Exception):
    pass

class PlyParseError(MacgyverError):
    def __init__(self, message, line=None, path=None):
        if line is not None:
            message = "line {}: {}".format(line, message)
        super(PlyParseError, self).__init__(message)
        self.line = line
        self.path = path

class EmptyCloudError(MacgyverError):
    pass

class DegenerateGeometryError(MacgyverError):
    pass

class InsufficientDataError(MacgyverError):
    pass

class InsufficientPartsError(MacgyverError):
    pass

class NoPlaneFoundError(MacgyverError):
    pass

class NotASolutionError(MacgyverError):
    pass

class ConfigError(MacgyverError):
    pass

class ScenarioError(MacgyverError):
    pass
