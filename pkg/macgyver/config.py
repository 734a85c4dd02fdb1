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

# Pipeline configuration.  A user document is merged over DEFAULT_CONFIG
# and validated against the published "config" schema.

import copy
import json

import jsonschema

from .globals import *
from . import schema
from .superquadric import DEFAULT_FIT_CONFIG
from .segmentation import DEFAULT_SEGMENTATION_CONFIG
from .attachment import DEFAULT_ATTACHMENT_CONFIG

DEFAULT_CONFIG = {
    "weights": list(DEFAULT_WEIGHTS),
    "fit": dict(DEFAULT_FIT_CONFIG),
    "segmentation": dict(DEFAULT_SEGMENTATION_CONFIG),
    "attachment": dict(DEFAULT_ATTACHMENT_CONFIG),
    "simulation": {"attach_radius": ATTACH_RADIUS},
    "seed": 0,
}


def mergeConfig(base, override):
    """Return a copy of base with override applied section by section"""
    result = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(result.get(key), dict):
            result[key] = mergeConfig(result[key], value)
        else:
            result[key] = copy.deepcopy(value)
    return result


def validateConfig(config):
    try:
        schema.validate(config, "config")
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path)
        raise ConfigError("Invalid configuration at '{}': {}".format(path, e.message))


def loadConfig(path=None, overrides=None):
    """Read a partial configuration file and apply overrides

    :param path: JSON file or None for the defaults
    :param overrides: dict applied after the file, e.g. from the command line
    :returns: the complete, validated configuration
    """
    user = {}
    if path is not None:
        with open(path) as f:
            try:
                user = json.load(f)
            except ValueError as e:
                raise ConfigError("{}: {}".format(path, e))
        if not isinstance(user, dict):
            raise ConfigError("{}: configuration must be a JSON object".format(path))
        validateConfig(user)
    config = mergeConfig(DEFAULT_CONFIG, user)
    config = mergeConfig(config, overrides)
    validateConfig(config)
    log.debug("Configuration: {}".format(config))
    return config
