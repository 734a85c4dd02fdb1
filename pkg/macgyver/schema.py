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

# This file loads the JSON schema descriptions used to validate
# configuration, scenario, library, generator and taxonomy documents

import json
import os

import jsonschema

from .globals import *

schemas = {}


def validate(obj, name):
    """Validate obj against the named schema

    Raises jsonschema.ValidationError on a mismatch."""
    try:
        s = schemas[name]
    except KeyError:
        raise ValueError("Unknown schema '{}'".format(name))
    jsonschema.validate(obj, s)


def load():
    d = os.path.dirname(__file__)
    with open(os.path.join(d, "schemas.json")) as f:
        data = json.load(f)
    defs = data.get("definitions", {})
    for name, s in data["schemas"].items():
        s = dict(s)
        s["definitions"] = defs
        schemas[name] = s


load()
