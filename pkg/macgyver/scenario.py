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

# Loading of scenario files and assembly of the reference tool and the
# candidate parts they describe.

import json
import os

from .globals import *
from . import schema
from .attachment import AttachmentLibrary
from .scoring import ReferenceTool, CandidatePart
from .segmentation import loadReferenceComponents, segmentScene
from .simulation import WorldModel
from .superquadric import fitSuperquadric
from .utils import loadPly


class Scenario(object):
    """A scenario file with every path resolved against its directory"""
    def __init__(self, d, baseDir):
        self.data = d
        self.baseDir = baseDir
        self.name = d.get("name", os.path.basename(baseDir))
        self.reference = [self.path(p) for p in d["reference"]]
        self.realWorldScale = d.get("real_world_scale", 1.0)
        self.scene = self.path(d["scene"]) if d.get("scene") else None
        self.parts = [(p["id"], self.path(p["file"])) for p in d.get("parts", [])]
        self.libraryPath = self.path(d["library"]) if d.get("library") else None
        self.weights = d.get("weights")
        self.seed = d.get("seed")
        self.world = d.get("world")

    def path(self, p):
        return os.path.join(self.baseDir, p)

    def loadLibrary(self):
        if self.libraryPath is None:
            return None
        return _readLibrary(self.libraryPath)

    def loadWorld(self):
        if self.world is None:
            raise ScenarioError("Scenario '{}' has no world model".format(self.name))
        ta = self.world["true_attachments"]
        if isinstance(ta, str):
            library = _readLibrary(self.path(ta))
        else:
            library = AttachmentLibrary.fromDict(ta)
        return WorldModel.fromDict(self.world, library)


def _readLibrary(path):
    with open(path) as f:
        try:
            d = json.load(f)
        except ValueError as e:
            raise ScenarioError("{}: {}".format(path, e))
    return AttachmentLibrary.fromDict(d)


def loadScenario(path):
    """Read and validate a scenario JSON file"""
    with open(path) as f:
        try:
            d = json.load(f)
        except ValueError as e:
            raise ScenarioError("{}: {}".format(path, e))
    schema.validate(d, "scenario")
    if not d.get("parts") and not d.get("scene"):
        raise ScenarioError("{}: scenario lists neither parts nor a scene".format(path))
    return Scenario(d, os.path.dirname(os.path.abspath(path)))


def buildReference(scenario, fitConfig=None):
    clouds = loadReferenceComponents(scenario.reference, scenario.realWorldScale)
    return ReferenceTool.fromClouds(clouds, fitConfig)


def buildCandidates(scenario, fitConfig=None, library=None, segmentationConfig=None, seed=0):
    """Fit a superquadric to every candidate part of the scenario

    Pre-segmented part files are used when the scenario lists them,
    otherwise the scene is segmented and the clusters are named P1, P2, ...
    """
    if scenario.parts:
        clouds = [(partId, loadPly(path, frame="part")) for partId, path in scenario.parts]
    else:
        segmented = segmentScene(loadPly(scenario.scene), segmentationConfig, seed)
        clouds = [("P{}".format(i + 1), c) for i, c in enumerate(segmented.parts)]
    candidates = []
    for partId, cloud in clouds:
        result = fitSuperquadric(cloud, fitConfig)
        attachments = library.points(partId) if library is not None else None
        candidates.append(CandidatePart(partId, cloud, result.params, attachments))
    return candidates
