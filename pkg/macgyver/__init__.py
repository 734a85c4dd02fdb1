
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

from .globals import *
from .geometry import *
from .superquadric import *
from .segmentation import *
from .attachment import *
from .scoring import *
from .simulation import *
from .taxonomy import *
from .config import DEFAULT_CONFIG, loadConfig, mergeConfig
from .scenario import loadScenario, buildReference, buildCandidates
from .generator import generateScenario, presets
from .utils import loadPly, savePly


def runPipeline(scenarioPath, config=None, unknownAttachments=False):
    """Rank the builds of a scenario file and replay construction attempts

    :param scenarioPath: Path to a scenario JSON file
    :param config: Complete configuration, DEFAULT_CONFIG when None
    :param unknownAttachments: Ignore the attachment library when ranking
        and explore candidate locations while simulating
    :returns: (ranked builds, AttemptLog)
    """
    if config is None:
        config = DEFAULT_CONFIG
    scenario = loadScenario(scenarioPath)
    library = None if unknownAttachments else scenario.loadLibrary()
    weights = ScoreWeights.fromList(scenario.weights or config["weights"])
    reference = buildReference(scenario, config["fit"])
    candidates = buildCandidates(scenario, config["fit"], library,
                                 config["segmentation"], config["seed"])
    builds, _ = rankBuilds(reference, candidates, weights, library, config["attachment"])
    world = scenario.loadWorld()
    radius = config["simulation"]["attach_radius"]
    if unknownAttachments:
        return builds, simulateUnknown(builds, world, radius)
    return builds, simulateKnown(builds, world, radius)
