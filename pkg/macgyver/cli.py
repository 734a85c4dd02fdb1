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

# Command line interface.  Every subcommand prints its result on standard
# output, as JSON with --json or as a table otherwise.

import argparse
import json
import logging
import os
import sys

import jsonschema

from .globals import *
from . import config as cfgmod
from .generator import generateScenario, presets
from .scenario import loadScenario, buildReference, buildCandidates
from .scoring import ScoreWeights, rankBuilds, countConfigurations, permuteCandidates
from .segmentation import segmentScene
from .simulation import simulateKnown, simulateUnknown
from .superquadric import fitSuperquadric
from .taxonomy import loadTaxonomy, classifyEquivalence, levelTable
from .utils import loadPly, savePly, toJson

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FIT = 3

INPUT_ERRORS = (OSError, PlyParseError, EmptyCloudError, ConfigError, ScenarioError,
                jsonschema.ValidationError, InsufficientPartsError, NotASolutionError, ValueError)
FIT_ERRORS = (InsufficientDataError, DegenerateGeometryError)


def parseWeights(s):
    try:
        values = [float(x) for x in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("weights must be four comma separated numbers")
    if len(values) != 4:
        raise argparse.ArgumentTypeError("weights must be four comma separated numbers")
    return values


def effectiveConfig(args):
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    return cfgmod.loadConfig(args.config, overrides)


def emit(args, data, text):
    if args.json:
        print(toJson(data))
    else:
        print(text)


def rankScenario(args, config, unknown):
    scenario = loadScenario(args.scenario)
    library = None if unknown else scenario.loadLibrary()
    if getattr(args, "weights", None) is not None:
        weights = args.weights
    elif scenario.weights is not None and args.config is None:
        weights = scenario.weights
    else:
        weights = config["weights"]
    weights = ScoreWeights.fromList(weights)
    reference = buildReference(scenario, config["fit"])
    candidates = buildCandidates(scenario, config["fit"], library,
                                 config["segmentation"], config["seed"])
    builds, _ = rankBuilds(reference, candidates, weights, library, config["attachment"])
    info = {"tuples": len(permuteCandidates(candidates, reference.m)),
            "configurations": countConfigurations(candidates, reference.m, library),
            "weights": weights.toList()}
    return scenario, library, builds, info


def rankTable(builds, library, info):
    lines = ["{} ordered tuples, {} configurations".format(info["tuples"], info["configurations"]),
             "{:>4}  {:<10} {:>12} {:>10} {:>10} {:>10} {:>10}".format(
                 "rank", "parts", "e_const", "e_shape", "e_scale", "e_ratio", "e_att")]
    for b in builds:
        empty = library is not None and any(library.isKnownEmpty(p) for p in b.parts)
        lines.append("{:>4}  {:<10} {:>12.5g} {:>10.4f} {:>10.4f} {:>10.4f} {:>10.4g}{}".format(
            b.rank, "+".join(b.parts), b.eConst, b.eShape, b.eScale, b.eRatio, b.eAtt,
            "  (no attachment points)" if empty else ""))
    return "\n".join(lines)


def cmdRank(args):
    config = effectiveConfig(args)
    scenario, library, builds, info = rankScenario(args, config, args.unknown_attachments)
    data = dict(info)
    data.update({"scenario": scenario.name, "seed": config["seed"],
                 "builds": [b.toDict() for b in builds]})
    emit(args, data, rankTable(builds, library, info))
    return EXIT_OK


def cmdSimulate(args):
    config = effectiveConfig(args)
    scenario, library, builds, info = rankScenario(args, config, args.unknown_attachments)
    world = scenario.loadWorld()
    radius = config["simulation"]["attach_radius"]
    if args.unknown_attachments:
        result = simulateUnknown(builds, world, radius)
    else:
        result = simulateKnown(builds, world, radius)
    data = result.toDict()
    data.update({"scenario": scenario.name, "seed": config["seed"],
                 "unknown_attachments": args.unknown_attachments})
    emit(args, data, rankTable(builds, library, info) + "\n\n" + result.table())
    return EXIT_OK


def cmdFit(args):
    config = effectiveConfig(args)
    result = fitSuperquadric(loadPly(args.cloud), config["fit"])
    data = result.toDict()
    data["seed"] = config["seed"]
    text = "{}\nresidual {:.6g} after {} evaluations{}".format(
        result.params, result.residual, result.iterations,
        "" if result.converged else " (not converged)")
    emit(args, data, text)
    return EXIT_OK


def cmdSegment(args):
    config = effectiveConfig(args)
    segmented = segmentScene(loadPly(args.scene), config["segmentation"], config["seed"])
    data = segmented.toDict()
    data["seed"] = config["seed"]
    if args.out is not None:
        if not os.path.isdir(args.out):
            os.makedirs(args.out)
        files = []
        for i, part in enumerate(segmented.parts):
            name = os.path.join(args.out, "cluster_{}.ply".format(i + 1))
            savePly(part, name)
            files.append(name)
        data["files"] = files
    lines = ["{} parts, {} points left over".format(len(segmented.parts), segmented.residualPoints)]
    for i, part in enumerate(segmented.parts):
        lines.append("  P{}: {} points at {}".format(i + 1, len(part), part.centroid().round(4).tolist()))
    emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmdGen(args):
    if args.spec in presets:
        spec = args.spec
    else:
        with open(args.spec) as f:
            try:
                spec = json.load(f)
            except ValueError as e:
                raise ScenarioError("{}: {}".format(args.spec, e))
    scenario = generateScenario(spec, args.out_dir, args.seed)
    emit(args, scenario, "Wrote scenario '{}' to {}".format(scenario["name"], args.out_dir))
    return EXIT_OK


def cmdClassify(args):
    goal, reference, candidates = loadTaxonomy(args.taxonomy)
    rows = []
    for c in candidates:
        try:
            level, variant = classifyEquivalence(reference, c, goal)
        except NotASolutionError:
            level, variant = None, None
        d = c.toDict()
        d.update({"level": level, "variant": variant})
        rows.append(d)
    emit(args, {"goal": str(goal), "reference": reference.toDict(), "candidates": rows},
         levelTable(reference, candidates, goal))
    return EXIT_OK


def buildParser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--seed", type=int, help="Random seed, overrides the configuration")
    common.add_argument("--json", action="store_true", help="Print JSON instead of a table")
    common.add_argument("--debug", action="store_true", help="Debug logging on standard error")

    parser = argparse.ArgumentParser(prog="macgyver",
                                     description="Build substitute tools out of the parts at hand")
    sub = parser.add_subparsers(dest="command")
    sub.required = True

    p = sub.add_parser("fit", parents=[common], help="Fit a superquadric to a PLY cloud")
    p.add_argument("cloud")
    p.set_defaults(func=cmdFit)

    p = sub.add_parser("segment", parents=[common], help="Remove the table and cluster the parts")
    p.add_argument("scene")
    p.add_argument("--out", help="Directory for one PLY per cluster")
    p.set_defaults(func=cmdSegment)

    for name, func, text in (("rank", cmdRank, "Rank candidate builds of a scenario"),
                             ("simulate", cmdSimulate, "Rank and replay construction attempts")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("scenario")
        p.add_argument("--weights", type=parseWeights, help="Four weights: scale,shape,ratio,att")
        p.add_argument("--unknown-attachments", action="store_true",
                       help="Ignore the attachment library")
        p.set_defaults(func=func)

    p = sub.add_parser("gen", parents=[common], help="Generate a synthetic scenario")
    p.add_argument("spec", help="Preset name ({}) or generator JSON file".format(", ".join(sorted(presets))))
    p.add_argument("out_dir")
    p.set_defaults(func=cmdGen)

    p = sub.add_parser("classify", parents=[common], help="Classify solutions into levels")
    p.add_argument("taxonomy")
    p.set_defaults(func=cmdClassify)
    return parser


def errorJson(e):
    if isinstance(e, OSError):
        path = e.filename
    elif isinstance(e, PlyParseError):
        path = e.path
    else:
        path = None
    if path is not None and not isinstance(path, str):
        path = str(path)
    if isinstance(e, jsonschema.ValidationError):
        message = "{} at '{}'".format(e.message, "/".join(str(p) for p in e.absolute_path))
    else:
        message = str(e)
    return toJson({"error": type(e).__name__, "message": message, "path": path})


def main(argv=None):
    args = buildParser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr,
                        level=logging.DEBUG if args.debug else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FIT_ERRORS as e:
        log.debug("Fit failure", exc_info=True)
        print(errorJson(e))
        return EXIT_FIT
    except INPUT_ERRORS as e:
        log.debug("Input failure", exc_info=True)
        print(errorJson(e))
        return EXIT_INPUT
