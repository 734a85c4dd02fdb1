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

# Synthetic scenario generator.  Writes point clouds sampled from known
# superquadrics together with the attachment library, world model and a
# scenario file the rest of the pipeline can load.

import json
import os

import numpy as np

from .globals import *
from . import schema
from .geometry import PointCloud
from .superquadric import SuperquadricParams, surfacePoints
from .utils import savePly, toJson

presets = {}

# Height of the lowest point of every part above the table
TABLE_CLEARANCE = 0.002

# Dense samples drawn per kept point before thinning
OVERSAMPLE = 12


def _sqPoint(sq, local):
    # SQ local coordinates, before the taper, to the SQ's parent frame
    x, y, z = [float(v) for v in local]
    a = sq.scale
    x *= sq.taper[0] * z / a[2] + 1.0
    y *= sq.taper[1] * z / a[2] + 1.0
    return sq.rotation().dot([x, y, z]) + sq.center


def _table(size, n, noise, seed):
    rng = np.random.default_rng(seed)
    xy = rng.uniform(-size / 2.0, size / 2.0, (n, 2))
    z = rng.normal(0.0, noise, n) if noise > 0 else np.zeros(n)
    return np.column_stack([xy, z])


def _latitudes(e1, n, rng):
    # Uniform in angle, in height and in cap radius, in equal shares
    t = rng.uniform(-1.0, 1.0, n)
    byHeight = np.arcsin(np.sign(t) * np.abs(t) ** (1.0 / e1))
    r = rng.uniform(0.0, 1.0, n)
    byRadius = rng.choice([-1.0, 1.0], n) * np.arccos(r ** (1.0 / e1))
    byAngle = rng.uniform(-np.pi / 2, np.pi / 2, n)
    k = rng.integers(0, 3, n)
    return np.where(k == 0, byAngle, np.where(k == 1, byHeight, byRadius))


def _longitudes(e2, n, rng):
    v = rng.uniform(-1.0, 1.0, n)
    w = np.sign(v) * np.abs(v) ** (1.0 / e2)
    byY = np.arcsin(w)
    byY = np.where(rng.uniform(size=n) < 0.5, byY, np.pi - byY)
    byX = rng.choice([-1.0, 1.0], n) * np.arccos(w)
    byAngle = rng.uniform(-np.pi, np.pi, n)
    k = rng.integers(0, 3, n)
    return np.where(k == 0, byAngle, np.where(k == 1, byY, byX))


def farthestPoints(points, n):
    """Indices of n points picked greedily, each farthest from those before"""
    points = np.asarray(points, dtype=float)
    n = min(n, len(points))
    chosen = np.empty(n, dtype=int)
    chosen[0] = 0
    d = np.sum((points - points[0]) ** 2, axis=1)
    for i in range(1, n):
        chosen[i] = int(np.argmax(d))
        d = np.minimum(d, np.sum((points - points[chosen[i]]) ** 2, axis=1))
    return chosen


def evenSample(sq, n, noise, seed, oversample=OVERSAMPLE):
    """Sample n points spread evenly over the surface of sq

    A dense sample is drawn from a mix of angle, height and width uniform
    parameters and thinned by farthest point selection, so sharp edged
    shapes have no gaps along their flat faces.
    """
    rng = np.random.default_rng(seed)
    m = n * oversample
    dense = surfacePoints(sq, _latitudes(sq.shape[0], m, rng), _longitudes(sq.shape[1], m, rng))
    pts = dense[farthestPoints(dense, n)]
    if noise > 0:
        pts = pts + rng.normal(0.0, noise, pts.shape)
    return PointCloud(pts, "sq")


def generateScenario(spec, outDir, seed=None):
    """Write a scenario described by a generator spec into outDir

    :param spec: generator document, see the "generator" schema, or the
        name of a shipped preset
    :param outDir: directory to write into, created when missing
    :param seed: overrides the spec's seed
    :returns: the scenario dictionary that was written to scenario.json
    """
    if isinstance(spec, str):
        try:
            spec = presets[spec]
        except KeyError:
            raise ScenarioError("Unknown preset '{}'".format(spec))
    schema.validate(spec, "generator")
    if seed is None:
        seed = spec.get("seed", 0)
    n = spec.get("points", 1000)
    noise = spec.get("noise", 0.0)
    if not os.path.isdir(outDir):
        os.makedirs(outDir)
    seeds = np.random.SeedSequence(seed).spawn(len(spec["reference"]) + len(spec["parts"]) + 1)
    header = ["generated by macgyver preset {} seed {}".format(spec["name"], seed)]
    centroids = {}

    reference = []
    for j, comp in enumerate(spec["reference"]):
        sq = SuperquadricParams.fromDict(comp["sq"])
        cloud = evenSample(sq, n, noise, seeds[j])
        name = "ref_{}.ply".format(comp["name"])
        savePly(cloud, os.path.join(outDir, name), header)
        centroids[name] = cloud.centroid().tolist()
        reference.append(name)

    parts = []
    library = {}
    sceneClouds = []
    for i, part in enumerate(spec["parts"]):
        sq = SuperquadricParams.fromDict(part["sq"])
        cloud = evenSample(sq, n, noise, seeds[len(reference) + i])
        lift = np.array([0.0, 0.0, TABLE_CLEARANCE - cloud.points[:, 2].min()])
        cloud = PointCloud(cloud.points + lift, "part")
        name = "{}.ply".format(part["id"])
        savePly(cloud, os.path.join(outDir, name), header)
        centroids[name] = cloud.centroid().tolist()
        parts.append({"id": part["id"], "file": name})
        points = []
        for att in part["attachments"]:
            d = {"location": (_sqPoint(sq, att["location"]) + lift).tolist(),
                 "kind": att.get("kind", "magnet")}
            if att.get("polarity") is not None:
                d["polarity"] = att["polarity"]
            points.append(d)
        library[part["id"]] = points
        sceneClouds.append(cloud.points)
        log.debug("Part {}: {} points, {} attachment points".format(part["id"], len(cloud), len(points)))

    table = spec.get("table")
    if table is not None and table.get("points", 0) > 0:
        sceneClouds.insert(0, _table(table.get("size", 1.0), table["points"], noise, seeds[-1]))
    savePly(PointCloud(np.vstack(sceneClouds)), os.path.join(outDir, "scene.ply"), header)

    with open(os.path.join(outDir, "library.json"), "w") as f:
        f.write(toJson(library) + "\n")

    world = spec.get("world", {})
    scenario = {
        "name": spec["name"],
        "reference": reference,
        "real_world_scale": spec.get("real_world_scale", 1.0),
        "scene": "scene.ply",
        "parts": parts,
        "library": "library.json",
        "weights": spec.get("weights", list(DEFAULT_WEIGHTS)),
        "seed": seed,
        "centroids": centroids,
        "world": {"true_attachments": "library.json",
                  "breakage_rules": world.get("breakage_rules", [])},
    }
    if "task" in world:
        scenario["world"]["task"] = world["task"]
    with open(os.path.join(outDir, "scenario.json"), "w") as f:
        f.write(toJson(scenario) + "\n")
    log.info("Wrote scenario {} to {}".format(spec["name"], outDir))
    return scenario


def load():
    d = os.path.dirname(__file__)
    with open(os.path.join(d, "presets.json")) as f:
        presets.update(json.load(f))


load()
