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

# Finding candidate parts in a tabletop scene and loading reference tools

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .globals import *
from .geometry import PointCloud
from .utils import loadPly

DEFAULT_SEGMENTATION_CONFIG = {
    "dist_thresh": 0.005,
    "ransac_iters": 500,
    "min_inlier_fraction": 0.3,
    "cluster_tol": 0.02,
    "min_size": 50,
}


class SegmentedScene(object):
    """Result of plane subtraction followed by clustering"""
    def __init__(self, parts, plane, residualPoints):
        self.parts = parts
        self.plane = plane
        self.residualPoints = residualPoints

    def toDict(self):
        d = {"parts": [{"points": len(p), "centroid": p.centroid().tolist()} for p in self.parts],
             "residual_points": self.residualPoints}
        if self.plane is None:
            d["plane"] = None
        else:
            d["plane"] = {"normal": self.plane[0].tolist(), "offset": self.plane[1]}
        return d


def _planeInliers(points, normal, offset, distThresh):
    return np.abs(points.dot(normal) + offset) <= distThresh


def removeDominantPlane(scene, distThresh=0.005, iters=500, seed=0, minInlierFraction=0.3):
    """Remove the largest plane of the scene with RANSAC

    Candidate planes are drawn from random point triples.  The plane with the
    most points within distThresh wins, the earliest one on ties.

    :returns: ((normal, offset), PointCloud of the points off the plane)
    :raises NoPlaneFoundError: no plane holds minInlierFraction of the points
    """
    pts = scene.points
    if len(pts) < 3:
        raise ValueError("Plane fitting needs at least 3 points")
    if distThresh <= 0:
        raise ValueError("Distance threshold must be positive")
    rng = np.random.default_rng(seed)
    bestCount = -1
    best = None
    for i in range(iters):
        sample = pts[rng.choice(len(pts), 3, replace=False)]
        normal = np.cross(sample[1] - sample[0], sample[2] - sample[0])
        norm = np.linalg.norm(normal)
        if norm < 1e-12:
            continue
        normal = normal / norm
        # Normals point up, or along the first non-zero axis otherwise
        for c in normal[::-1]:
            if abs(c) > 1e-12:
                if c < 0:
                    normal = -normal
                break
        offset = -normal.dot(sample[0])
        count = int(np.count_nonzero(_planeInliers(pts, normal, offset, distThresh)))
        if count > bestCount:
            bestCount = count
            best = (normal, float(offset))
    if best is None or bestCount < minInlierFraction * len(pts):
        raise NoPlaneFoundError("No plane with at least {:.0%} of {} points".format(minInlierFraction, len(pts)))
    inliers = _planeInliers(pts, best[0], best[1], distThresh)
    log.debug("RANSAC plane {} with {} of {} inliers".format(best, bestCount, len(pts)))
    return best, PointCloud(pts[~inliers], scene.frame, allowEmpty=True)


def clusterParts(cloud, clusterTol=0.02, minSize=50):
    """Single linkage Euclidean clustering

    Points closer than clusterTol end up in the same cluster.  Clusters with
    fewer than minSize points are dropped.  The rest are ordered by
    descending size and then by centroid.
    """
    if clusterTol <= 0:
        raise ValueError("Cluster tolerance must be positive")
    pts = cloud.points
    if len(pts) == 0:
        return []
    pairs = cKDTree(pts).query_pairs(clusterTol, output_type='ndarray')
    if len(pairs):
        d = np.sqrt(np.sum((pts[pairs[:, 0]] - pts[pairs[:, 1]]) ** 2, axis=1))
        pairs = pairs[d < clusterTol]
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])),
                       shape=(len(pts), len(pts))) if len(pairs) else \
            coo_matrix((len(pts), len(pts)))
    count, labels = connected_components(graph, directed=False)
    clusters = []
    for label in range(count):
        members = pts[labels == label]
        if len(members) >= minSize:
            clusters.append(members)
    clusters.sort(key=lambda c: (-len(c), tuple(c.mean(axis=0))))
    log.debug("Found {} clusters of sizes {}".format(len(clusters), [len(c) for c in clusters]))
    return [PointCloud(c, cloud.frame) for c in clusters]


def segmentScene(scene, config=None, seed=0):
    """Plane subtraction followed by clustering

    When no dominant plane exists the whole scene is clustered.
    """
    cfg = dict(DEFAULT_SEGMENTATION_CONFIG)
    if config:
        cfg.update(config)
    try:
        plane, rest = removeDominantPlane(scene, cfg["dist_thresh"], cfg["ransac_iters"],
                                          seed, cfg["min_inlier_fraction"])
    except NoPlaneFoundError as e:
        log.warning("Skipping plane subtraction: {}".format(e))
        plane, rest = None, scene
    parts = clusterParts(rest, cfg["cluster_tol"], cfg["min_size"])
    used = sum(len(p) for p in parts)
    return SegmentedScene(parts, plane, len(rest) - used)


def loadReferenceComponents(paths, realWorldScale=1.0):
    """Load pre-segmented reference components in tool order

    Each cloud is scaled about its own centroid by realWorldScale.
    """
    if not paths:
        raise ValueError("A reference tool needs at least one component")
    if realWorldScale <= 0:
        raise ValueError("Real world scale must be positive")
    clouds = []
    for i, path in enumerate(paths):
        c = loadPly(path, frame="reference")
        if realWorldScale != 1.0:
            c = c.scaled(realWorldScale)
        log.debug("Reference component r{} from {}: {} points".format(i + 1, path, len(c)))
        clouds.append(c)
    return clouds
