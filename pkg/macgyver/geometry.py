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

# Point clouds, rigid transforms, PCA frames and nearest pair queries.  Every
# length is in meters.

import numpy as np
from scipy.spatial import cKDTree

from .globals import *


class PointCloud(object):
    """An immutable set of 3D points expressed in a named frame

    :param points: Anything numpy can turn into an (N, 3) float array
    :param frame: Label of the frame the points are expressed in
    :param allowEmpty: Permit a cloud with no points
    """
    def __init__(self, points, frame="scene", allowEmpty=False):
        pts = np.array(points, dtype=float)
        if pts.size == 0:
            pts = pts.reshape((0, 3))
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("Points must be an (N, 3) array, got shape {}".format(pts.shape))
        if not np.all(np.isfinite(pts)):
            raise ValueError("Point cloud contains non-finite coordinates")
        if len(pts) == 0 and not allowEmpty:
            raise EmptyCloudError("Point cloud in frame '{}' is empty".format(frame))
        pts.flags.writeable = False
        self.__points = pts
        self.__frame = frame

    def getPoints(self):
        return self.__points

    points = property(getPoints)

    def getFrame(self):
        return self.__frame

    frame = property(getFrame)

    def centroid(self):
        if len(self.__points) == 0:
            raise EmptyCloudError("Empty cloud has no centroid")
        return self.__points.mean(axis=0)

    def extents(self):
        """Axis aligned size of the cloud along x, y and z"""
        return self.__points.max(axis=0) - self.__points.min(axis=0)

    def scaled(self, factor):
        """Return a copy uniformly scaled by factor about the centroid"""
        if factor <= 0:
            raise ValueError("Scale factor must be positive")
        c = self.centroid()
        return PointCloud(c + (self.__points - c) * factor, self.__frame)

    def __len__(self):
        return len(self.__points)

    def __eq__(self, other):
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.__points.shape == other.points.shape and \
               np.array_equal(self.__points, other.points)

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __str__(self):
        return "PointCloud({} points, frame={})".format(len(self), self.__frame)


class RigidTransform(object):
    """Proper rotation followed by a translation, p' = R.p + t"""
    def __init__(self, rotation=None, translation=None):
        r = np.eye(3) if rotation is None else np.array(rotation, dtype=float)
        t = np.zeros(3) if translation is None else np.array(translation, dtype=float)
        if r.shape != (3, 3) or t.shape != (3,):
            raise ValueError("Rotation must be 3x3 and translation a 3-vector")
        if not np.allclose(r.T.dot(r), np.eye(3), atol=1e-9) or \
           abs(np.linalg.det(r) - 1.0) > 1e-9:
            raise ValueError("Rotation must be orthonormal with determinant +1")
        r.flags.writeable = False
        t.flags.writeable = False
        self.rotation = r
        self.translation = t

    def apply(self, points):
        return np.asarray(points, dtype=float).dot(self.rotation.T) + self.translation

    def inverse(self):
        rt = self.rotation.T
        return RigidTransform(rt, -rt.dot(self.translation))

    def compose(self, other):
        """Transform that applies other first and then self"""
        return RigidTransform(self.rotation.dot(other.rotation),
                              self.rotation.dot(other.translation) + self.translation)

    def toDict(self):
        return {"rotation": self.rotation.tolist(), "translation": self.translation.tolist()}

    def __str__(self):
        return "RigidTransform(R={}, t={})".format(self.rotation.tolist(), self.translation.tolist())


class PcaFrame(object):
    """Centroid and principal axes of a cloud

    axes is a 3x3 matrix whose columns are the principal directions in
    order of descending eigenvalue.  The basis is always right handed.
    """
    def __init__(self, center, axes, eigenvalues):
        self.center = np.array(center, dtype=float)
        self.axes = np.array(axes, dtype=float)
        self.eigenvalues = np.array(eigenvalues, dtype=float)

    def toWorld(self):
        """Transform from PCA coordinates into the cloud's frame"""
        return RigidTransform(self.axes, self.center)


def pcaFrame(cloud):
    """Compute the principal frame of a cloud

    Each axis is signed so that it points towards the point farthest from
    the centroid, and the third axis is then flipped if needed to keep the
    frame right handed.

    :param cloud: The cloud to analyse
    :type cloud: PointCloud
    :returns: PcaFrame
    :raises DegenerateGeometryError: fewer than 4 points or collinear points
    """
    pts = cloud.points
    if len(pts) < 4:
        raise DegenerateGeometryError("PCA needs at least 4 points, got {}".format(len(pts)))
    center = pts.mean(axis=0)
    d = pts - center
    cov = d.T.dot(d) / len(pts)
    values, vectors = np.linalg.eigh(cov)
    order = np.argsort(values)[::-1]
    values = np.clip(values[order], 0.0, None)
    vectors = vectors[:, order]
    scale = max(values[0], 1e-300)
    if values[0] <= 1e-18 or values[1] / scale < 1e-12:
        raise DegenerateGeometryError("Point cloud is collinear or coincident")
    far = d[np.argmax(np.einsum('ij,ij->i', d, d))]
    for i in range(3):
        if vectors[:, i].dot(far) < 0:
            vectors[:, i] = -vectors[:, i]
    if np.linalg.det(vectors) < 0:
        vectors[:, 2] = -vectors[:, 2]
    log.debug("PCA frame eigenvalues {}".format(values))
    return PcaFrame(center, vectors, values)


def transformCloud(cloud, t, frame=None):
    """Apply a rigid transform to every point of the cloud"""
    if frame is None:
        frame = cloud.frame
    return PointCloud(t.apply(cloud.points), frame, allowEmpty=True)


def closestPairs(a, b, k):
    """Find the k closest cross cloud point pairs

    The result is exact.  Every pair among the global k smallest has its b
    point among the k nearest neighbours of its a point, so a k-nearest
    query from each point of a is enough.  Distances are recomputed
    directly and ties are broken by (index in a, index in b).

    :returns: list of (point in a, point in b, distance) in ascending order
    """
    if len(a) == 0 or len(b) == 0:
        raise EmptyCloudError("closestPairs needs two non-empty clouds")
    if k < 1:
        raise ValueError("k must be at least 1")
    pa = a.points
    pb = b.points
    k = min(k, len(pa) * len(pb))
    kk = min(k, len(pb))
    tree = cKDTree(pb)
    _, idx = tree.query(pa, k=kk)
    idx = np.asarray(idx).reshape(len(pa), kk)
    ia = np.repeat(np.arange(len(pa)), kk)
    ib = idx.ravel()
    dist = np.sqrt(np.sum((pa[ia] - pb[ib]) ** 2, axis=1))
    order = np.lexsort((ib, ia, dist))[:k]
    return [(pa[ia[i]], pb[ib[i]], float(dist[i])) for i in order]
