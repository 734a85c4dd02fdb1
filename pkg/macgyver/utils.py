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

# PLY reading and writing on top of plyfile, plus JSON helpers

import json
import numpy as np
from plyfile import PlyData, PlyElement, PlyHeaderParseError, PlyElementParseError

from .globals import *
from .geometry import PointCloud


def _headerLayout(path):
    # Line of end_header and the (name, count) of each element before data
    elements = []
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, 1):
            words = raw.decode("ascii", "replace").split()
            if not words:
                continue
            if words[0] == "format" and len(words) > 1 and words[1] != "ascii":
                raise PlyParseError("only ASCII PLY is supported, got '{}'".format(words[1]), lineno, path)
            elif words[0] == "element" and len(words) == 3 and words[2].isdigit():
                elements.append((words[1], int(words[2])))
            elif words[0] == "end_header":
                return lineno, elements
    return None, elements


def loadPly(path, frame=None):
    """Read the vertices of an ASCII PLY file

    Faces and any vertex properties other than x, y and z are ignored.

    :param path: File to read
    :param frame: Frame label for the cloud, defaults to the file path
    :returns: PointCloud
    :raises PlyParseError: malformed or binary file, the message names the line
    :raises EmptyCloudError: the file has no vertices
    """
    if frame is None:
        frame = str(path)
    log.debug("Reading PLY file {}".format(path))
    headerEnd, elements = _headerLayout(path)
    try:
        data = PlyData.read(path)
    except PlyHeaderParseError as e:
        raise PlyParseError(getattr(e, "message", str(e)), e.line, path)
    except PlyElementParseError as e:
        line = None
        if headerEnd is not None and e.row is not None:
            line = headerEnd + e.row + 1
            for name, count in elements:
                if e.element is not None and name == e.element.name:
                    break
                line += count
        raise PlyParseError(getattr(e, "message", str(e)), line, path)
    try:
        vertex = data["vertex"]
    except KeyError:
        raise EmptyCloudError("PLY file {} has no vertex element".format(path))
    names = vertex.data.dtype.names or ()
    if not all(axis in names for axis in ("x", "y", "z")):
        raise PlyParseError("vertex element needs x, y and z properties", headerEnd, path)
    if vertex.count == 0:
        raise EmptyCloudError("PLY file {} has no vertices".format(path))
    points = np.column_stack([vertex["x"], vertex["y"], vertex["z"]]).astype(float)
    if not np.all(np.isfinite(points)):
        raise PlyParseError("vertex coordinates must be finite", headerEnd, path)
    return PointCloud(points, frame)


def savePly(cloud, path, comments=None):
    """Write the cloud as ASCII PLY with full double precision"""
    if len(cloud) == 0:
        raise EmptyCloudError("Refusing to write an empty cloud to {}".format(path))
    vertex = np.empty(len(cloud), dtype=[("x", "f8"), ("y", "f8"), ("z", "f8")])
    vertex["x"] = cloud.points[:, 0]
    vertex["y"] = cloud.points[:, 1]
    vertex["z"] = cloud.points[:, 2]
    ply = PlyData([PlyElement.describe(vertex, "vertex")], text=True,
                  comments=[str(c) for c in (comments or [])])
    ply.write(str(path))
    log.debug("Wrote {} points to {}".format(len(cloud), path))


class NumpyEncoder(json.JSONEncoder):
    """JSON encoder that understands numpy scalars/arrays and infinity"""
    def default(self, obj):
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        return super(NumpyEncoder, self).default(obj)


def jsonFloat(x):
    # JSON has no infinity, ranked output writes it as the string "inf"
    x = float(x)
    if np.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def toJson(obj, indent=2):
    return json.dumps(obj, indent=indent, cls=NumpyEncoder, sort_keys=False)
