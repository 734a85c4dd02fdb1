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

import os
import shutil
import tempfile
import unittest
import numpy as np

import macgyver
from macgyver.geometry import PointCloud
from macgyver.utils import loadPly, savePly, toJson, jsonFloat


class TestPly(unittest.TestCase):
    def setUp(self):
        self.dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.dir)

    def write(self, text, name="cloud.ply"):
        path = os.path.join(self.dir, name)
        with open(path, "w") as f:
            f.write(text)
        return path

    def test_SaveLoad(self):
        pts = np.array([[0.1, 0.2, 0.3], [1.0 / 3.0, -2.5e-7, 12345.678], [0, 0, 0]])
        path = os.path.join(self.dir, "a.ply")
        savePly(PointCloud(pts), path, ["test cloud"])
        c = loadPly(path)
        np.testing.assert_array_equal(c.points, pts)
        self.assertEqual(c.frame, path)
        self.assertEqual(loadPly(path, frame="part").frame, "part")

    def test_ExtraPropertiesAndFaces(self):
        path = self.write("ply\nformat ascii 1.0\ncomment hi\n"
                          "element vertex 3\nproperty float x\nproperty float y\n"
                          "property float z\nproperty uchar red\n"
                          "element face 1\nproperty list uchar int vertex_indices\nend_header\n"
                          "0 0 0 255\n1 0 0 255\n0 1 0 255\n3 0 1 2\n")
        c = loadPly(path)
        self.assertEqual(len(c), 3)
        np.testing.assert_array_equal(c.points[2], [0, 1, 0])

    def test_ElementBeforeVertex(self):
        path = self.write("ply\nformat ascii 1.0\nelement camera 2\nproperty float fx\n"
                          "element vertex 2\nproperty float x\nproperty float y\n"
                          "property float z\nend_header\n500\n501\n1 2 3\n4 5 6\n")
        c = loadPly(path)
        np.testing.assert_array_equal(c.points, [[1, 2, 3], [4, 5, 6]])

    def test_BadValueAfterOtherElement(self):
        path = self.write("ply\nformat ascii 1.0\nelement camera 2\nproperty float fx\n"
                          "element vertex 2\nproperty float x\nproperty float y\n"
                          "property float z\nend_header\n500\n501\n1 x 3\n4 5 6\n")
        with self.assertRaises(macgyver.PlyParseError) as cm:
            loadPly(path)
        self.assertEqual(cm.exception.line, 12)
        self.assertEqual(cm.exception.path, path)

    def test_HeaderText(self):
        path = os.path.join(self.dir, "h.ply")
        savePly(PointCloud([[0, 0, 0], [1, 0, 0], [0, 1, 0]]), path, ["made here"])
        with open(path) as f:
            text = f.read()
        self.assertTrue(text.startswith("ply\nformat ascii 1.0\n"))
        self.assertIn("comment made here\n", text)
        self.assertIn("element vertex 3\n", text)

    def test_Binary(self):
        path = self.write("ply\nformat binary_little_endian 1.0\nelement vertex 1\n"
                          "property float x\nproperty float y\nproperty float z\nend_header\n")
        with self.assertRaises(macgyver.PlyParseError) as cm:
            loadPly(path)
        self.assertEqual(cm.exception.line, 2)

    def test_BadHeaderLine(self):
        path = self.write("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
                          "property banana y\nend_header\n0\n")
        with self.assertRaises(macgyver.PlyParseError) as cm:
            loadPly(path)
        self.assertEqual(cm.exception.line, 5)
        self.assertIn("line 5", str(cm.exception))

    def test_Truncated(self):
        path = self.write("ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\n"
                          "property float y\nproperty float z\nend_header\n0 0 0\n1 1 1\n")
        with self.assertRaises(macgyver.PlyParseError):
            loadPly(path)

    def test_NotANumber(self):
        path = self.write("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
                          "property float y\nproperty float z\nend_header\n0 zero 0\n")
        with self.assertRaises(macgyver.PlyParseError) as cm:
            loadPly(path)
        self.assertEqual(cm.exception.line, 8)

    def test_NoVertices(self):
        path = self.write("ply\nformat ascii 1.0\nelement vertex 0\nproperty float x\n"
                          "property float y\nproperty float z\nend_header\n")
        with self.assertRaises(macgyver.EmptyCloudError):
            loadPly(path)

    def test_MissingMagic(self):
        path = self.write("format ascii 1.0\n")
        with self.assertRaises(macgyver.PlyParseError):
            loadPly(path)

    def test_MissingFile(self):
        with self.assertRaises(OSError):
            loadPly(os.path.join(self.dir, "nothing.ply"))

    def test_SaveEmpty(self):
        with self.assertRaises(macgyver.EmptyCloudError):
            savePly(PointCloud([], allowEmpty=True), os.path.join(self.dir, "e.ply"))


class TestJson(unittest.TestCase):
    def test_Numpy(self):
        s = toJson({"a": np.arange(3), "b": np.float64(1.5), "c": np.int32(4)})
        self.assertIn("1.5", s)
        self.assertIn("4", s)

    def test_Infinity(self):
        self.assertEqual(jsonFloat(float("inf")), "inf")
        self.assertEqual(jsonFloat(2), 2.0)


if __name__ == '__main__':
    unittest.main()
