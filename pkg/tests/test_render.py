from __future__ import annotations

import xml.etree.ElementTree as ET

from quadstab.foliation import classify
from quadstab.polyspace import Params, Polynomial
from quadstab.render import render_svg

SVG = "{http://www.w3.org/2000/svg}"


def _count(root, tag, cls):
    return sum(1 for el in root.iter(SVG + tag) if el.get("class") == cls)


def test_render_saddle_picture():
    root = ET.fromstring(render_svg(classify(Polynomial([-1]), Params(4, 1))))
    assert root.get("version") == "1.1"
    assert _count(root, "path", "saddle") == 1
    assert _count(root, "path", "separating") == 6
    assert _count(root, "line", "tick") == 6
    assert _count(root, "circle", "zero") == 2
    assert _count(root, "circle", "boundary") == 1


def test_render_strip_picture():
    dec = classify(Polynomial([-1]), Params(3, 1))
    root = ET.fromstring(render_svg(dec, size=300))
    assert root.get("width") == "300"
    assert _count(root, "path", "generic") == 1
    assert _count(root, "path", "saddle") == 0
    assert _count(root, "line", "tick") == 4


def test_boundary_circle_fits_canvas():
    dec = classify(Polynomial([-1]), Params(4, 1))
    root = ET.fromstring(render_svg(dec, size=600))
    (circle,) = [el for el in root.iter(SVG + "circle") if el.get("class") == "boundary"]
    assert float(circle.get("r")) == 600 / 2 / 1.2
