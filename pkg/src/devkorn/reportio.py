"""CSV tables and minimal self-contained SVG plots.

Output is deterministic: floats are rendered with a fixed %.12g format, so a
given config and seed reproduces byte-identical files.  The SVG writer emits
a complete log-log scatter/line plot (axes, ticks, labels) through
``xml.etree``, so files are well-formed XML with no external renderer.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from pathlib import Path


def write_csv(path, header: str, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def fmt(x) -> str:
    if isinstance(x, float):
        if x != x:
            return "nan"
        if math.isinf(x):
            return "inf"
        return format(x, ".12g")
    return str(x)


# -- log-log SVG plot ------------------------------------------------------------

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 80, 30, 40, 70


def _log_ticks(lo: float, hi: float):
    lo_e = math.floor(math.log10(lo))
    hi_e = math.ceil(math.log10(hi))
    return [10.0 ** e for e in range(lo_e, hi_e + 1)]


def write_loglog_svg(path, series, title: str, xlabel: str, ylabel: str) -> None:
    """series: list of (label, [(x, y), ...]) with positive coordinates."""
    pts = [(x, y) for _, data in series for x, y in data if x > 0 and y > 0]
    if not pts:
        raise ValueError("nothing to plot: no positive data points")
    xs, ys = zip(*pts)
    x0, x1 = min(xs) / 1.3, max(xs) * 1.3
    y0, y1 = min(ys) / 1.3, max(ys) * 1.3
    if x0 == x1:
        x0, x1 = x0 / 2, x1 * 2
    if y0 == y1:
        y0, y1 = y0 / 2, y1 * 2

    def px(x):
        return _ML + (math.log10(x) - math.log10(x0)) / (math.log10(x1) - math.log10(x0)) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (math.log10(y) - math.log10(y0)) / (math.log10(y1) - math.log10(y0)) * (_H - _MT - _MB)

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                     width=str(_W), height=str(_H),
                     viewBox=f"0 0 {_W} {_H}")
    ET.SubElement(svg, "rect", x="0", y="0", width=str(_W), height=str(_H),
                  fill="white")
    ET.SubElement(svg, "text", x=str(_W / 2), y=str(_MT - 14),
                  attrib={"text-anchor": "middle", "font-size": "16"}).text = title
    # axes
    ET.SubElement(svg, "line", x1=str(_ML), y1=str(_H - _MB), x2=str(_W - _MR),
                  y2=str(_H - _MB), stroke="black")
    ET.SubElement(svg, "line", x1=str(_ML), y1=str(_MT), x2=str(_ML),
                  y2=str(_H - _MB), stroke="black")
    for tx in _log_ticks(x0, x1):
        if not (x0 <= tx <= x1):
            continue
        ET.SubElement(svg, "line", x1=fmt(px(tx)), y1=str(_H - _MB),
                      x2=fmt(px(tx)), y2=str(_H - _MB + 6), stroke="black")
        ET.SubElement(svg, "text", x=fmt(px(tx)), y=str(_H - _MB + 22),
                      attrib={"text-anchor": "middle", "font-size": "12"}
                      ).text = f"1e{int(math.log10(tx))}"
    for ty in _log_ticks(y0, y1):
        if not (y0 <= ty <= y1):
            continue
        ET.SubElement(svg, "line", x1=str(_ML - 6), y1=fmt(py(ty)),
                      x2=str(_ML), y2=fmt(py(ty)), stroke="black")
        ET.SubElement(svg, "text", x=str(_ML - 10), y=fmt(py(ty) + 4),
                      attrib={"text-anchor": "end", "font-size": "12"}
                      ).text = f"1e{int(math.log10(ty))}"
    ET.SubElement(svg, "text", x=str((_ML + _W - _MR) / 2), y=str(_H - 18),
                  attrib={"text-anchor": "middle", "font-size": "14"}).text = xlabel
    ET.SubElement(svg, "text", x="22", y=str((_MT + _H - _MB) / 2),
                  attrib={"text-anchor": "middle", "font-size": "14",
                          "transform": f"rotate(-90 22 {(_MT + _H - _MB) / 2})"}
                  ).text = ylabel

    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    for idx, (label, data) in enumerate(series):
        color = palette[idx % len(palette)]
        data = sorted(d for d in data if d[0] > 0 and d[1] > 0)
        if len(data) > 1:
            path_d = "M " + " L ".join(f"{fmt(px(x))} {fmt(py(y))}" for x, y in data)
            ET.SubElement(svg, "path", d=path_d, fill="none", stroke=color,
                          attrib={"stroke-width": "1.5"})
        for x, y in data:
            ET.SubElement(svg, "circle", cx=fmt(px(x)), cy=fmt(py(y)), r="4",
                          fill=color)
        ET.SubElement(svg, "text", x=str(_W - _MR - 8),
                      y=str(_MT + 18 + 16 * idx),
                      attrib={"text-anchor": "end", "font-size": "12",
                              "fill": color}).text = label

    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    ET.ElementTree(svg).write(out, encoding="unicode", xml_declaration=True)
