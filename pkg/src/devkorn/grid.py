"""Uniform lattices on unions of axis-aligned boxes.

Nodes are the lattice points of spacing ``h`` contained in the closed union.
A node carries an outward face normal +-e_k whenever its lattice neighbour in
that direction falls outside the domain; a node is classified as boundary iff
it carries at least one face normal.  (Nodes sitting on a reentrant edge with
all six neighbours present therefore count as interior, which is exactly what
the face-wise boundary conditions and stencils need.)

Box corners must be integer multiples of ``h`` and the union must be
connected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

AXES = (0, 1, 2)
FACE_TOKENS = {"x-": (0, -1), "x+": (0, +1),
               "y-": (1, -1), "y+": (1, +1),
               "z-": (2, -1), "z+": (2, +1)}


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class Box:
    lo: tuple  # Fractions
    hi: tuple

    def contains_lattice(self, p, h: Fraction) -> bool:
        return all(self.lo[k] <= p[k] * h <= self.hi[k] for k in AXES)


def parse_box(lo, hi) -> Box:
    lo = tuple(Fraction(v) for v in lo)
    hi = tuple(Fraction(v) for v in hi)
    if any(hi[k] <= lo[k] for k in AXES):
        raise GridError(f"box must have positive extent per axis: {lo} .. {hi}")
    return Box(lo, hi)


@dataclass(frozen=True)
class Grid:
    boxes: tuple
    h: Fraction
    lattice: tuple                      # sorted lattice triples (ints)
    index: dict = field(repr=False)     # lattice triple -> node index
    normals: tuple = field(repr=False)  # per node: tuple of (axis, sign)
    gamma: tuple = field(repr=False)    # per node: normals under the BC mask
    gamma_spec: str = "none"

    @property
    def n_nodes(self) -> int:
        return len(self.lattice)

    @property
    def h_float(self) -> float:
        return float(self.h)

    def node_coords(self, n: int) -> tuple:
        p = self.lattice[n]
        return tuple(p[k] * self.h for k in AXES)

    def coords_array(self) -> np.ndarray:
        return np.array([[float(c) for c in self.node_coords(n)]
                         for n in range(self.n_nodes)])

    def is_boundary(self, n: int) -> bool:
        return bool(self.normals[n])

    @property
    def n_boundary(self) -> int:
        return sum(1 for nr in self.normals if nr)

    def bounding_box(self) -> Box:
        lo = tuple(min(b.lo[k] for b in self.boxes) for k in AXES)
        hi = tuple(max(b.hi[k] for b in self.boxes) for k in AXES)
        return Box(lo, hi)

    def describe(self) -> str:
        return ";".join(
            "x".join(f"[{b.lo[k]},{b.hi[k]}]" for k in AXES) for b in self.boxes)


def _in_domain(boxes, p, h: Fraction) -> bool:
    return any(b.contains_lattice(p, h) for b in boxes)


def build_grid(boxes, h, gamma_spec: str = "none") -> Grid:
    """Enumerate and classify the lattice of spacing h over a union of boxes.

    gamma_spec selects the boundary faces carrying the tangential boundary
    condition: "none", "all", or a comma list of face tokens such as
    "z-,x+" (every boundary face with that outward normal direction).
    """
    h = Fraction(h)
    if h <= 0:
        raise GridError("spacing h must be positive")
    boxes = tuple(parse_box(b.lo, b.hi) if isinstance(b, Box) else parse_box(*b)
                  for b in boxes)
    if not boxes:
        raise GridError("at least one box is required")
    for b in boxes:
        for k in AXES:
            for v in (b.lo[k], b.hi[k]):
                if (v / h).denominator != 1:
                    raise GridError(
                        f"box corner {v} is not an integer multiple of h = {h}")

    nodes = set()
    for b in boxes:
        ranges = [range(int(b.lo[k] / h), int(b.hi[k] / h) + 1) for k in AXES]
        for i in ranges[0]:
            for j in ranges[1]:
                for k in ranges[2]:
                    nodes.add((i, j, k))
    lattice = tuple(sorted(nodes))
    index = {p: n for n, p in enumerate(lattice)}

    _check_connected(lattice, index)

    normals = []
    for p in lattice:
        face = []
        for ax in AXES:
            for s in (-1, +1):
                q = list(p)
                q[ax] += s
                if tuple(q) not in index:
                    face.append((ax, s))
        normals.append(tuple(face))

    selected = _parse_gamma(gamma_spec)
    gamma = tuple(tuple(f for f in face if f in selected) for face in normals)
    return Grid(boxes=boxes, h=h, lattice=lattice, index=index,
                normals=tuple(normals), gamma=gamma, gamma_spec=gamma_spec)


def _parse_gamma(spec: str):
    spec = (spec or "none").strip()
    if spec == "none":
        return frozenset()
    if spec == "all":
        return frozenset(FACE_TOKENS.values())
    faces = set()
    for tok in spec.split(","):
        tok = tok.strip()
        if tok not in FACE_TOKENS:
            raise GridError(f"unknown boundary face token {tok!r} "
                            f"(expected one of {sorted(FACE_TOKENS)})")
        faces.add(FACE_TOKENS[tok])
    return frozenset(faces)


def _check_connected(lattice, index) -> None:
    if not lattice:
        raise GridError("empty grid")
    seen = {lattice[0]}
    stack = [lattice[0]]
    while stack:
        p = stack.pop()
        for ax in AXES:
            for s in (-1, +1):
                q = list(p)
                q[ax] += s
                q = tuple(q)
                if q in index and q not in seen:
                    seen.add(q)
                    stack.append(q)
    if len(seen) != len(lattice):
        raise GridError("the union of boxes is not connected on the lattice")


# -- flat field layout -----------------------------------------------------------
#
# A matrix field is a vector of 9 N reals, node-major with row-major entries:
# flat[9 n + 3 i + j] = P_ij at node n.  Vector fields use flat[3 n + i].


def mat_dof(n: int, i: int, j: int) -> int:
    return 9 * n + 3 * i + j


def vec_dof(n: int, i: int) -> int:
    return 3 * n + i


def field_to_nodes(flat: np.ndarray) -> np.ndarray:
    """View a flat matrix field as an (N, 3, 3) array."""
    return flat.reshape(-1, 3, 3)


def nodes_to_field(values: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(values).reshape(-1)


def _eval_batch(polys, pt):
    """Evaluate several polynomials at one point, sharing power tables.

    Works for rational and float coordinates alike; with Fractions the result
    is exact."""
    max_e = [0, 0, 0]
    for p in polys:
        for e in p.terms:
            for k in AXES:
                if e[k] > max_e[k]:
                    max_e[k] = e[k]
    pows = []
    for k in AXES:
        row = [pt[k] * 0 + 1]
        for _ in range(max_e[k]):
            row.append(row[-1] * pt[k])
        pows.append(row)
    vals = []
    for p in polys:
        total = None
        for e, c in p.terms.items():
            v = c * pows[0][e[0]] * pows[1][e[1]] * pows[2][e[2]]
            total = v if total is None else total + v
        vals.append(0 if total is None else total)
    return vals


def sample_matrix_field(f, grid: Grid, exact: bool = True) -> np.ndarray:
    """Evaluate a polynomial matrix field at the nodes, then round.

    With ``exact=True`` entries are evaluated in rational arithmetic at the
    rational node coordinates, so the only rounding is the final
    Fraction -> float conversion.  ``exact=False`` evaluates in floats, which
    is enough for Monte-Carlo test fields.
    """
    entries = [f[i, j] for i in range(3) for j in range(3)]
    out = np.empty(9 * grid.n_nodes)
    for n in range(grid.n_nodes):
        pt = grid.node_coords(n) if exact else \
            tuple(float(c) for c in grid.node_coords(n))
        out[9 * n: 9 * n + 9] = [float(v) for v in _eval_batch(entries, pt)]
    return out


def sample_vector_field(u, grid: Grid, exact: bool = True) -> np.ndarray:
    comps = [u[i] for i in range(3)]
    out = np.empty(3 * grid.n_nodes)
    for n in range(grid.n_nodes):
        pt = grid.node_coords(n) if exact else \
            tuple(float(c) for c in grid.node_coords(n))
        out[3 * n: 3 * n + 3] = [float(v) for v in _eval_batch(comps, pt)]
    return out


def dump_field_csv(grid: Grid, flat: np.ndarray, path) -> None:
    """Write a matrix field as CSV with header node_index,x,y,z,P11..P33."""
    names = ",".join(f"P{i+1}{j+1}" for i in range(3) for j in range(3))
    with open(path, "w") as fh:
        fh.write(f"node_index,x,y,z,{names}\n")
        for n in range(grid.n_nodes):
            x, y, z = (format(float(c), ".17g") for c in grid.node_coords(n))
            vals = ",".join(format(flat[mat_dof(n, i, j)], ".17g")
                            for i in range(3) for j in range(3))
            fh.write(f"{n},{x},{y},{z},{vals}\n")
