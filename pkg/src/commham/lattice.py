# Square-lattice geometry: vertices, plaquettes, checkerboard coloring.
from __future__ import annotations

from dataclasses import dataclass

Vertex = tuple[int, int]
Plaquette = tuple[int, int]
Edge = tuple[Vertex, Vertex]

OPEN = "open"
PERIODIC = "periodic"
BLACK = "black"
WHITE = "white"


class LatticeError(ValueError):
    """Invalid lattice geometry or out-of-range coordinates."""


@dataclass(frozen=True)
class LatticeSpec:
    """An lx-by-ly grid of qubits with open or periodic boundary.

    Plaquettes are addressed by their top-left vertex and act on the four
    corners in clockwise order TL, TR, BR, BL; corner 0 (TL) is the most
    significant bit of any 16-dimensional matrix living on a plaquette.
    A plaquette at (x, y) is black when x + y is even, white otherwise.
    """

    lx: int
    ly: int
    boundary: str = OPEN

    def __post_init__(self) -> None:
        if self.boundary not in (OPEN, PERIODIC):
            raise LatticeError(f"unknown boundary {self.boundary!r}")
        if self.lx < 2 or self.ly < 2:
            raise LatticeError("lattice needs at least 2 vertices per side")
        if self.boundary == PERIODIC:
            if self.lx % 2 or self.ly % 2:
                # checkerboard coloring is inconsistent around an odd torus
                raise LatticeError("periodic lattice needs even side lengths")
            if self.lx < 4 or self.ly < 4:
                # on a width-2 torus two same-color plaquettes share two or
                # more vertices, which breaks the single-vertex overlap rule
                raise LatticeError("periodic lattice needs side lengths >= 4")

    @property
    def n_vertices(self) -> int:
        return self.lx * self.ly

    def vertices(self) -> list[Vertex]:
        return [(x, y) for y in range(self.ly) for x in range(self.lx)]


def is_black(p: Plaquette) -> bool:
    return (p[0] + p[1]) % 2 == 0


def plaquette_color(p: Plaquette) -> str:
    return BLACK if is_black(p) else WHITE


def _plaquette_range(spec: LatticeSpec) -> tuple[int, int]:
    if spec.boundary == PERIODIC:
        return spec.lx, spec.ly
    return spec.lx - 1, spec.ly - 1


def plaquettes(spec: LatticeSpec) -> list[Plaquette]:
    """All plaquettes in row-major order."""
    px, py = _plaquette_range(spec)
    return [(x, y) for y in range(py) for x in range(px)]


def corners(spec: LatticeSpec, p: Plaquette) -> list[Vertex]:
    """The four corner vertices of plaquette p, in order TL, TR, BR, BL."""
    x, y = p
    px, py = _plaquette_range(spec)
    if not (0 <= x < px and 0 <= y < py):
        raise LatticeError(f"plaquette {p} out of range for {spec.lx}x{spec.ly} {spec.boundary}")
    if spec.boundary == PERIODIC:
        x1, y1 = (x + 1) % spec.lx, (y + 1) % spec.ly
    else:
        x1, y1 = x + 1, y + 1
    return [(x, y), (x1, y), (x1, y1), (x, y1)]


def incident_plaquettes(spec: LatticeSpec, v: Vertex, color: str | None = None) -> list[Plaquette]:
    """Plaquettes that have v as a corner, optionally filtered by color.

    A vertex sits on at most 4 plaquettes (2 black + 2 white); fewer on an
    open boundary.
    """
    x, y = v
    if not (0 <= x < spec.lx and 0 <= y < spec.ly):
        raise LatticeError(f"vertex {v} out of range")
    px, py = _plaquette_range(spec)
    found = []
    for dx in (-1, 0):
        for dy in (-1, 0):
            qx, qy = x + dx, y + dy
            if spec.boundary == PERIODIC:
                qx, qy = qx % spec.lx, qy % spec.ly
            if 0 <= qx < px and 0 <= qy < py:
                q = (qx, qy)
                if color is None or plaquette_color(q) == color:
                    found.append(q)
    return sorted(set(found), key=lambda q: (q[1], q[0]))


def edges(spec: LatticeSpec) -> list[Edge]:
    """All nearest-neighbor edges, each as a sorted vertex pair."""
    out: list[Edge] = []
    for y in range(spec.ly):
        for x in range(spec.lx):
            if spec.boundary == PERIODIC or x + 1 < spec.lx:
                out.append(_edge_key((x, y), ((x + 1) % spec.lx, y)))
            if spec.boundary == PERIODIC or y + 1 < spec.ly:
                out.append(_edge_key((x, y), (x, (y + 1) % spec.ly)))
    return out


def _edge_key(a: Vertex, b: Vertex) -> Edge:
    return (a, b) if a <= b else (b, a)


def edge_owner(spec: LatticeSpec, a: Vertex, b: Vertex) -> Plaquette:
    """The unique plaquette an edge is assigned to.

    Every lattice edge borders one black and at most one white plaquette;
    the black one owns the edge when both exist, otherwise the single
    bordering plaquette does.
    """
    px, py = _plaquette_range(spec)
    (xa, ya), (xb, yb) = a, b
    candidates: list[Plaquette] = []
    if xa != xb:  # horizontal edge; plaquettes above and below
        x = min(xa, xb)
        if spec.boundary == PERIODIC and abs(xa - xb) != 1:
            x = max(xa, xb)  # wrap edge, e.g. (lx-1,y)-(0,y)
        y = ya
        for qy in (y - 1, y):
            qx = x
            if spec.boundary == PERIODIC:
                qy %= spec.ly
            if 0 <= qx < px and 0 <= qy < py:
                candidates.append((qx, qy))
    else:  # vertical edge; plaquettes left and right
        y = min(ya, yb)
        if spec.boundary == PERIODIC and abs(ya - yb) != 1:
            y = max(ya, yb)
        x = xa
        for qx in (x - 1, x):
            qy = y
            if spec.boundary == PERIODIC:
                qx %= spec.lx
            if 0 <= qx < px and 0 <= qy < py:
                candidates.append((qx, qy))
    if not candidates:
        raise LatticeError(f"edge {a}-{b} borders no plaquette")
    for q in candidates:
        if is_black(q):
            return q
    return candidates[0]
