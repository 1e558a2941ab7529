"""Static SVG pictures of the Poincaré disk: leaves, boxes, boundary maps and fields."""

import math

import numpy as np

from .errors import ConfigError
from .hyp_core import TWO_PI, arc_offset
from .laminations import BandLamination, DiscreteLamination, SumLamination

SIZE = 400
R = 180.0


def _xy(z):
    """Disk point to SVG coordinates (y grows downwards)."""
    return SIZE / 2 + R * z.real, SIZE / 2 - R * z.imag


def _f(v):
    return f"{v:.4f}"


def geodesic_circle(alpha, beta):
    """(centre, radius) of the circle carrying the leaf, or None for a diameter."""
    off = arc_offset(beta, alpha)
    half = min(off, TWO_PI - off) / 2.0
    if abs(half - math.pi / 2) < 1e-9:
        return None
    mid = alpha + off / 2.0 if off <= math.pi else beta + (TWO_PI - off) / 2.0
    return complex(math.cos(mid), math.sin(mid)) / math.cos(half), math.tan(half)


def arc_points(alpha, beta, k=65):
    """Points along the leaf, for sanity checks."""
    P, Q = complex(math.cos(alpha), math.sin(alpha)), complex(math.cos(beta), math.sin(beta))
    circ = geodesic_circle(alpha, beta)
    if circ is None:
        return P + (Q - P) * np.linspace(0.0, 1.0, k)
    c, r = circ
    a1, a2 = np.angle(P - c), np.angle(Q - c)
    d = (a2 - a1 + math.pi) % TWO_PI - math.pi
    return c + r * np.exp(1j * (a1 + d * np.linspace(0.0, 1.0, k)))


def geodesic_path(alpha, beta):
    P, Q = complex(math.cos(alpha), math.sin(alpha)), complex(math.cos(beta), math.sin(beta))
    x1, y1 = _xy(P)
    x2, y2 = _xy(Q)
    circ = geodesic_circle(alpha, beta)
    if circ is None:
        return f"M {_f(x1)} {_f(y1)} L {_f(x2)} {_f(y2)}"
    c, r = circ
    cx, cy = _xy(c)
    cross = (x1 - cx) * (y2 - cy) - (y1 - cy) * (x2 - cx)
    sweep = 1 if cross > 0 else 0
    return f"M {_f(x1)} {_f(y1)} A {_f(R * r)} {_f(R * r)} 0 0 {sweep} {_f(x2)} {_f(y2)}"


def _boundary_arc(s, e, radius=1.0):
    x1, y1 = _xy(radius * complex(math.cos(s), math.sin(s)))
    x2, y2 = _xy(radius * complex(math.cos(e), math.sin(e)))
    large = 1 if arc_offset(e, s) > math.pi else 0
    # counterclockwise in the plane is sweep 0 once y is flipped
    return f"M {_f(x1)} {_f(y1)} A {_f(R * radius)} {_f(R * radius)} 0 {large} 0 {_f(x2)} {_f(y2)}"


def _leaves(lam, k_band=41):
    if isinstance(lam, DiscreteLamination):
        return list(zip(lam.alpha, lam.beta, lam.w))
    if isinstance(lam, BandLamination):
        out = []
        for t0, t1 in lam.support:
            ts = np.linspace(t0, t1, k_band)
            w = float(lam.total_mass()) / len(ts)
            out += [(float(lam.alpha_f(t)), float(lam.beta_f(t)), w) for t in ts]
        return out
    if isinstance(lam, SumLamination):
        return [x for p in lam.parts for x in _leaves(p, k_band)]
    raise ConfigError(f"cannot draw {type(lam).__name__}")


class Figure:
    def __init__(self, title=None):
        self.items = []
        self.title = title

    def lamination(self, lam, colour="#1f4e79"):
        leaves = _leaves(lam)
        if not leaves:
            return self
        wmax = max(w for _, _, w in leaves)
        for a, b, w in leaves:
            width = 0.5 + 2.5 * w / wmax
            self.items.append(f'<path d="{geodesic_path(a, b)}" fill="none" stroke="{colour}" '
                              f'stroke-width="{_f(width)}"/>')
        return self

    def box(self, Q, colour="#c0392b"):
        for s, e in ((Q.a, Q.b), (Q.c, Q.d)):
            self.items.append(f'<path d="{_boundary_arc(s, e, 1.03)}" fill="none" stroke="{colour}" '
                              f'stroke-width="4"/>')
        return self

    def boundary_map(self, h, k=48, colour="#27ae60"):
        """Ticks from k equally spaced points to their images under h."""
        t = np.arange(k) * TWO_PI / k
        img = np.asarray(h(t), dtype=float)
        for s, e in zip(t, img):
            x1, y1 = _xy(complex(math.cos(s), math.sin(s)) * 1.06)
            x2, y2 = _xy(complex(math.cos(e), math.sin(e)))
            self.items.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                              f'stroke="{colour}" stroke-width="0.8"/>')
        return self

    def field(self, V, k=96, scale=0.1, colour="#8e44ad"):
        """Tangent arrows of the angular field V, drawn as short chords."""
        t = np.arange(k) * TWO_PI / k
        v = np.asarray(V.angular(t), dtype=float)
        top = max(float(np.max(np.abs(v))), 1e-300)
        for s, dv in zip(t, v):
            z = complex(math.cos(s), math.sin(s))
            x1, y1 = _xy(z)
            x2, y2 = _xy(z + 1j * z * scale * dv / top)
            self.items.append(f'<line x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
                              f'stroke="{colour}" stroke-width="1"/>')
        return self

    def svg(self):
        c = SIZE / 2
        head = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
                f'viewBox="0 0 {SIZE} {SIZE}">',
                f'<circle cx="{_f(c)}" cy="{_f(c)}" r="{_f(R)}" fill="none" stroke="black" stroke-width="1"/>']
        if self.title:
            head.append(f'<title>{self.title}</title>')
        return "\n".join(head + self.items + ["</svg>"]) + "\n"


def plot_lamination(lam, boxes=(), title=None):
    fig = Figure(title).lamination(lam)
    for Q in boxes:
        fig.box(Q)
    return fig.svg()
