"""Internal polygon quadrature kernels.

Everything here works on plain (n, 2) float arrays of CCW vertices.  The two
workhorse integrals are

* ``polygon_log_integral``   -- int_P log|x - y| dy, exact per-edge closed form
* ``polygon_riesz_integral`` -- int_P |x - y|^-s dy for 0 < s < 2, radial edge
  decomposition with a sinh substitution (uniformly accurate for evaluation
  points inside, outside, or near the boundary)

plus a batched adaptive triangle quadrature used for the double integrals.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "polygon_area",
    "fan_triangles",
    "ear_clip",
    "polygon_log_integral",
    "polygon_riesz_integral",
    "triangle_rule_nodes",
    "adaptive_triangle_integrate",
    "gauss_legendre_01",
]


def polygon_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_edges(vertices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return vertices, np.roll(vertices, -1, axis=0)


def fan_triangles(vertices: np.ndarray, apex: np.ndarray | None = None) -> np.ndarray:
    """Triangulate a convex polygon as a fan from its centroid (or apex)."""
    if apex is None:
        apex = vertices.mean(axis=0)
    a, b = polygon_edges(vertices)
    tris = np.empty((len(vertices), 3, 2))
    tris[:, 0] = apex
    tris[:, 1] = a
    tris[:, 2] = b
    return tris


def ear_clip(vertices: np.ndarray) -> np.ndarray:
    """Triangulate a simple (possibly nonconvex) CCW polygon by ear clipping."""
    verts = list(range(len(vertices)))
    pts = np.asarray(vertices, dtype=float)
    tris = []

    def cross(o, a, b):
        return (pts[a, 0] - pts[o, 0]) * (pts[b, 1] - pts[o, 1]) - (
            pts[a, 1] - pts[o, 1]
        ) * (pts[b, 0] - pts[o, 0])

    def inside(p, a, b, c):
        d1 = (pts[b, 0] - pts[a, 0]) * (p[1] - pts[a, 1]) - (pts[b, 1] - pts[a, 1]) * (p[0] - pts[a, 0])
        d2 = (pts[c, 0] - pts[b, 0]) * (p[1] - pts[b, 1]) - (pts[c, 1] - pts[b, 1]) * (p[0] - pts[b, 0])
        d3 = (pts[a, 0] - pts[c, 0]) * (p[1] - pts[c, 1]) - (pts[a, 1] - pts[c, 1]) * (p[0] - pts[c, 0])
        return d1 >= -1e-13 and d2 >= -1e-13 and d3 >= -1e-13

    guard = 0
    while len(verts) > 3 and guard < 10000:
        guard += 1
        n = len(verts)
        clipped = False
        for i in range(n):
            prev, cur, nxt = verts[(i - 1) % n], verts[i], verts[(i + 1) % n]
            if cross(prev, cur, nxt) <= 1e-14:
                continue
            ok = True
            for other in verts:
                if other in (prev, cur, nxt):
                    continue
                if inside(pts[other], prev, cur, nxt):
                    ok = False
                    break
            if ok:
                tris.append((pts[prev], pts[cur], pts[nxt]))
                verts.pop(i)
                clipped = True
                break
        if not clipped:
            break
    if len(verts) == 3:
        tris.append((pts[verts[0]], pts[verts[1]], pts[verts[2]]))
    return np.array(tris) if tris else np.empty((0, 3, 2))


def polygon_log_integral(vertices: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Exact int_P log|x - y| dy for a batch of evaluation points x.

    Per-edge closed form from the divergence identity
    div_y [(y-x)(2 log|y-x| - 1)/4] = log|y-x|; valid for x inside, outside,
    or on the boundary of the polygon.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    a, b = polygon_edges(np.asarray(vertices, dtype=float))
    d = b - a  # (E,2)
    ell = np.linalg.norm(d, axis=1)  # (E,)
    # per point / edge geometry
    rel = a[None, :, :] - pts[:, None, :]  # a - x, (M,E,2)
    # outward normal (CCW polygon): rot(d) = (dy, -dx), unit
    nrm = np.stack([d[:, 1], -d[:, 0]], axis=1) / ell[:, None]
    h_signed = np.einsum("mej,ej->me", rel, nrm)  # (M,E)
    t_star = -np.einsum("mej,ej->me", rel, d) / (ell**2)[None, :]
    w0 = -t_star * ell[None, :]
    w1 = (1.0 - t_star) * ell[None, :]
    habs = np.abs(h_signed)

    def antideriv(w):
        # int log sqrt(h^2+w^2) dw = (w log(h^2+w^2) - 2w)/2 + h atan(w/h)
        r2 = habs**2 + w**2
        wlog = np.where(r2 > 0, w * np.log(np.maximum(r2, 1e-300)), 0.0)
        at = np.where(habs > 1e-300, habs * np.arctan(np.divide(w, np.maximum(habs, 1e-300))), 0.0)
        return 0.5 * wlog - w + at

    log_line = antideriv(w1) - antideriv(w0)  # (M,E)
    contrib = 0.25 * h_signed * (2.0 * log_line - ell[None, :])
    out = contrib.sum(axis=1)
    return out if points.ndim > 1 else out[0]


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre_01(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, 1], cached."""
    if n not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(n)
        _GL_CACHE[n] = (0.5 * (x + 1.0), 0.5 * w)
    return _GL_CACHE[n]


def polygon_riesz_integral(
    vertices: np.ndarray, points: np.ndarray, s: float, n_nodes: int = 48
) -> np.ndarray:
    """int_P |x - y|^-s dy for 0 <= s < 2, batched over evaluation points.

    Radial decomposition: the polygon integral is a signed sum over edges of
    int_0^1 cross(a - x, b - a) |p(t) - x|^-s / (2 - s) dt, and each edge
    integral is computed on the sinh-substituted axis where the integrand is
    smooth regardless of how close x sits to the edge.
    """
    if s == 0.0:
        area = abs(polygon_area(np.asarray(vertices, dtype=float)))
        out = np.full(len(np.atleast_2d(points)), area)
        return out if np.asarray(points).ndim > 1 else float(out[0])
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    a, b = polygon_edges(np.asarray(vertices, dtype=float))
    d = b - a
    ell = np.linalg.norm(d, axis=1)
    rel = a[None, :, :] - pts[:, None, :]
    c_e = rel[:, :, 0] * d[None, :, 1] - rel[:, :, 1] * d[None, :, 0]  # cross(a-x, d), (M,E)
    h = np.abs(c_e) / ell[None, :]
    t_star = -np.einsum("mej,ej->me", rel, d) / (ell**2)[None, :]
    w0 = -t_star * ell[None, :]
    w1 = (1.0 - t_star) * ell[None, :]

    hsafe = np.maximum(h, 1e-300)
    psi0 = np.arcsinh(w0 / hsafe)
    psi1 = np.arcsinh(w1 / hsafe)
    if s == 1.0:
        # cosh^(1-s) = 1: the edge integral is the sinh-axis length itself
        j_edge = psi1 - psi0
    else:
        nodes, weights = gauss_legendre_01(n_nodes)
        psi = psi0[..., None] + (psi1 - psi0)[..., None] * nodes  # (M,E,K)
        integrand = np.cosh(psi) ** (1.0 - s)
        j_edge = (psi1 - psi0) * np.einsum("mek,k->me", integrand, weights)
    # edge contribution: c_e/(2-s) * (1/ell) * h^(1-s) * J
    contrib = c_e / (2.0 - s) / ell[None, :] * hsafe ** (1.0 - s) * j_edge
    contrib = np.where(h > 1e-14, contrib, 0.0)
    out = contrib.sum(axis=1)
    return out if np.asarray(points).ndim > 1 else float(out[0])


# degree-5 seven-point symmetric triangle rule (barycentric, weights sum to 1)
_T1 = (6.0 - math.sqrt(15.0)) / 21.0
_T2 = (6.0 + math.sqrt(15.0)) / 21.0
_RULE_BARY = np.array(
    [
        [1 / 3, 1 / 3, 1 / 3],
        [1 - 2 * _T1, _T1, _T1],
        [_T1, 1 - 2 * _T1, _T1],
        [_T1, _T1, 1 - 2 * _T1],
        [1 - 2 * _T2, _T2, _T2],
        [_T2, 1 - 2 * _T2, _T2],
        [_T2, _T2, 1 - 2 * _T2],
    ]
)
_RULE_W = np.array(
    [
        9.0 / 40.0,
        (155.0 - math.sqrt(15.0)) / 1200.0,
        (155.0 - math.sqrt(15.0)) / 1200.0,
        (155.0 - math.sqrt(15.0)) / 1200.0,
        (155.0 + math.sqrt(15.0)) / 1200.0,
        (155.0 + math.sqrt(15.0)) / 1200.0,
        (155.0 + math.sqrt(15.0)) / 1200.0,
    ]
)


def triangle_rule_nodes(tris: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (T,7,2) and weights (T,7) of the degree-5 rule on triangles (T,3,2)."""
    nodes = np.einsum("rb,tbj->trj", _RULE_BARY, tris)
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    area = 0.5 * np.abs(
        (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    )
    return nodes, area[:, None] * _RULE_W[None, :]


def _split4(tris: np.ndarray) -> np.ndarray:
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    ab, bc, ca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
    return np.concatenate(
        [
            np.stack([a, ab, ca], axis=1),
            np.stack([ab, b, bc], axis=1),
            np.stack([ca, bc, c], axis=1),
            np.stack([ab, bc, ca], axis=1),
        ]
    )


def adaptive_triangle_integrate(
    f_batch, tris: np.ndarray, tol: float, max_panels: int = 200_000
) -> tuple[float, float]:
    """Integrate f over a union of triangles, refining where the degree-5
    estimate disagrees with its four-way split.

    ``f_batch`` maps an (M, 2) array of points to (M,) values.  Returns
    (value, error_estimate).
    """

    def rule_values(t):
        nodes, w = triangle_rule_nodes(t)
        vals = f_batch(nodes.reshape(-1, 2)).reshape(nodes.shape[0], 7)
        return np.einsum("tr,tr->t", vals, w)

    def tri_areas(t):
        a, b, c = t[:, 0], t[:, 1], t[:, 2]
        return 0.5 * np.abs(
            (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
        )

    current = np.asarray(tris, dtype=float)
    total_area = float(np.sum(tri_areas(current)))
    coarse = rule_values(current)
    total = 0.0
    err_accepted = 0.0
    n_panels = len(current)
    while True:
        children = _split4(current)
        fine_parts = rule_values(children)
        k = len(current)
        fine = (
            fine_parts[0:k] + fine_parts[k : 2 * k] + fine_parts[2 * k : 3 * k] + fine_parts[3 * k :]
        )
        disc = np.abs(fine - coarse)
        # area-proportional error budget per panel
        budget = tol * tri_areas(current) / max(total_area, 1e-300)
        done = disc <= np.maximum(budget, tol * 1e-5)
        total += float(np.sum(fine[done]))
        err_accepted += float(np.sum(disc[done]))
        if np.all(done):
            break
        remaining = ~done
        if n_panels + 4 * int(np.sum(remaining)) > max_panels:
            total += float(np.sum(fine[remaining]))
            err_accepted += float(np.sum(disc[remaining]))
            break
        idx = np.nonzero(remaining)[0]
        current = children[np.concatenate([idx, idx + k, idx + 2 * k, idx + 3 * k])]
        coarse = fine_parts[np.concatenate([idx, idx + k, idx + 2 * k, idx + 3 * k])]
        n_panels += 4 * len(idx)
    return total, err_accepted
