"""2-D polygon and segment helpers shared by ingestion, scenes, and collision.

Rings are lists of (x, y) tuples without a repeated closing vertex.  Outer
rings are counter-clockwise, holes clockwise (normalized at parse time).
"""

from __future__ import annotations

import math


class BadPolygon(ValueError):
    pass


def signed_area(ring) -> float:
    """Shoelace area: positive for counter-clockwise rings."""
    a = 0.0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        a += x0 * y1 - x1 * y0
    return 0.5 * a


def ring_centroid(ring) -> tuple[float, float]:
    """Area centroid of a simple ring (falls back to vertex mean if degenerate)."""
    a = signed_area(ring)
    if abs(a) < 1e-12:
        n = len(ring)
        return (sum(p[0] for p in ring) / n, sum(p[1] for p in ring) / n)
    cx = cy = 0.0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        w = x0 * y1 - x1 * y0
        cx += (x0 + x1) * w
        cy += (y0 + y1) * w
    return (cx / (6.0 * a), cy / (6.0 * a))


def polygon_area(rings) -> float:
    """Area of outer ring minus holes (uses ring orientations as normalized)."""
    return sum(signed_area(r) for r in rings)


def _seg_intersects(p1, p2, p3, p4, *, touch_ok: bool) -> bool:
    d1 = _cross(p3, p4, p1)
    d2 = _cross(p3, p4, p2)
    d3 = _cross(p1, p2, p3)
    d4 = _cross(p1, p2, p4)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if touch_ok:
        return False
    if d1 == 0 and _on_segment(p3, p4, p1):
        return True
    if d2 == 0 and _on_segment(p3, p4, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, p3):
        return True
    if d4 == 0 and _on_segment(p1, p2, p4):
        return True
    return False


def _cross(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, p) -> bool:
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def ring_is_simple(ring) -> bool:
    """No two non-adjacent edges touch; adjacent edges may only share endpoints."""
    n = len(ring)
    if n < 3:
        return False
    edges = [(ring[i], ring[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a1, a2 = edges[i]
        if a1 == a2:
            return False
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if _seg_intersects(a1, a2, *edges[j], touch_ok=adjacent):
                return False
    return True


def point_in_ring(x, y, ring) -> bool:
    """Ray-cast parity test (boundary points count as inside)."""
    inside = False
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        if (y0 > y) != (y1 > y):
            t = (y - y0) / (y1 - y0)
            xi = x0 + t * (x1 - x0)
            if x < xi:
                inside = not inside
            elif x == xi:
                return True
    return inside


def point_in_polygon(x, y, rings) -> bool:
    """Inside the outer ring and outside every hole."""
    if not rings or not point_in_ring(x, y, rings[0]):
        return False
    crossings = sum(point_in_ring(x, y, hole) for hole in rings[1:])
    return crossings % 2 == 0


def seg_point_dist(a, b, p) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / L2
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def seg_seg_dist(a1, a2, b1, b2) -> float:
    """Minimum distance between two 2-D segments (0 if they cross)."""
    if _seg_intersects(a1, a2, b1, b2, touch_ok=False):
        return 0.0
    return min(
        seg_point_dist(a1, a2, b1),
        seg_point_dist(a1, a2, b2),
        seg_point_dist(b1, b2, a1),
        seg_point_dist(b1, b2, a2),
    )


def seg_polygon_dist(a, b, rings) -> float:
    """Distance from segment ab to a polygon (0 if either endpoint is inside)."""
    if point_in_polygon(*a, rings) or point_in_polygon(*b, rings):
        return 0.0
    best = math.inf
    for ring in rings:
        n = len(ring)
        for i in range(n):
            best = min(best, seg_seg_dist(a, b, ring[i], ring[(i + 1) % n]))
            if best == 0.0:
                return 0.0
    return best


def ray_ring_exit(origin, direction, ring) -> float | None:
    """Largest t >= 0 with origin + t*direction on the ring boundary."""
    ox, oy = origin
    dx, dy = direction
    best = None
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        ex, ey = x1 - x0, y1 - y0
        den = dx * ey - dy * ex
        if den == 0.0:
            continue
        # solve origin + t*dir == ring[i] + s*edge
        t = ((x0 - ox) * ey - (y0 - oy) * ex) / den
        s = ((x0 - ox) * dy - (y0 - oy) * dx) / den
        if t >= 0.0 and 0.0 <= s <= 1.0:
            if best is None or t > best:
                best = t
    return best


def triangulate(rings) -> tuple[list[tuple[float, float]], list[tuple[int, int, int]]]:
    """Ear-clip a polygon with holes into triangles.

    Returns (vertices, triangles) where triangles index into vertices; hole
    rings are bridged into the outer ring first.  Rings must be normalized
    (outer CCW, holes CW) and simple.
    """
    outer = list(rings[0])
    holes = [list(h) for h in rings[1:]]
    if len(outer) < 3:
        raise BadPolygon("outer ring needs at least 3 vertices")
    verts = list(outer)
    chain = list(range(len(outer)))
    for hole in sorted(holes, key=lambda h: -max(p[0] for p in h)):
        chain = _bridge_hole(verts, chain, hole)
    tris = _ear_clip(verts, chain)
    return verts, tris


def _bridge_hole(verts, chain, hole):
    # connect the hole's rightmost vertex to a visible chain vertex with a
    # double edge (classic hole elimination)
    k = max(range(len(hole)), key=lambda i: (hole[i][0], hole[i][1]))
    hx, hy = hole[k]
    best_i = None
    best_d = math.inf
    for idx, vi in enumerate(chain):
        vx, vy = verts[vi]
        if vx < hx:
            continue
        d = (vx - hx) ** 2 + (vy - hy) ** 2
        if d < best_d and _bridge_clear(verts, chain, (hx, hy), (vx, vy), idx):
            best_d = d
            best_i = idx
    if best_i is None:
        # fall back to the nearest chain vertex regardless of visibility
        best_i = min(
            range(len(chain)),
            key=lambda idx: (verts[chain[idx]][0] - hx) ** 2 + (verts[chain[idx]][1] - hy) ** 2,
        )
    base = len(verts)
    verts.extend(hole)
    hole_idx = [base + (k + j) % len(hole) for j in range(len(hole) + 1)]
    # splice: ...chain[best_i], hole[k..k], chain[best_i]...
    return chain[: best_i + 1] + hole_idx + chain[best_i:]


def _bridge_clear(verts, chain, p, q, skip_idx):
    n = len(chain)
    for i in range(n):
        j = (i + 1) % n
        if skip_idx in (i, j):
            continue
        if _seg_intersects(p, q, verts[chain[i]], verts[chain[j]], touch_ok=True):
            return False
    return True


def _ear_clip(verts, chain):
    idx = list(chain)
    tris = []
    guard = 0
    limit = 4 * len(idx) * len(idx) + 64
    while len(idx) > 3:
        guard += 1
        if guard > limit:
            raise BadPolygon("ear clipping failed; ring is likely self-intersecting")
        n = len(idx)
        clipped = False
        for i in range(n):
            ia, ib, ic = idx[i - 1], idx[i], idx[(i + 1) % n]
            a, b, c = verts[ia], verts[ib], verts[ic]
            cr = _cross(a, b, c)
            if cr < 0.0:
                continue
            if cr == 0.0:
                # collinear ear: drop the middle vertex, no triangle
                del idx[i]
                clipped = True
                break
            if _ear_empty(verts, idx, i, a, b, c):
                tris.append((ia, ib, ic))
                del idx[i]
                clipped = True
                break
        if not clipped:
            raise BadPolygon("no ear found; ring is not simple")
    if len(idx) == 3:
        a, b, c = (verts[k] for k in idx)
        if _cross(a, b, c) > 0.0:
            tris.append(tuple(idx))
    return tris


def _ear_empty(verts, idx, i, a, b, c):
    n = len(idx)
    for j in range(n):
        if j in (i - 1 if i else n - 1, i, (i + 1) % n):
            continue
        px, py = verts[idx[j]]
        if (px, py) in (a, b, c):
            continue
        if (
            _cross(a, b, (px, py)) >= 0
            and _cross(b, c, (px, py)) >= 0
            and _cross(c, a, (px, py)) >= 0
        ):
            return False
    return True
