"""GeoJSON city extracts -> tiled, extruded, locally projected scenes.

Input is a GeoJSON FeatureCollection (pre-extracted building/water/park/road
features).  Coordinates are projected onto a local east-north plane around an
origin lon/lat; buildings get heights from tags and are assigned to 1 km
tiles by footprint centroid; tiles and a manifest are written such that
re-running on the same input is byte-identical regardless of worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import poly
from .geometry import HeightExceedsRadius
from .tiles import (
    Building,
    GroundFeature,
    SceneTile,
    encode_tile,
    tile_filename,
    tile_index,
    write_manifest,
)

METERS_PER_DEGREE = 111320.0
SPAN_LIMIT_M = 50_000.0
MAX_LAT_DEG = 85.0
METERS_PER_LEVEL = 3.0
DEFAULT_HEIGHT_M = 10.0
DEFAULT_ROAD_WIDTH_M = 8.0


class OutOfDomain(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, msg, feature_index=None):
        if feature_index is not None:
            msg = f"feature {feature_index}: {msg}"
        super().__init__(msg)
        self.feature_index = feature_index


def project_lonlat(lon: float, lat: float, origin_lon: float, origin_lat: float):
    """Equirectangular local projection to east-north meters."""
    if abs(lat) >= MAX_LAT_DEG or abs(origin_lat) >= MAX_LAT_DEG:
        raise OutOfDomain(f"latitude {lat} out of projection domain")
    x = (lon - origin_lon) * math.cos(math.radians(origin_lat)) * METERS_PER_DEGREE
    y = (lat - origin_lat) * METERS_PER_DEGREE
    if abs(x) > SPAN_LIMIT_M or abs(y) > SPAN_LIMIT_M:
        raise OutOfDomain(f"point {x:.0f},{y:.0f} m exceeds the {SPAN_LIMIT_M:.0f} m span limit")
    return x, y


def unproject_xy(x: float, y: float, origin_lon: float, origin_lat: float):
    """Inverse of project_lonlat."""
    lon = origin_lon + x / (math.cos(math.radians(origin_lat)) * METERS_PER_DEGREE)
    lat = origin_lat + y / METERS_PER_DEGREE
    return lon, lat


def infer_height(properties: dict) -> float:
    """Building height from tags: `height`, else levels * 3 m, else 10 m."""
    h = _parse_meters(properties.get("height"))
    if h is not None and h > 0.0:
        return h
    lv = _parse_meters(properties.get("building:levels"))
    if lv is not None and lv > 0.0:
        return lv * METERS_PER_LEVEL
    return DEFAULT_HEIGHT_M


def _parse_meters(raw) -> float | None:
    if raw is None:
        return None
    s = str(raw).strip()
    if s.endswith("m"):
        s = s[:-1].strip()
    try:
        return float(s)
    except ValueError:
        return None


def extrude_building(footprint, height_m: float):
    """Extrude a footprint polygon to a closed prism mesh.

    Returns (vertices, triangles): one vertex per (ring vertex, bottom/top),
    triangles wound with outward-facing normals (roof up, floor down, sides
    out).  Footprint rings must be normalized: outer CCW, holes CW.
    """
    if height_m <= 0.0:
        raise poly.BadPolygon(f"height must be positive, got {height_m}")
    for ring in footprint:
        if len(ring) < 3:
            raise poly.BadPolygon(f"ring with {len(ring)} vertices is degenerate")
        if not poly.ring_is_simple(ring):
            raise poly.BadPolygon("self-intersecting ring")
    flat_verts, roof_tris = poly.triangulate(footprint)
    n = len(flat_verts)
    verts = [(x, y, 0.0) for x, y in flat_verts] + [(x, y, height_m) for x, y in flat_verts]
    tris = []
    for a, b, c in roof_tris:
        tris.append((n + a, n + b, n + c))  # roof, CCW from above
        tris.append((c, b, a))  # floor, CCW from below
    # side walls per original ring edge (triangulate() appends bridged hole
    # copies after the outer ring, preserving ring vertex order)
    offset = 0
    for ring in footprint:
        m = len(ring)
        for i in range(m):
            i0 = offset + i
            i1 = offset + (i + 1) % m
            tris.append((i0, i1, n + i1))
            tris.append((i0, n + i1, n + i0))
        offset += m
    return verts, tris


def mesh_volume(verts, tris) -> float:
    """Signed volume via the divergence theorem; positive for outward normals."""
    vol = 0.0
    for a, b, c in tris:
        ax, ay, az = verts[a]
        bx, by, bz = verts[b]
        cx, cy, cz = verts[c]
        vol += (
            ax * (by * cz - bz * cy)
            - ay * (bx * cz - bz * cx)
            + az * (bx * cy - by * cx)
        )
    return vol / 6.0


def _normalize_rings(raw_rings, origin, want_ccw_outer=True):
    rings = []
    for ri, raw in enumerate(raw_rings):
        pts = [project_lonlat(lon, lat, *origin) for lon, lat in raw]
        if len(pts) >= 2 and pts[0] == pts[-1]:
            pts = pts[:-1]
        deduped = [p for i, p in enumerate(pts) if i == 0 or p != pts[i - 1]]
        if len(deduped) < 3:
            raise poly.BadPolygon(f"ring {ri} has fewer than 3 distinct vertices")
        area = poly.signed_area(deduped)
        ccw = area > 0.0
        outer = ri == 0
        if want_ccw_outer and (ccw != outer):
            deduped.reverse()
        rings.append(deduped)
    return rings


def _project_line(raw_line, origin):
    pts = [project_lonlat(lon, lat, *origin) for lon, lat in raw_line]
    deduped = [p for i, p in enumerate(pts) if i == 0 or p != pts[i - 1]]
    if len(deduped) < 2:
        raise poly.BadPolygon("polyline has fewer than 2 distinct vertices")
    return deduped


def _feature_id(feature, index: int) -> str:
    props = feature.get("properties") or {}
    for candidate in (feature.get("id"), props.get("@id"), props.get("id")):
        if candidate is not None:
            return str(candidate)
    return f"f{index}"


def parse_features(doc: dict, origin):
    """Split a FeatureCollection into buildings and ground features."""
    if doc.get("type") != "FeatureCollection":
        raise ParseError("input is not a GeoJSON FeatureCollection")
    buildings = []
    ground = []
    for i, feature in enumerate(doc.get("features", [])):
        try:
            _classify(feature, i, origin, buildings, ground)
        except (poly.BadPolygon, OutOfDomain, KeyError, TypeError) as e:
            raise ParseError(str(e), feature_index=i) from e
    return buildings, ground


def _classify(feature, i, origin, buildings, ground):
    props = feature.get("properties") or {}
    geom = feature.get("geometry") or {}
    gtype = geom.get("type")
    fid = _feature_id(feature, i)
    name = props.get("name")

    if "building" in props:
        height = infer_height(props)
        if gtype == "Polygon":
            polys = [geom["coordinates"]]
        elif gtype == "MultiPolygon":
            polys = list(geom["coordinates"])
        else:
            raise poly.BadPolygon(f"building feature has geometry {gtype}")
        for k, raw_rings in enumerate(polys):
            rings = _normalize_rings(raw_rings, origin)
            bid = fid if len(polys) == 1 else f"{fid}/{k}"
            buildings.append(Building(bid, rings, height, name))
        return

    klass = None
    if props.get("natural") == "water" or "waterway" in props:
        klass = "water"
    elif props.get("leisure") == "park" or props.get("landuse") in ("grass", "park"):
        klass = "park"
    elif "highway" in props:
        klass = "road"
    if klass is None:
        return  # silently skip unclassified features

    if klass == "road":
        if gtype != "LineString":
            raise poly.BadPolygon(f"road feature has geometry {gtype}")
        width = _parse_meters(props.get("width")) or DEFAULT_ROAD_WIDTH_M
        line = _project_line(geom["coordinates"], origin)
        ground.append(GroundFeature(fid, "road", [line], is_line=True, width_m=width))
    else:
        if gtype == "Polygon":
            polys = [geom["coordinates"]]
        elif gtype == "MultiPolygon":
            polys = list(geom["coordinates"])
        else:
            raise poly.BadPolygon(f"{klass} feature has geometry {gtype}")
        for k, raw_rings in enumerate(polys):
            rings = _normalize_rings(raw_rings, origin)
            gid = fid if len(polys) == 1 else f"{fid}/{k}"
            ground.append(GroundFeature(gid, klass, rings))


def _feature_anchor(g: GroundFeature):
    if g.is_line:
        pts = g.rings[0]
        return (
            sum(p[0] for p in pts) / len(pts),
            sum(p[1] for p in pts) / len(pts),
        )
    return poly.ring_centroid(g.rings[0])


def default_origin(doc: dict):
    """Deterministic origin: bounding-box center of all coordinates, 1e-6 deg grid."""
    lons = []
    lats = []

    def walk(coords):
        if not coords:
            return
        if isinstance(coords[0], (int, float)):
            lons.append(coords[0])
            lats.append(coords[1])
        else:
            for c in coords:
                walk(c)

    for f in doc.get("features", []):
        walk((f.get("geometry") or {}).get("coordinates"))
    if not lons:
        return 0.0, 0.0
    lon = round((min(lons) + max(lons)) / 2.0, 6)
    lat = round((min(lats) + max(lats)) / 2.0, 6)
    return lon, lat


def ingest(
    geojson_path,
    out_dir,
    origin=None,
    d_m: float = 5000.0,
    workers: int | None = None,
) -> dict:
    """Run the full pipeline; returns the manifest dict.

    Deterministic: identical input bytes produce identical output bytes, for
    any worker count.
    """
    path = Path(geojson_path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from e
    if origin is None:
        origin = default_origin(doc)
    origin_lon, origin_lat = origin

    buildings, ground = parse_features(doc, (origin_lon, origin_lat))
    for b in buildings:
        if b.height_m >= 0.5 * d_m:
            raise HeightExceedsRadius(
                f"building {b.id} height {b.height_m} m >= half diameter {0.5 * d_m} m"
            )

    buildings.sort(key=lambda b: b.id)
    ground.sort(key=lambda g: (g.klass, g.id))

    grid: dict[tuple[int, int], SceneTile] = {}

    def tile_for(ix, iy) -> SceneTile:
        if (ix, iy) not in grid:
            grid[(ix, iy)] = SceneTile(ix, iy)
        return grid[(ix, iy)]

    for b in buildings:
        ix, iy = tile_index(*b.centroid())
        tile_for(ix, iy).buildings.append(b)
    for g in ground:
        ix, iy = tile_index(*_feature_anchor(g))
        tile_for(ix, iy).ground.append(g)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    keys = sorted(grid)

    def render(key):
        return key, encode_tile(grid[key])

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            encoded = dict(pool.map(render, keys))
    else:
        encoded = dict(render(k) for k in keys)

    tile_rows = []
    for ix, iy in keys:
        data = encoded[(ix, iy)]
        (out / tile_filename(ix, iy)).write_bytes(data)
        tile_rows.append((ix, iy, len(data)))

    max_h = max((b.height_m for b in buildings), default=0.0)
    return write_manifest(out / "manifest.json", origin_lon, origin_lat, tile_rows, max_h)
