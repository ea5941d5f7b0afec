"""Scene-tile binary format, scene manifest, and the loaded-scene index.

Tile layout (little-endian):

    magic     4 bytes  b"RAMA"
    version   u16      1
    tile_ix   i32
    tile_iy   i32
    n_bldg    u32
    n_ground  u32
    buildings:  id_len u16, id utf-8 bytes, height f64,
                ring_count u16, per ring: vertex_count u32 + vertex_count * (x f64, y f64)
    ground:     class u8 (0=water, 1=park, 2=road), kind u8 (0=polygon, 1=polyline),
                width f64 (road ribbon width; 0 otherwise), id as above,
                ring_count u16, rings as above

Tiles are 1000 m squares; buildings belong to the tile containing their
footprint centroid.  Heights live with the footprint; extrusion to meshes is
derived data and never serialized.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

from . import poly

MAGIC = b"RAMA"
VERSION = 1
TILE_SIZE_M = 1000.0

GROUND_CLASSES = ("water", "park", "road")


class TileFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Building:
    id: str
    footprint: list  # rings: outer CCW first, then CW holes; (x, y) tuples
    height_m: float
    name: str | None = None

    def centroid(self) -> tuple[float, float]:
        return poly.ring_centroid(self.footprint[0])


@dataclass(frozen=True)
class GroundFeature:
    id: str
    klass: str  # water | park | road
    rings: list  # polygon rings, or a single polyline for roads
    is_line: bool = False
    width_m: float = 0.0


@dataclass
class SceneTile:
    tile_ix: int
    tile_iy: int
    buildings: list = field(default_factory=list)
    ground: list = field(default_factory=list)


def tile_index(x: float, y: float) -> tuple[int, int]:
    return math.floor(x / TILE_SIZE_M), math.floor(y / TILE_SIZE_M)


def tile_filename(ix: int, iy: int) -> str:
    return f"tile_{ix}_{iy}.bin"


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    if len(raw) > 0xFFFF:
        raise TileFormatError(f"id too long: {len(raw)} bytes")
    return struct.pack("<H", len(raw)) + raw


def _pack_rings(rings) -> bytes:
    if len(rings) > 0xFFFF:
        raise TileFormatError("too many rings")
    out = [struct.pack("<H", len(rings))]
    for ring in rings:
        out.append(struct.pack("<I", len(ring)))
        for x, y in ring:
            out.append(struct.pack("<dd", x, y))
    return b"".join(out)


def encode_tile(tile: SceneTile) -> bytes:
    out = [
        MAGIC,
        struct.pack("<H", VERSION),
        struct.pack("<ii", tile.tile_ix, tile.tile_iy),
        struct.pack("<II", len(tile.buildings), len(tile.ground)),
    ]
    for b in tile.buildings:
        out.append(_pack_str(b.id))
        out.append(struct.pack("<d", b.height_m))
        out.append(_pack_rings(b.footprint))
    for g in tile.ground:
        out.append(struct.pack("<BB", GROUND_CLASSES.index(g.klass), 1 if g.is_line else 0))
        out.append(struct.pack("<d", g.width_m))
        out.append(_pack_str(g.id))
        out.append(_pack_rings(g.rings))
    return b"".join(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise TileFormatError("truncated tile data")
        vals = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return vals

    def take_str(self) -> str:
        (n,) = self.take("<H")
        if self.pos + n > len(self.data):
            raise TileFormatError("truncated tile data")
        s = self.data[self.pos : self.pos + n].decode("utf-8")
        self.pos += n
        return s

    def take_rings(self):
        (nr,) = self.take("<H")
        rings = []
        for _ in range(nr):
            (nv,) = self.take("<I")
            ring = []
            for _ in range(nv):
                x, y = self.take("<dd")
                ring.append((x, y))
            rings.append(ring)
        return rings


def decode_tile(data: bytes) -> SceneTile:
    r = _Reader(data)
    if r.data[:4] != MAGIC:
        raise TileFormatError("bad magic; not a scene tile")
    r.pos = 4
    (version,) = r.take("<H")
    if version != VERSION:
        raise TileFormatError(f"unsupported tile version {version}")
    ix, iy = r.take("<ii")
    n_bldg, n_ground = r.take("<II")
    tile = SceneTile(ix, iy)
    for _ in range(n_bldg):
        bid = r.take_str()
        (h,) = r.take("<d")
        rings = r.take_rings()
        tile.buildings.append(Building(bid, rings, h))
    for _ in range(n_ground):
        ci, kind = r.take("<BB")
        (w,) = r.take("<d")
        gid = r.take_str()
        rings = r.take_rings()
        tile.ground.append(
            GroundFeature(gid, GROUND_CLASSES[ci], rings, is_line=kind == 1, width_m=w)
        )
    if r.pos != len(r.data):
        raise TileFormatError("trailing bytes after tile payload")
    return tile


def write_manifest(path: Path, origin_lon: float, origin_lat: float, tiles, max_height_m: float):
    doc = {
        "origin_lon": origin_lon,
        "origin_lat": origin_lat,
        "tile_size_m": int(TILE_SIZE_M),
        "tiles": [[ix, iy, size] for ix, iy, size in tiles],
        "max_height_m": max_height_m,
    }
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return doc


def load_manifest(scene_dir: Path) -> dict:
    return json.loads((Path(scene_dir) / "manifest.json").read_text())


class SceneIndex:
    """All tiles of a scene loaded in memory, with collision and lookup helpers.

    Immutable after construction; safe to share across threads.
    """

    def __init__(self, tiles: list[SceneTile], manifest: dict | None = None):
        self.tiles = tiles
        self.manifest = manifest or {}
        self._by_id: dict[str, Building] = {}
        self._grid: dict[tuple[int, int], list[Building]] = {}
        for t in tiles:
            for b in t.buildings:
                self._by_id[b.id] = b
                cx, cy = b.centroid()
                self._grid.setdefault(tile_index(cx, cy), []).append(b)

    @classmethod
    def load(cls, scene_dir) -> "SceneIndex":
        scene_dir = Path(scene_dir)
        manifest = load_manifest(scene_dir)
        tiles = []
        for ix, iy, _size in manifest["tiles"]:
            data = (scene_dir / tile_filename(ix, iy)).read_bytes()
            tiles.append(decode_tile(data))
        return cls(tiles, manifest)

    def building(self, bid: str) -> Building | None:
        return self._by_id.get(bid)

    def building_count(self) -> int:
        return len(self._by_id)

    def _near(self, x: float, y: float, reach_m: float):
        r = int(math.ceil(reach_m / TILE_SIZE_M)) + 1
        ix0, iy0 = tile_index(x, y)
        for ix in range(ix0 - r, ix0 + r + 1):
            for iy in range(iy0 - r, iy0 + r + 1):
                yield from self._grid.get((ix, iy), ())

    def blocked(self, p0, p1, radius_m: float, altitude_m: float) -> bool:
        """True when the swept disc from p0 to p1 (x, y) at `altitude_m` hits a
        building taller than the altitude."""
        reach = radius_m + math.hypot(p1[0] - p0[0], p1[1] - p0[1]) + TILE_SIZE_M
        for b in self._near(p0[0], p0[1], reach):
            if b.height_m <= altitude_m:
                continue
            if poly.seg_polygon_dist(p0, p1, b.footprint) <= radius_m:
                return True
        return False

    def standoff_point(self, bid: str, from_xy, standoff_m: float = 10.0):
        """Point `standoff_m` outside the footprint boundary, on the horizontal
        ray from the building centroid toward `from_xy`."""
        b = self._by_id.get(bid)
        if b is None:
            return None
        cx, cy = b.centroid()
        dx, dy = from_xy[0] - cx, from_xy[1] - cy
        n = math.hypot(dx, dy)
        if n < 1e-12:
            dx, dy, n = 1.0, 0.0, 1.0
        dx, dy = dx / n, dy / n
        t = poly.ray_ring_exit((cx, cy), (dx, dy), b.footprint[0])
        if t is None:
            t = 0.0
        return (cx + (t + standoff_m) * dx, cy + (t + standoff_m) * dy)
