"""Regenerate city.geojson: a ~3 km^2 synthetic city extract.

Footprints are designed in local east-north meters around ORIGIN and written
back as lon/lat so ingestion reprojects them; the layout covers four tiles
and includes an L-shaped hall, a courtyard building (hole), a pentagon, tall
and low blocks, water, a park, and two roads.

Run: python tests/fixtures/make_city.py
"""

import json
from pathlib import Path

from ramacity.ingest import unproject_xy

ORIGIN = (-0.09, 51.505)  # lon, lat


def rect(cx, cy, w, h):
    return [
        (cx - w / 2, cy - h / 2),
        (cx + w / 2, cy - h / 2),
        (cx + w / 2, cy + h / 2),
        (cx - w / 2, cy + h / 2),
    ]


BUILDINGS = [
    # id, rings (outer CCW; holes any orientation), properties
    (
        "city-hall",
        [[(-700, -400), (-600, -400), (-600, -350), (-650, -350), (-650, -300), (-700, -300)]],
        {"building": "civic", "height": "93", "name": "City Hall"},
    ),
    (
        "courtyard-house",
        [rect(200, 100, 60, 60), rect(200, 100, 20, 20)],
        {"building": "apartments", "building:levels": "12", "name": "Courtyard House"},
    ),
    (
        "tower-east",
        [rect(800, 200, 40, 40)],
        {"building": "office", "height": "120 m", "name": "East Tower"},
    ),
    ("block-north", [rect(-100, 600, 80, 50)], {"building": "yes", "height": "50"}),
    ("row-house-1", [rect(-200, -600, 30, 20)], {"building": "house"}),
    ("row-house-2", [rect(-120, -600, 30, 20)], {"building": "house"}),
    ("row-house-3", [rect(-40, -600, 30, 20)], {"building": "house"}),
    ("row-house-4", [rect(40, -600, 30, 20)], {"building": "house"}),
    ("slab-west", [rect(-900, 100, 120, 30)], {"building": "yes", "building:levels": "5"}),
    (
        "pavilion-south",
        [[(500, -530), (530, -510), (520, -475), (480, -475), (470, -510)]],
        {"building": "yes", "height": "8", "name": "South Pavilion"},
    ),
    ("depot-far", [rect(900, -700, 60, 40)], {"building": "industrial", "height": "25"}),
]

GROUND = [
    ("pond", "Polygon", [rect(350, -150, 100, 80)], {"natural": "water", "name": "Pond"}),
    ("green", "Polygon", [rect(-350, 250, 150, 120)], {"leisure": "park", "name": "Green"}),
    (
        "main-street",
        "LineString",
        [(-950, 0), (950, 0)],
        {"highway": "primary", "width": "12", "name": "Main Street"},
    ),
    ("cross-street", "LineString", [(0, -740), (0, 740)], {"highway": "residential"}),
]


def to_lonlat(pt):
    lon, lat = unproject_xy(pt[0], pt[1], *ORIGIN)
    return [round(lon, 9), round(lat, 9)]


def main():
    features = []
    for fid, rings, props in BUILDINGS:
        coords = [[to_lonlat(p) for p in ring] + [to_lonlat(ring[0])] for ring in rings]
        features.append(
            {
                "type": "Feature",
                "id": fid,
                "properties": props,
                "geometry": {"type": "Polygon", "coordinates": coords},
            }
        )
    for fid, gtype, pts, props in GROUND:
        if gtype == "Polygon":
            coords = [[to_lonlat(p) for p in ring] + [to_lonlat(ring[0])] for ring in pts]
        else:
            coords = [to_lonlat(p) for p in pts]
        features.append(
            {
                "type": "Feature",
                "id": fid,
                "properties": props,
                "geometry": {"type": gtype, "coordinates": coords},
            }
        )
    doc = {"type": "FeatureCollection", "features": features}
    out = Path(__file__).parent / "city.geojson"
    out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out} ({len(features)} features)")


if __name__ == "__main__":
    main()
