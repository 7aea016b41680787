#!/usr/bin/env python3
"""Generate the bundled icon pack: one SVG per icon plus icons.json.

Icons are stylized flat silhouettes built from primitive shapes. Every
file has a single root <g> carrying the fill, so the renderer can inject
palette colors by rewriting one attribute.

Usage: python3 tools/gen_icons.py [icons_dir] [manifest_path]
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"


def circle(cx, cy, r):
    return f'<circle cx="{cx}" cy="{cy}" r="{r}"/>'


def ellipse(cx, cy, rx, ry):
    return f'<ellipse cx="{cx}" cy="{cy}" rx="{rx}" ry="{ry}"/>'


def rect(x, y, w, h, rx=0):
    extra = f' rx="{rx}"' if rx else ""
    return f'<rect x="{x}" y="{y}" width="{w}" height="{h}"{extra}/>'


def path(d, extra=""):
    return f'<path d="{d}"{extra}/>'


def polygon(points):
    return f'<polygon points="{points}"/>'


def person_shape(head_y=7, head_r=6):
    return [circle(12, head_y, head_r), path("M4 48 V26 Q4 16 12 16 Q20 16 20 26 V48 Z")]


ICONS: list[dict] = [
    dict(id="person", kw=["person", "people", "adult", "adults", "user", "users"],
         w=24, h=48, body=person_shape(), flags="pw"),
    dict(id="man", kw=["man", "men", "male"], w=24, h=48,
         body=[circle(12, 7, 6), path("M5 48 V27 Q5 16 12 16 Q19 16 19 27 V48 H14 V34 H10 V48 Z"),
               rect(5, 44, 14, 4)], flags="pw"),
    dict(id="woman", kw=["woman", "women", "female", "skirt"], w=24, h=48,
         body=[circle(12, 7, 6), path("M12 16 Q18 16 20 30 L22 40 H2 L4 30 Q6 16 12 16 Z"),
               rect(8, 40, 3, 8), rect(13, 40, 3, 8)], flags="pw"),
    dict(id="student", kw=["student", "students", "graduate", "graduates", "education"],
         w=26, h=48, body=[polygon("13,1 26,6 13,11 0,6"), rect(11, 9, 4, 5),
                           circle(13, 14, 4.5), path("M6 48 V30 Q6 21 13 21 Q20 21 20 30 V48 Z")],
         flags="pw"),
    dict(id="kid", kw=["kid", "kids", "child", "children", "baby", "babies"], w=22, h=40,
         body=[circle(11, 8, 7), path("M4 40 V25 Q4 17 11 17 Q18 17 18 25 V40 Z")], flags="pw"),
    dict(id="worker", kw=["worker", "workers", "employee", "employees", "job", "jobs"],
         w=24, h=48, body=[path("M5 8 Q5 1 12 1 Q19 1 19 8 Z"), rect(4, 7, 16, 2),
                           circle(12, 11, 4), path("M4 48 V29 Q4 19 12 19 Q20 19 20 29 V48 Z")],
         flags="pw"),
    dict(id="doctor", kw=["doctor", "doctors", "nurse", "nurses", "medical", "hospital"],
         w=24, h=48, body=[circle(12, 7, 6), path("M4 48 V26 Q4 16 12 16 Q20 16 20 26 V48 Z"),
                           rect(10, 24, 4, 12), rect(6, 28, 12, 4)], flags="pw"),
    dict(id="cup", kw=["cup", "coffee", "mug", "tea"], w=44, h=40,
         body=[path("M2 2 H34 V26 Q34 38 18 38 Q2 38 2 26 Z"),
               path("M34 6 H38 Q44 6 44 14 Q44 22 38 22 H34 V18 H38 Q40 18 40 14 Q40 10 38 10 H34 Z")],
         flags="fb", fill_dir="btt"),
    dict(id="drop", kw=["drop", "water", "rain", "liquid"], w=28, h=40,
         body=[path("M14 0 Q28 20 28 28 Q28 40 14 40 Q0 40 0 28 Q0 20 14 0 Z")],
         flags="pf", fill_dir="btt"),
    dict(id="bottle", kw=["bottle", "wine", "beer"], w=14, h=40,
         body=[path("M5 0 H9 V8 Q14 12 14 20 V38 Q14 40 12 40 H2 Q0 40 0 38 V20 Q0 12 5 8 Z")],
         flags="pf", fill_dir="btt"),
    dict(id="heart", kw=["heart", "love", "health", "romance"], w=44, h=40,
         body=[path("M22 40 Q0 24 0 12 Q0 0 11 0 Q18 0 22 8 Q26 0 33 0 Q44 0 44 12 Q44 24 22 40 Z")],
         flags="pf"),
    dict(id="star", kw=["star", "favorite", "rating", "rank"], w=42, h=40,
         body=[polygon("21,0 27,14 42,15 31,25 34,40 21,32 8,40 11,25 0,15 15,14")], flags="pf"),
    dict(id="house", kw=["house", "houses", "home", "homes", "household", "households"],
         w=44, h=40, body=[polygon("22,0 44,18 38,18 38,40 26,40 26,28 18,28 18,40 6,40 6,18 0,18")],
         flags="pfb"),
    dict(id="building", kw=["building", "office", "company", "companies", "business", "businesses"],
         w=28, h=40, body=[rect(0, 0, 28, 40), rect(4, 4, 6, 5), rect(11, 4, 6, 5), rect(18, 4, 6, 5),
                           rect(4, 12, 6, 5), rect(11, 12, 6, 5), rect(18, 12, 6, 5),
                           rect(4, 20, 6, 5), rect(11, 20, 6, 5), rect(18, 20, 6, 5),
                           rect(11, 30, 6, 10)], flags="pwb"),
    dict(id="car", kw=["car", "cars", "drive", "driving", "vehicle"], w=48, h=24,
         body=[path("M4 14 L10 4 Q11 2 14 2 H34 Q37 2 38 4 L44 14 H46 Q48 14 48 16 V20 H42 a5 5 0 0 1 -10 0 H16 a5 5 0 0 1 -10 0 H0 V16 Q0 14 2 14 Z"),
               circle(11, 20, 4), circle(37, 20, 4)], flags="pw"),
    dict(id="bus", kw=["bus", "buses", "transport", "transit"], w=44, h=24,
         body=[rect(0, 0, 44, 18, 3), rect(4, 3, 8, 7), rect(14, 3, 8, 7), rect(24, 3, 8, 7),
               rect(34, 3, 6, 7), circle(9, 20, 4), circle(35, 20, 4)], flags="pw"),
    dict(id="bike", kw=["bike", "bicycle", "cycling", "cyclist", "cyclists"], w=48, h=30,
         body=[path("M10 29 a9 9 0 1 1 0.01 0 Z M10 26 a6 6 0 1 0 -0.01 0 Z"),
               path("M38 29 a9 9 0 1 1 0.01 0 Z M38 26 a6 6 0 1 0 -0.01 0 Z"),
               path("M10 20 L20 6 H30 L38 20 L28 20 Q24 20 22 16 Z M20 2 H30 V5 H20 Z")],
         flags="pw"),
    dict(id="plane", kw=["plane", "flight", "flights", "airport", "airplane"], w=48, h=34,
         body=[path("M0 18 L20 14 L34 0 H40 L30 14 H44 Q48 14 48 17 Q48 20 44 20 H30 L40 34 H34 L20 20 L0 22 Z")],
         flags="pw"),
    dict(id="book", kw=["book", "books", "read", "reading", "library"], w=40, h=32,
         body=[path("M0 2 Q10 -2 19 4 V32 Q10 26 0 30 Z"), path("M40 2 Q30 -2 21 4 V32 Q30 26 40 30 Z")],
         flags="pf"),
    dict(id="phone", kw=["phone", "phones", "smartphone", "smartphones", "mobile", "device"],
         w=20, h=40, body=[rect(0, 0, 20, 40, 3), rect(3, 5, 14, 26), circle(10, 35, 2.5)],
         flags="pf"),
    dict(id="laptop", kw=["laptop", "laptops", "computer", "computers", "technology"],
         w=48, h=30, body=[rect(6, 0, 36, 24, 2), rect(9, 3, 30, 18), path("M0 26 H48 L44 30 H4 Z")],
         flags="pw"),
    dict(id="globe", kw=["globe", "world", "worldwide", "global", "earth", "planet"],
         w=40, h=40, body=[circle(20, 20, 20), ellipse(20, 20, 9, 20),
                           rect(0, 12, 40, 2.5), rect(0, 26, 40, 2.5)], flags="fb"),
    dict(id="tree", kw=["tree", "trees", "forest", "forests", "nature"], w=30, h=40,
         body=[polygon("15,0 28,14 22,14 30,26 19,26 19,40 11,40 11,26 0,26 8,14 2,14")],
         flags="pf"),
    dict(id="leaf", kw=["leaf", "environment", "green", "eco", "sustainable"], w=36, h=36,
         body=[path("M2 34 Q0 16 14 6 Q26 -2 36 0 Q38 14 28 26 Q18 36 2 34 Z M6 30 Q20 22 30 6 Q22 20 6 30 Z")],
         flags="pf"),
    dict(id="football", kw=["football", "soccer", "ball"], w=40, h=40,
         body=[circle(20, 20, 20), polygon("20,10 29,17 26,28 14,28 11,17")], flags="p!",
         represents="part"),
    dict(id="basketball", kw=["basketball"], w=40, h=40,
         body=[circle(20, 20, 20), rect(19, 0, 2, 40), rect(0, 19, 40, 2),
               path("M6 6 Q20 20 6 34 L8 36 Q24 20 8 4 Z"), path("M34 6 Q20 20 34 34 L32 36 Q16 20 32 4 Z")],
         flags="p!", represents="part"),
    dict(id="money", kw=["money", "dollar", "coin", "cash", "finance", "income", "savings"],
         w=40, h=40, body=[circle(20, 20, 20), circle(20, 20, 15),
                           path("M18 8 H22 V12 Q27 12 27 17 H23 Q23 15 20 15 Q17 15 17 17.5 Q17 20 21 21 Q27 22.5 27 27 Q27 31 22 32 V36 H18 V32 Q13 32 13 27 H17 Q17 29 20 29 Q23 29 23 26.5 Q23 24 19 23 Q13 21.5 13 17 Q13 13 18 12 Z")],
         flags="pf"),
    dict(id="chart", kw=["chart", "statistics", "data", "growth", "stocks"], w=40, h=40,
         body=[rect(0, 36, 40, 4), rect(2, 22, 8, 12), rect(13, 14, 8, 20), rect(24, 6, 8, 28)],
         flags="pw"),
    dict(id="clock", kw=["clock", "time", "hour", "hours", "schedule", "daily"], w=40, h=40,
         body=[circle(20, 20, 20), circle(20, 20, 16.5), rect(19, 8, 2, 13), rect(19, 19, 10, 2)],
         flags="pf"),
    dict(id="envelope", kw=["envelope", "email", "emails", "mail", "message", "messages"],
         w=44, h=32, body=[path("M0 0 H44 V32 H0 Z M2 3 L22 18 L42 3 H2 Z"),
                           polygon("22,20 2,5 2,30 42,30 42,5")], flags="pf"),
    dict(id="bulb", kw=["bulb", "idea", "light", "energy", "electricity"], w=28, h=40,
         body=[path("M14 0 Q28 0 28 14 Q28 22 21 27 V32 H7 V27 Q0 22 0 14 Q0 0 14 0 Z"),
               rect(8, 34, 12, 3), rect(10, 38, 8, 2)], flags="pf", fill_dir="btt"),
    dict(id="flag", kw=["flag", "country", "nation"], w=32, h=40,
         body=[rect(0, 0, 3, 40), path("M3 2 H32 L26 10 L32 18 H3 Z")], flags="pw"),
    dict(id="map-us", kw=["usa", "america", "us", "map", "states"], w=48, h=30,
         body=[path("M2 4 L18 2 L34 4 L46 2 L48 10 L42 16 L44 24 L36 22 L30 28 L22 24 L12 26 L4 20 L0 12 Z")],
         flags="fb!", represents="whole"),
    dict(id="apple", kw=["apple", "fruit", "fruits", "healthy"], w=34, h=40,
         body=[path("M17 10 Q22 4 28 6 Q34 8 34 18 Q34 30 26 38 Q22 41 17 38 Q12 41 8 38 Q0 30 0 18 Q0 8 6 6 Q12 4 17 10 Z"),
               path("M17 9 Q17 2 23 0 Q23 7 17 9 Z")], flags="pf"),
    dict(id="pizza", kw=["pizza", "restaurant", "meal", "meals"], w=36, h=40,
         body=[path("M0 0 Q18 -4 36 0 L18 40 Z"), circle(12, 8, 3), circle(24, 8, 3), circle(18, 20, 3)],
         flags="p!", represents="part"),
    dict(id="glasses", kw=["glasses", "vision", "eyes"], w=48, h=22,
         body=[path("M10 22 a10 10 0 1 1 0.01 0 Z M10 18 a6.5 6.5 0 1 0 -0.01 0 Z"),
               path("M38 22 a10 10 0 1 1 0.01 0 Z M38 18 a6.5 6.5 0 1 0 -0.01 0 Z"),
               rect(18, 8, 12, 3), rect(0, 6, 4, 3), rect(44, 6, 4, 3)],
         flags="p!", represents="part"),
    dict(id="bowtie", kw=["bowtie", "tie", "bow"], w=44, h=24,
         body=[polygon("0,0 18,8 18,16 0,24"), polygon("44,0 26,8 26,16 44,24"), rect(18, 7, 8, 10, 2)],
         flags="p!", represents="part"),
    dict(id="shirt", kw=["shirt", "clothes", "clothing", "fashion"], w=40, h=40,
         body=[path("M13 0 H27 L40 8 L36 16 L30 13 V40 H10 V13 L4 16 L0 8 Z")], flags="pf"),
    dict(id="shoe", kw=["shoe", "shoes", "sneakers"], w=48, h=24,
         body=[path("M2 0 H14 Q18 8 28 12 Q48 16 48 22 V24 H0 V4 Q0 0 2 0 Z")],
         flags="p!", represents="part"),
    dict(id="dog", kw=["dog", "dogs", "pet", "pets"], w=44, h=40,
         body=[path("M6 10 Q6 2 12 2 L16 6 H24 L28 2 Q34 2 34 10 V14 H40 L44 20 L38 22 H34 V40 H28 V30 H14 V40 H8 V18 Q6 14 6 10 Z")],
         flags="pw"),
    dict(id="cat", kw=["cat", "cats"], w=36, h=40,
         body=[path("M4 0 L12 6 H24 L32 0 V12 Q36 18 32 24 Q28 30 18 30 Q8 30 4 24 Q0 18 4 12 Z"),
               path("M14 30 H22 V40 H26 V30 H30 Q32 36 28 40 H8 Q6 34 10 30 Z")], flags="pw"),
    dict(id="fish", kw=["fish", "ocean", "sea"], w=48, h=30,
         body=[path("M0 15 Q12 0 28 0 Q44 0 48 15 Q44 30 28 30 Q12 30 0 15 Z M40 15 a3 3 0 1 0 0.01 0"),
               polygon("0,15 10,5 10,25")], flags="pw"),
    dict(id="sun", kw=["sun", "solar", "summer", "weather"], w=40, h=40,
         body=[circle(20, 20, 11), rect(19, 0, 2, 6), rect(19, 34, 2, 6), rect(0, 19, 6, 2),
               rect(34, 19, 6, 2), polygon("5,5 9,9 7,11 3,7"), polygon("35,5 31,9 33,11 37,7"),
               polygon("5,35 9,31 11,33 7,37"), polygon("35,35 31,31 29,33 33,37")], flags="pf"),
    dict(id="cloud", kw=["cloud", "sky"], w=48, h=30,
         body=[path("M12 30 Q0 30 0 20 Q0 12 8 11 Q10 0 22 0 Q32 0 35 9 Q48 9 48 20 Q48 30 36 30 Z")],
         flags="pfb"),
    dict(id="umbrella", kw=["umbrella", "insurance", "protection"], w=44, h=40,
         body=[path("M22 0 Q44 2 44 20 Q38 14 33 20 Q28 14 22 20 Q16 14 11 20 Q6 14 0 20 Q0 2 22 0 Z"),
               path("M20 20 H24 V34 Q24 40 18 40 Q12 40 12 35 H16 Q16 36 18 36 Q20 36 20 34 Z")],
         flags="pf"),
    dict(id="music", kw=["music", "song", "note", "stream", "audio"], w=32, h=40,
         body=[path("M10 4 L32 0 V28 a6 6 0 1 1 -4 -5.5 V8 L14 11 V32 a6 6 0 1 1 -4 -5.5 Z")],
         flags="pf"),
    dict(id="camera", kw=["camera", "photo", "photography"], w=44, h=32,
         body=[path("M14 0 H30 L34 6 H40 Q44 6 44 10 V28 Q44 32 40 32 H4 Q0 32 0 28 V10 Q0 6 4 6 H10 Z"),
               circle(22, 19, 9), circle(22, 19, 6)], flags="pf"),
    dict(id="tv", kw=["tv", "television", "watch", "screen", "news"], w=48, h=34,
         body=[rect(0, 0, 48, 28, 3), rect(3, 3, 42, 22), rect(16, 30, 16, 4)], flags="pw"),
    dict(id="gym", kw=["gym", "dumbbell", "exercise", "fitness", "sport", "sports"],
         w=48, h=26, body=[rect(0, 8, 6, 10, 2), rect(7, 3, 7, 20, 2), rect(34, 3, 7, 20, 2),
                           rect(42, 8, 6, 10, 2), rect(14, 11, 20, 4)],
         flags="p!", represents="part"),
    dict(id="battery", kw=["battery", "power", "charge"], w=22, h=40,
         body=[rect(0, 4, 22, 36, 3), rect(7, 0, 8, 4)], flags="pf", fill_dir="btt"),
    dict(id="ring", kw=["ring", "circle", "frame"], w=40, h=40,
         body=[path("M20 0 a20 20 0 1 1 -0.01 0 Z M20 5 a15 15 0 1 0 0.01 0 Z", ' fill-rule="evenodd"')],
         flags="ph"),
    dict(id="wreath", kw=["wreath", "award", "prize", "laurel"], w=40, h=40,
         body=[path("M20 2 a18 18 0 1 1 -0.01 0 Z M20 7 a13 13 0 1 0 0.01 0 Z", ' fill-rule="evenodd"'),
               polygon("20,0 24,6 16,6"), polygon("4,30 10,28 8,36"), polygon("36,30 30,28 32,36")],
         flags="ph"),
]

# flags string: p=pictograph_ok, f=fillable, h=hollow, b=background_ok,
# w=fillable too? no: w means nothing; "!"=NOT pictograph_ok override.
# To keep authoring terse: p->pictograph_ok, f->fillable, h->hollow,
# b->background_ok, w->(no-op marker: "whole-ish silhouette"), !->clear pictograph_ok.


def build_flags(icon: dict) -> dict:
    s = icon.get("flags", "")
    flags = {
        "pictograph_ok": "p" in s,
        "fillable": "f" in s,
        "hollow": "h" in s,
        "background_ok": "b" in s,
        "represents": icon.get("represents", "whole" if "w" in s else "generic"),
    }
    if "!" in s:
        flags["pictograph_ok"] = False
    if flags["hollow"]:
        flags["fillable"] = False
    return flags


def main(icons_dir: str, manifest_path: str) -> None:
    icons_dir = Path(icons_dir)
    icons_dir.mkdir(parents=True, exist_ok=True)
    manifest = []
    for icon in ICONS:
        w, h = icon["w"], icon["h"]
        inner = "\n    ".join(icon["body"])
        svg = (
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}">\n'
            f'  <g fill="#111111">\n    {inner}\n  </g>\n</svg>\n'
        )
        (icons_dir / f"{icon['id']}.svg").write_text(svg, encoding="utf-8")
        entry = {
            "id": icon["id"],
            "svg_path": f"icons/{icon['id']}.svg",
            "keywords": icon["kw"],
            "aspect": round(w / h, 6),
            "fill_direction": icon.get("fill_dir", "ltr"),
        }
        entry.update(build_flags(icon))
        manifest.append(entry)

    Path(manifest_path).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    n_picto = sum(1 for e in manifest if e["pictograph_ok"])
    n_fill = sum(1 for e in manifest if e["fillable"])
    print(f"wrote {len(manifest)} icons ({n_picto} pictograph-ok, {n_fill} fillable)")


if __name__ == "__main__":
    icons = sys.argv[1] if len(sys.argv) > 1 else str(SRC / "statviz" / "data" / "icons")
    manifest = sys.argv[2] if len(sys.argv) > 2 else str(SRC / "statviz" / "data" / "icons.json")
    main(icons, manifest)
