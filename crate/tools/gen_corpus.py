#!/usr/bin/env python3
"""Regenerate crates/core/data/corpus.json from the KnotInfo/LinkInfo tables.

Requires the `database_knotinfo` package (pip install database_knotinfo).
Knots: 3_1 .. 8_21. Links: L2a1 .. L7n2, using the first oriented variant
listed for each link ({0} or {0,0}, ...). The unknot is added as a free loop.
"""
import csv
import json
import os
import re
import sys

import database_knotinfo

csv.field_size_limit(10**9)
base = os.path.join(os.path.dirname(database_knotinfo.__file__), "csv_data")


def rows(fname):
    with open(os.path.join(base, fname), encoding="utf-8") as fh:
        yield from csv.DictReader(fh, delimiter="|")


def knot_key(name):
    c, i = name.split("_")
    return (int(c), int(i))


knots = []
for row in rows("knotinfo_data_complete.csv"):
    m = re.fullmatch(r"(\d+)_(\d+)", row["name"])
    if not m or not (3 <= int(m.group(1)) <= 8):
        continue
    knots.append({"name": row["name"], "pd": json.loads(row["pd_notation"])})
knots.sort(key=lambda k: knot_key(k["name"]))

links, seen = [], set()
for row in rows("linkinfo_data_complete.csv"):
    m = re.fullmatch(r"(L(\d+)([an])(\d+))\{[0-9,]*\}", row["name"])
    if not m or int(m.group(2)) > 7 or m.group(1) in seen:
        continue
    seen.add(m.group(1))
    pd = json.loads(row["pd_notation_vector"].replace("{", "[").replace("}", "]"))
    links.append({"name": m.group(1), "pd": pd, "_key": (int(m.group(2)), m.group(3), int(m.group(4)))})
links.sort(key=lambda l: l.pop("_key"))

corpus = [{"name": "0_1", "arcs": 0, "free_loops": 1, "crossings": []}] + knots + links
out = sys.argv[1] if len(sys.argv) > 1 else "crates/core/data/corpus.json"
with open(out, "w") as fh:
    fh.write("[\n")
    fh.write(",\n".join(json.dumps(d, separators=(",", ":")) for d in corpus))
    fh.write("\n]\n")
print(f"wrote {len(corpus)} diagrams ({len(knots)} knots, {len(links)} links) to {out}")
