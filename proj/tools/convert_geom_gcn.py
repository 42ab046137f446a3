#!/usr/bin/env python3
"""Convert a geom-gcn style dataset folder to the magneto loader layout.

Input folder holds out1_node_feature_label.txt (header, then
"id<TAB>f1,f2,...<TAB>label") and out1_graph_edges.txt (header, then
"src<TAB>dst"). Output: edges.tsv, features.csv, labels.csv, manifest.json.
"""

import argparse
import json
from pathlib import Path


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("src", type=Path)
    ap.add_argument("dst", type=Path)
    args = ap.parse_args()

    rows = {}
    with open(args.src / "out1_node_feature_label.txt") as f:
        next(f)
        for line in f:
            node, feats, label = line.rstrip("\n").split("\t")
            rows[int(node)] = (feats, int(label))
    ids = sorted(rows)
    index = {node: i for i, node in enumerate(ids)}

    edges = set()
    with open(args.src / "out1_graph_edges.txt") as f:
        next(f)
        for line in f:
            u, v = line.split()
            edges.add((index[int(u)], index[int(v)]))

    args.dst.mkdir(parents=True, exist_ok=True)
    with open(args.dst / "edges.tsv", "w") as f:
        for u, v in sorted(edges):
            f.write(f"{u}\t{v}\n")
    with open(args.dst / "features.csv", "w") as f:
        for node in ids:
            f.write(rows[node][0] + "\n")
    with open(args.dst / "labels.csv", "w") as f:
        for node in ids:
            f.write(f"{rows[node][1]}\n")
    width = len(rows[ids[0]][0].split(","))
    manifest = {
        "nodes": len(ids),
        "edges": len(edges),
        "features": width,
        "classes": len({label for _, label in rows.values()}),
    }
    with open(args.dst / "manifest.json", "w") as f:
        json.dump(manifest, f, indent=2)
    print(json.dumps(manifest))


if __name__ == "__main__":
    main()
