#!/usr/bin/env python3
"""Convert public citation/web graph dumps into the directory layout read by ugs.

  convert_dataset.py linqs  --content cora.content --cites cora.cites --name cora  --out tests/fixtures/cora
  convert_dataset.py webkb  --nodes out1_node_feature_label.txt --edges out1_graph_edges.txt \
                            --name texas --out tests/fixtures/texas

linqs: tab-separated "<paper id> <binary features...> <class label>" rows and
"<cited> <citing>" pairs. webkb: the geom-gcn files, a header line then
"<node>\t<comma-separated features>\t<label>" and "<u>\t<v>" pairs.

Edges are made undirected; self-loops and duplicates are dropped.
"""

import argparse
import json
import os
import sys


def write(out, name, features, labels, edges):
    os.makedirs(out, exist_ok=True)
    n = len(features)
    d = len(features[0]) if n else 0
    if any(len(row) != d for row in features):
        sys.exit("ragged feature rows")
    classes = sorted(set(labels), key=lambda c: (0, int(c), "") if c.lstrip("-").isdigit() else (1, 0, c))
    class_index = {c: i for i, c in enumerate(classes)}
    pairs = sorted({(min(u, v), max(u, v)) for u, v in edges if u != v})
    with open(os.path.join(out, "meta.json"), "w") as f:
        json.dump({"name": name, "n_nodes": n, "n_features": d, "n_classes": len(classes),
                   "edge_convention": "unordered", "n_edges": len(pairs)}, f, indent=2)
        f.write("\n")
    with open(os.path.join(out, "edges.tsv"), "w") as f:
        f.writelines(f"{u}\t{v}\n" for u, v in pairs)
    with open(os.path.join(out, "features.csv"), "w") as f:
        f.writelines(",".join(row) + "\n" for row in features)
    with open(os.path.join(out, "labels.csv"), "w") as f:
        f.writelines(f"{class_index[l]}\n" for l in labels)
    print(f"{name}: {n} nodes, {len(pairs)} edges, {d} features, {len(classes)} classes -> {out}")


def linqs(args):
    ids, features, labels = {}, [], []
    with open(args.content) as f:
        for line in f:
            parts = line.split()
            if not parts:
                continue
            ids[parts[0]] = len(ids)
            features.append(parts[1:-1])
            labels.append(parts[-1])
    edges, skipped = [], 0
    with open(args.cites) as f:
        for line in f:
            parts = line.split()
            if len(parts) != 2:
                continue
            if parts[0] not in ids or parts[1] not in ids:
                skipped += 1
                continue
            edges.append((ids[parts[0]], ids[parts[1]]))
    if skipped:
        print(f"skipped {skipped} citations to unknown papers", file=sys.stderr)
    write(args.out, args.name, features, labels, edges)


def webkb(args):
    rows = {}
    with open(args.nodes) as f:
        next(f)
        for line in f:
            node, feats, label = line.rstrip("\n").split("\t")
            rows[int(node)] = (feats.split(","), label)
    order = sorted(rows)
    if order != list(range(len(order))):
        sys.exit("node ids are not contiguous from 0")
    edges = []
    with open(args.edges) as f:
        next(f)
        for line in f:
            u, v = line.split()
            edges.append((int(u), int(v)))
    write(args.out, args.name, [rows[i][0] for i in order], [rows[i][1] for i in order], edges)


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="format", required=True)
    p = sub.add_parser("linqs")
    p.add_argument("--content", required=True)
    p.add_argument("--cites", required=True)
    p.set_defaults(run=linqs)
    p = sub.add_parser("webkb")
    p.add_argument("--nodes", required=True)
    p.add_argument("--edges", required=True)
    p.set_defaults(run=webkb)
    for p in sub.choices.values():
        p.add_argument("--name", required=True)
        p.add_argument("--out", required=True)
    args = parser.parse_args()
    args.run(args)


if __name__ == "__main__":
    main()
