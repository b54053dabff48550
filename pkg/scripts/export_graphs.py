#!/usr/bin/env python3
"""
Export built-in graphs - write each built-in rotation tailed graph as a
``.rot`` file together with a JSON summary of its faces.

The soccer-ball graph has no data file (it is generated from the planar
icosahedron); exporting it gives a file that can be edited and loaded back
with ``--graph <path>``.
"""
import json
import os

from fqwalk.core.rotation_graph import format_rotation_graph, genus, trace_faces
from fqwalk.tools.builtin_graphs import BUILTIN_GRAPHS


def summarize(name):
    g = BUILTIN_GRAPHS[name]()
    faces = trace_faces(g)
    return g, {
        "name": name,
        "vertices": len(g.vertices),
        "edges": g.num_edges,
        "boundary": list(g.boundary),
        "genus": genus(g),
        "faces": [
            {
                "kind": f.kind,
                "length": f.length,
                "vertices": list(f.vertex_sequence),
                "quays": list(f.quays),
                "gaps": list(f.gaps) if f.is_external else [],
            }
            for f in faces
        ],
    }


def export(names, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    summary = []
    for name in names:
        g, info = summarize(name)
        path = os.path.join(out_dir, f"{name}.rot")
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"# {name}: genus {info['genus']}, {len(info['faces'])} faces\n")
            f.write(format_rotation_graph(g))
        summary.append(info)
    return summary


if __name__ == "__main__":
    import argparse
    parser = argparse.ArgumentParser(description="Write built-in graphs as .rot files plus a face summary.")
    parser.add_argument("names", nargs="*", help="Graphs to export (default: all built-ins)")
    parser.add_argument("-o", "--output", default="graphs", help="Output directory")
    args = parser.parse_args()

    unknown = [n for n in args.names if n not in BUILTIN_GRAPHS]
    if unknown:
        parser.error(f"unknown graphs: {', '.join(unknown)}")

    summary = export(args.names or list(BUILTIN_GRAPHS), args.output)
    summary_path = os.path.join(args.output, "faces.json")
    with open(summary_path, "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, ensure_ascii=False)

    print(f"✅ Wrote {len(summary)} graphs and {summary_path}")
