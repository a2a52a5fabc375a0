"""Graphviz DOT text for flows, juxtapositions and factorization trees."""
from __future__ import annotations

from typing import Sequence

from .flows import L, Flow


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _flow_body(f: Flow, prefix: str, lines: list, left_ids: list, right_ids: list) -> None:
    for side, labels, ids in (("L", f.l_vertices, left_ids), ("R", f.r_vertices, right_ids)):
        for i in range(len(labels)):
            ids.append(f"{prefix}{side}{i}")
    for e in f.edges:
        src = (left_ids if e.src[0] == L else right_ids)[e.src[1]]
        dst = (left_ids if e.dst[0] == L else right_ids)[e.dst[1]]
        style = "bold" if e.productive else "dashed"
        label = f' label={_q(e.tag)}' if e.tag else ""
        lines.append(f"  {_q(src)} -> {_q(dst)} [style={style}{label}];")


def flow_to_dot(f: Flow, name: str = "flow") -> str:
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    if f.bottom:
        lines.append('  bottom [label="⊥" shape=box];')
        return "\n".join(lines + ["}"]) + "\n"
    left, right = [], []
    _flow_body(f, "", lines, left, right)
    for ids, labels, side in ((left, f.l_vertices, "L"), (right, f.r_vertices, "R")):
        if not ids:
            continue
        lines.append(f"  subgraph {_q('cluster_' + side)} {{ label={_q(side)};")
        for k, (i, lab) in enumerate(zip(ids, labels)):
            lines.append(f"    {_q(i)} [label={_q(f'{side}{k}:{lab}')}];")
        lines.append("  }")
    return "\n".join(lines + ["}"]) + "\n"


def juxtaposition_to_dot(flows: Sequence[Flow], name: str = "juxtaposition") -> str:
    """Flows side by side; the R side of flow k and the L side of flow k+1 share one group."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    groups: list = []
    for k, f in enumerate(flows):
        if k == 0:
            left = [f"g0_{i}" for i in range(len(f.l_vertices))]
            groups.append((left, f.l_vertices))
        else:
            left = groups[-1][0]
        right = [f"g{k + 1}_{i}" for i in range(len(f.r_vertices))]
        groups.append((right, f.r_vertices))
        for e in f.edges:
            src = (left if e.src[0] == L else right)[e.src[1]]
            dst = (left if e.dst[0] == L else right)[e.dst[1]]
            style = "bold" if e.productive else "dashed"
            lines.append(f"  {_q(src)} -> {_q(dst)} [style={style} label={_q(k)}];")
    for g, (ids, labels) in enumerate(groups):
        lines.append(f"  subgraph {_q(f'cluster_{g}')} {{ label={_q(f'cut group {g}')};")
        for i, lab in zip(ids, labels):
            lines.append(f"    {_q(i)} [label={_q(lab)}];")
        lines.append("  }")
    return "\n".join(lines + ["}"]) + "\n"


def tree_to_dot(root, name: str = "tree") -> str:
    lines = [f"digraph {_q(name)} {{", "  node [shape=box];"]
    ids: dict = {}
    for k, node in enumerate(root.nodes()):
        ids[id(node)] = f"n{k}"
        text = f"{node.kind} [{node.lo},{node.hi}) h={node.height}"
        lines.append(f"  {ids[id(node)]} [label={_q(text)}];")
    for node in root.nodes():
        for c in node.children:
            lines.append(f"  {ids[id(node)]} -> {ids[id(c)]};")
    return "\n".join(lines + ["}"]) + "\n"
