"""Hierarchical documentation trees.

A tree is a single root plus layers of chapters ending in leaves that carry
full text bodies. Internal nodes carry the short summaries the retrieval
judge reads; leaves carry both a summary and a body.

Serialized form (JSON):

    {"root": "<id>", "nodes": {"<id>": {"title": ..., "summary": ...,
                                        "body": ..., "children": [...]}}}

Layers are derived from the root, not stored.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class DocTreeError(Exception):
    """Base class for document-tree failures."""


class SchemaError(DocTreeError):
    """Serialized form is malformed."""


class CycleError(DocTreeError):
    """Child links loop back on themselves."""


class OrphanError(DocTreeError):
    """A child id has no node, or a node is unreachable from the root."""


class ValidationError(DocTreeError):
    """Structurally a tree, but violates a content rule."""


class UnknownNode(DocTreeError):
    """Lookup of a node id that is not in the tree."""


class MissingSummary(ValidationError):
    """Source material lacks the required title or summary line."""


@dataclass(frozen=True)
class DocNode:
    id: str
    title: str
    summary: str
    children: tuple = ()
    body: str = ""
    layer: int = 0

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class DocTree:
    root_id: str
    nodes: dict

    @property
    def depth(self) -> int:
        return max(n.layer for n in self.nodes.values())

    def node(self, node_id: str) -> DocNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no such node: {node_id!r}") from None

    def children(self, node_id: str) -> list:
        return [self.node(c) for c in self.node(node_id).children]

    def leaves(self) -> list:
        return [n for n in self.nodes.values() if n.is_leaf]


def _walk_layers(root_id: str, children_of: dict) -> dict:
    """Assign layers by walking from the root; detects cycles and orphans."""
    layer = {root_id: 0}
    order = [root_id]
    seen_child_ids = set()
    frontier = [root_id]
    while frontier:
        nxt = []
        for nid in frontier:
            for cid in children_of[nid]:
                if cid not in children_of:
                    raise OrphanError(f"child id has no node: {cid!r}")
                if cid in seen_child_ids:
                    raise SchemaError(f"node has more than one parent: {cid!r}")
                seen_child_ids.add(cid)
                if cid in layer:
                    raise CycleError(f"cycle through node: {cid!r}")
                layer[cid] = layer[nid] + 1
                order.append(cid)
                nxt.append(cid)
        frontier = nxt
    unreachable = set(children_of) - set(layer)
    if unreachable:
        raise OrphanError(f"nodes unreachable from root: {sorted(unreachable)!r}")
    return layer


def build_tree(root_id: str, raw_nodes: dict) -> DocTree:
    """Assemble and validate a DocTree from plain node dicts."""
    if root_id not in raw_nodes:
        raise SchemaError(f"root id has no node: {root_id!r}")
    children_of = {}
    for nid, raw in raw_nodes.items():
        kids = list(raw.get("children", ()))
        if len(set(kids)) != len(kids):
            raise SchemaError(f"duplicate child ids under {nid!r}")
        children_of[nid] = kids
    layers = _walk_layers(root_id, children_of)
    nodes = {}
    for nid, raw in raw_nodes.items():
        try:
            node = DocNode(
                id=nid,
                title=str(raw["title"]),
                summary=str(raw.get("summary", "")),
                children=tuple(children_of[nid]),
                body=str(raw.get("body", "")),
                layer=layers[nid],
            )
        except KeyError as exc:
            raise SchemaError(f"node {nid!r} missing field {exc}") from None
        nodes[nid] = node
    tree = DocTree(root_id=root_id, nodes=nodes)
    validate(tree)
    return tree


def validate(tree: DocTree) -> None:
    """Content rules: at least one leaf below the root; summaries on every
    judged node; bodies on every leaf."""
    root = tree.node(tree.root_id)
    if root.is_leaf:
        raise ValidationError("tree needs at least one leaf below the root")
    for node in tree.nodes.values():
        if node.id == tree.root_id:
            continue
        if not node.summary.strip():
            raise MissingSummary(f"node {node.id!r} has an empty summary")
        if node.is_leaf and not node.body.strip():
            raise ValidationError(f"leaf {node.id!r} has an empty body")


def loads(text: str) -> DocTree:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(raw, dict) or "root" not in raw or "nodes" not in raw:
        raise SchemaError("expected an object with 'root' and 'nodes'")
    if not isinstance(raw["nodes"], dict):
        raise SchemaError("'nodes' must be an object keyed by node id")
    return build_tree(str(raw["root"]), raw["nodes"])


def load(path) -> DocTree:
    return loads(Path(path).read_text(encoding="utf-8"))


def dumps(tree: DocTree) -> str:
    raw = {
        "root": tree.root_id,
        "nodes": {
            n.id: {
                "title": n.title,
                "summary": n.summary,
                "body": n.body,
                "children": list(n.children),
            }
            for n in tree.nodes.values()
        },
    }
    return json.dumps(raw, indent=2, sort_keys=True)


def save(tree: DocTree, path) -> None:
    Path(path).write_text(dumps(tree), encoding="utf-8")


def _parse_front_matter(text: str, origin: str) -> tuple:
    """First line '# Title', second line the summary, remainder the body."""
    lines = text.splitlines()
    if not lines or not lines[0].lstrip().startswith("#"):
        raise MissingSummary(f"{origin}: first line must be '# <title>'")
    title = lines[0].lstrip("# ").strip()
    if not title:
        raise MissingSummary(f"{origin}: empty title")
    summary = lines[1].strip() if len(lines) > 1 else ""
    if not summary:
        raise MissingSummary(f"{origin}: missing summary line")
    body = "\n".join(lines[2:]).strip()
    return title, summary, body


def build_from_directory(root_dir) -> DocTree:
    """Turn a directory of folders and text files into a DocTree.

    Folders become internal nodes and need an ``_index.md`` holding their
    title and summary; files become leaves. The directory itself is the
    root. Children are ordered by filename.
    """
    root_dir = Path(root_dir)
    if not root_dir.is_dir():
        raise SchemaError(f"not a directory: {root_dir}")
    raw_nodes = {}

    def node_id(path: Path) -> str:
        rel = path.relative_to(root_dir)
        parts = [p.replace(" ", "_") for p in rel.parts]
        if parts and parts[-1].endswith((".md", ".txt")):
            parts[-1] = parts[-1].rsplit(".", 1)[0]
        return ".".join(parts) if parts else "root"

    def visit_dir(path: Path) -> str:
        nid = node_id(path)
        index = path / "_index.md"
        if nid == "root":
            title, summary = root_dir.name, root_dir.name
            if index.is_file():
                title, summary, _ = _parse_front_matter(
                    index.read_text(encoding="utf-8"), str(index)
                )
        else:
            if not index.is_file():
                raise MissingSummary(f"{path}: folder needs an _index.md")
            title, summary, _ = _parse_front_matter(
                index.read_text(encoding="utf-8"), str(index)
            )
        kids = []
        for child in sorted(path.iterdir(), key=lambda p: p.name):
            if child.name.startswith("_") or child.name.startswith("."):
                continue
            if child.is_dir():
                kids.append(visit_dir(child))
            elif child.suffix in (".md", ".txt"):
                kids.append(visit_file(child))
        raw_nodes[nid] = {
            "title": title,
            "summary": summary,
            "body": "",
            "children": kids,
        }
        return nid

    def visit_file(path: Path) -> str:
        nid = node_id(path)
        title, summary, body = _parse_front_matter(
            path.read_text(encoding="utf-8"), str(path)
        )
        if not body:
            raise MissingSummary(f"{path}: leaf file has no body text")
        raw_nodes[nid] = {
            "title": title,
            "summary": summary,
            "body": body,
            "children": [],
        }
        return nid

    root_id = visit_dir(root_dir)
    return build_tree(root_id, raw_nodes)
