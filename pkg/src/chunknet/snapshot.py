"""Versioned model snapshots: a self-describing JSON file holding every
network's node table (ids, tests, images, completeness flags, naming-link
counts, child order, timestamps) and the settings needed to classify new
input (tokenizer, attention parameters).

Serialization is canonical (sorted keys, fixed separators, nodes by id), so
identical models produce byte-identical files and a load/save round trip is
exact. Files from other schema versions are rejected outright.
"""

from __future__ import annotations

import json
from pathlib import Path

from .network import DiscriminationNet, MultiModalMemory, Node

SNAPSHOT_SCHEMA_VERSION = 1


class SnapshotError(ValueError):
    pass


def _node_doc(node: Node) -> dict:
    return {
        "id": node.node_id,
        "test": list(node.test),
        "image": list(node.image),
        "complete": node.image_complete,
        "parent": node.parent,
        "children": list(node.children),
        "links": {str(k): node.naming_links[k]
                  for k in sorted(node.naming_links)},
        "created_at": node.created_at,
        "updated_at": node.updated_at,
    }


def _net_doc(net: DiscriminationNet) -> dict:
    return {
        "modality": net.modality,
        "clock_seconds": net.clock_seconds,
        "nodes": [_node_doc(n) for n in net.nodes()],
    }


def dump_memory(memory: MultiModalMemory, meta: dict | None = None) -> str:
    doc = {
        "schema_version": SNAPSHOT_SCHEMA_VERSION,
        "label_modality": memory.label_modality,
        "seconds_per_new_chunk": memory.seconds_per_new_chunk,
        "seconds_per_update": memory.seconds_per_update,
        "networks": {m: _net_doc(net)
                     for m, net in sorted(memory.nets.items())},
        "meta": meta or {},
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def save_memory(path, memory: MultiModalMemory, meta: dict | None = None) -> None:
    Path(path).write_text(dump_memory(memory, meta), encoding="utf-8")


def _load_net(doc: dict, memory: MultiModalMemory) -> DiscriminationNet:
    net = DiscriminationNet(doc["modality"],
                            memory.seconds_per_new_chunk,
                            memory.seconds_per_update)
    net.clock_seconds = doc["clock_seconds"]
    nodes = {}
    max_id = 0
    for nd in doc["nodes"]:
        node = Node(
            node_id=nd["id"],
            test=tuple(nd["test"]),
            image=tuple(nd["image"]),
            image_complete=nd["complete"],
            parent=nd["parent"],
            children=list(nd["children"]),
            naming_links={int(k): v for k, v in nd["links"].items()},
            created_at=nd["created_at"],
            updated_at=nd["updated_at"],
        )
        nodes[node.node_id] = node
        max_id = max(max_id, node.node_id)
    net._nodes = nodes
    net._next_id = max_id + 1
    return net


def load_memory(path) -> tuple[MultiModalMemory, dict]:
    """Returns the rebuilt memory and the snapshot's meta block."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise SnapshotError(f"snapshot not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"snapshot is not valid JSON: {exc}") from None
    version = doc.get("schema_version")
    if version != SNAPSHOT_SCHEMA_VERSION:
        raise SnapshotError(
            f"snapshot schema_version {version!r} is not supported "
            f"(this build reads version {SNAPSHOT_SCHEMA_VERSION})")
    memory = MultiModalMemory(
        label_modality=doc["label_modality"],
        seconds_per_new_chunk=doc["seconds_per_new_chunk"],
        seconds_per_update=doc["seconds_per_update"])
    for modality, net_doc in doc["networks"].items():
        memory.nets[modality] = _load_net(net_doc, memory)
    return memory, doc.get("meta", {})
