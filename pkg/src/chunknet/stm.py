"""Short-term memory: bounded FIFO queues of chunk pointers, one per modality.

Capacity is counted in chunks, not primitives. The most recent entry sits at
the head; overflow evicts the oldest. When fully learned chunks co-occupy the
queues of two modalities, the trainer turns that co-occupancy into a naming
link; with STM disconnected, recognition keeps working but no further
categorical learning is possible.
"""

from __future__ import annotations

from collections import deque

from .network import ROOT_ID, DiscriminationNet


class StmError(ValueError):
    pass


class StmQueue:
    def __init__(self, modality: str, capacity: int = 5):
        if not 2 <= capacity <= 9:
            raise StmError(f"STM capacity must be in [2, 9], got {capacity}")
        self.modality = modality
        self.capacity = capacity
        self._slots: deque[int] = deque()  # head (most recent) at index 0

    def __len__(self) -> int:
        return len(self._slots)

    @property
    def slots(self) -> list[int]:
        return list(self._slots)

    @property
    def head(self) -> int | None:
        return self._slots[0] if self._slots else None

    def push(self, node_id: int) -> int | None:
        """Put a chunk pointer at the head; returns the evicted id, if any.

        Root pointers are dropped silently: "recognised as nothing" carries
        no chunk to hold or associate.
        """
        if node_id == ROOT_ID:
            return None
        self._slots.appendleft(node_id)
        if len(self._slots) > self.capacity:
            return self._slots.pop()
        return None

    def clear(self) -> None:
        self._slots.clear()

    def dump(self, net: DiscriminationNet) -> list[str]:
        """Debug view, head first: id, contents, and learned state."""
        out = []
        for node_id in self._slots:
            contents = net.contents(node_id).to_line()
            state = "complete" if net.is_fully_learned(node_id) else "partial"
            out.append(f"{node_id}\t{contents}\t{state}")
        return out


def co_occupancy(visual_q: StmQueue, verbal_q: StmQueue,
                 visual_net: DiscriminationNet,
                 verbal_net: DiscriminationNet,
                 pairing: str = "head") -> tuple[int, int] | None:
    """The chunk pair eligible for a naming link, if any.

    ``head`` pairing looks only at the two queue heads (the most recent chunk
    of each modality); ``position`` pairing scans matching slot positions from
    the head down and returns the first pair passing the fully-learned gate.
    """
    if pairing == "head":
        candidates = [(visual_q.head, verbal_q.head)]
    elif pairing == "position":
        candidates = list(zip(visual_q.slots, verbal_q.slots))
    else:
        raise StmError(f"unknown STM pairing mode {pairing!r}")
    for vis_id, verb_id in candidates:
        if vis_id is None or verb_id is None:
            continue
        if visual_net.is_fully_learned(vis_id) and \
                verbal_net.is_fully_learned(verb_id):
            return vis_id, verb_id
    return None
