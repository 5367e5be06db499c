"""The discrimination network: chunk storage, retrieval, and incremental learning.

The long-term memory for one modality is a tree of nodes. Each non-root node
carries a *test link* (a short pattern checked against the remaining input
during traversal) and an *image* (the pattern the node can reproduce when
reached). The concatenation of test links on the root-to-node path is the
node's *contents*; contents and image are the extrinsic and intrinsic
descriptions of a chunk.

Retrieval (``recognise``) sorts an input pattern down the tree: at each node,
the first child (in insertion order) whose test link is a prefix of the
remaining input consumes that prefix, until no child matches. The deepest node
reached is returned; the root means "recognised as nothing".

Learning is a four-stage process per presented pattern:

1. sort the pattern to a node,
2. compare that node's image with the pattern,
3. if the image matches (prefix of the pattern, or exactly equal when the
   image is complete), *familiarise*: grow an image by one primitive,
4. otherwise *discriminate*: add one new node (one new test link).

Familiarisation increases how much a chunk can reproduce; discrimination
increases how many chunks can be told apart. Exactly one structural change
happens per learn call.

An image is *complete* when it equals a full presented pattern (the end-marker
surrogate). Complete images stop matching longer patterns, which is what turns
further presentations of extensions into single-shot discriminations of new
chunks rather than endless image growth.

Cross-modality *naming links* (counted associations from a chunk to a label
chunk in another modality) hang off nodes here; they are created by the
trainer when fully learned chunks co-occupy short-term memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .patterns import Pattern, PatternError, difference, matches

ROOT_ID = 0

CREATED_NODE = "created_node"
FAMILIARISED = "familiarised"
NO_CHANGE = "no_change"


class NetworkError(ValueError):
    """Raised on misuse of the network API."""


@dataclass
class Node:
    node_id: int
    test: tuple[str, ...]            # () only for the root
    image: tuple[str, ...]
    image_complete: bool = False
    parent: int | None = None
    children: list[int] = field(default_factory=list)
    naming_links: dict[int, int] = field(default_factory=dict)
    created_at: float = 0.0
    updated_at: float = 0.0


@dataclass(frozen=True)
class LearnEvent:
    kind: str                        # created_node | familiarised | no_change
    node_id: int
    simulated_cost_seconds: float


class DiscriminationNet:
    """One modality's tree of chunks plus its simulated learning clock."""

    def __init__(self, modality: str, seconds_per_new_chunk: float = 10.0,
                 seconds_per_update: float = 2.0):
        self.modality = modality
        self.seconds_per_new_chunk = seconds_per_new_chunk
        self.seconds_per_update = seconds_per_update
        self.clock_seconds = 0.0
        root = Node(node_id=ROOT_ID, test=(), image=())
        self._nodes: dict[int, Node] = {ROOT_ID: root}
        self._next_id = 1

    # -- plumbing ---------------------------------------------------------

    @property
    def root(self) -> Node:
        return self._nodes[ROOT_ID]

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    def node(self, node_id: int) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise NetworkError(f"unknown node id {node_id}") from None

    def nodes(self) -> list[Node]:
        return [self._nodes[i] for i in sorted(self._nodes)]

    def contents(self, node_id: int) -> Pattern:
        """Concatenated test links on the root-to-node path."""
        toks: list[str] = []
        node = self.node(node_id)
        chain = []
        while node.parent is not None:
            chain.append(node.test)
            node = self._nodes[node.parent]
        for test in reversed(chain):
            toks.extend(test)
        return Pattern(self.modality, tuple(toks))

    def image(self, node_id: int) -> Pattern:
        return Pattern(self.modality, self.node(node_id).image)

    def chunk_size(self, node_id: int) -> int:
        """Primitive count of the chunk: its image when one has formed, its
        contents otherwise. Root is 0. (A non-empty image is never shorter
        than the contents, so this is the larger of the two descriptions.)"""
        if node_id == ROOT_ID:
            return 0
        node = self.node(node_id)
        if node.image:
            return len(node.image)
        return len(self.contents(node_id))

    def is_fully_learned(self, node_id: int) -> bool:
        """Gate used for naming-link formation: the image equals a pattern
        that was actually presented in full."""
        return self.node(node_id).image_complete

    def _check_modality(self, p: Pattern) -> None:
        if p.modality != self.modality:
            raise PatternError(
                f"pattern modality {p.modality!r} does not match "
                f"network modality {self.modality!r}"
            )

    def _new_node(self, parent: Node, test: tuple[str, ...],
                  image: tuple[str, ...], complete: bool) -> Node:
        for cid in parent.children:
            if self._nodes[cid].test == test:
                raise NetworkError(
                    f"duplicate sibling test link {test!r} under node "
                    f"{parent.node_id}"
                )
        self.clock_seconds += self.seconds_per_new_chunk
        node = Node(node_id=self._next_id, test=test, image=image,
                    image_complete=complete, parent=parent.node_id,
                    created_at=self.clock_seconds,
                    updated_at=self.clock_seconds)
        self._next_id += 1
        self._nodes[node.node_id] = node
        parent.children.append(node.node_id)
        return node

    def _append_to_image(self, node: Node, token: str,
                         learned: Pattern | None) -> None:
        # ``learned`` is the pattern presented in full this call, when the
        # append target is the node it was sorted to; a cross-append driven
        # by a difference never completes an image by itself.
        self.clock_seconds += self.seconds_per_update
        node.image = node.image + (token,)
        if learned is not None and node.image == learned.tokens:
            node.image_complete = True
        node.updated_at = self.clock_seconds

    # -- retrieval --------------------------------------------------------

    def recognise(self, p: Pattern) -> Node:
        """Sort a pattern through the tree; never mutates the net.

        Returns the deepest node whose path of test links prefixes the input,
        the root when nothing is recognised (including the empty pattern).
        """
        self._check_modality(p)
        node = self.root
        remaining = p.tokens
        while True:
            advanced = False
            for cid in node.children:
                child = self._nodes[cid]
                if remaining[: len(child.test)] == child.test:
                    node = child
                    remaining = remaining[len(child.test):]
                    advanced = True
                    break
            if not advanced:
                return node

    def _remainder_at(self, node: Node, p: Pattern) -> Pattern:
        """Input left unconsumed once recognise(p) has reached ``node``."""
        return difference(p, self.contents(node.node_id))

    # -- learning ---------------------------------------------------------

    def _image_matches(self, node: Node, p: Pattern) -> bool:
        # A complete image carries the end marker, so it only matches the
        # pattern it equals; an incomplete image matches any extension.
        image = Pattern(self.modality, node.image)
        if node.image_complete:
            return image.tokens == p.tokens
        return matches(image, p)

    def learn(self, p: Pattern) -> LearnEvent:
        """One pass of the four-stage learning process for ``p``."""
        self._check_modality(p)
        if not p:
            raise NetworkError("cannot learn an empty pattern")
        node = self.recognise(p)
        if self._image_matches(node, p):
            return self.familiarise(node, p)
        return self.discriminate(node, p)

    def familiarise(self, node: Node, p: Pattern) -> LearnEvent:
        """Add information to an existing chunk (at most one primitive).

        The difference between the pattern and the node's image is sorted
        through the net; four outcomes:

        1. no difference: nothing to do;
        2. the root is retrieved: a new primitive is created for the
           difference's first token;
        3. the retrieved image is empty, or longer than the difference, or
           complete (a terminated image counts its end marker and can never
           be appended to): the difference's first token is appended to the
           *original* node's image;
        4. otherwise the retrieved node's image is appended instead.
        """
        d = difference(p, Pattern(self.modality, node.image))
        if not d:
            # The image reproduces the whole presented pattern: nothing to
            # add, but the end marker is now warranted if still missing.
            if node.image == p.tokens and not node.image_complete:
                node.image_complete = True
            return LearnEvent(NO_CHANGE, node.node_id, 0.0)
        ret = self.recognise(d)
        if ret.node_id == ROOT_ID:
            new = self._new_node(self.root, (d.tokens[0],), (), False)
            return LearnEvent(CREATED_NODE, new.node_id,
                              self.seconds_per_new_chunk)
        if not ret.image or ret.image_complete or len(ret.image) > len(d):
            self._append_to_image(node, d.tokens[0], p)
            return LearnEvent(FAMILIARISED, node.node_id,
                              self.seconds_per_update)
        self._append_to_image(ret, d.tokens[0],
                              p if ret.node_id == node.node_id else None)
        return LearnEvent(FAMILIARISED, ret.node_id, self.seconds_per_update)

    def discriminate(self, node: Node, p: Pattern) -> LearnEvent:
        """Add one new node below ``node`` (or a new primitive at the root).

        The unconsumed remainder of the pattern at ``node`` is sorted through
        the net. Root retrieved: the remainder's first token becomes a new
        root primitive. A node with an empty image: the remainder is
        familiarised into it. A node with a filled image: a new child of
        ``node`` is created whose test link is that image with the end marker
        dropped (falling back to the retrieved node's contents when the image
        has grown past the remainder), and whose image is the new node's own
        path of tests.
        """
        d = self._remainder_at(node, p)
        if not d:
            # Pattern already fully encoded by this node's path; its image
            # has simply grown past the pattern. Nothing new to store.
            return LearnEvent(NO_CHANGE, node.node_id, 0.0)
        ret = self.recognise(d)
        if ret.node_id == ROOT_ID:
            new = self._new_node(self.root, (d.tokens[0],), (), False)
            return LearnEvent(CREATED_NODE, new.node_id,
                              self.seconds_per_new_chunk)
        if not ret.image:
            return self.familiarise(ret, d)
        test = ret.image
        if d.tokens[: len(test)] != test:
            # Retrieved image is not a prefix of the remainder (it grew past
            # the recognised contents); the contents are, always.
            test = self.contents(ret.node_id).tokens
        image = self.contents(node.node_id).tokens + test
        new = self._new_node(node, test, image, image == p.tokens)
        return LearnEvent(CREATED_NODE, new.node_id,
                          self.seconds_per_new_chunk)

    # -- naming links -----------------------------------------------------

    def add_naming_link(self, from_node_id: int, label_node_id: int) -> None:
        """Count one co-occurrence between a chunk here and a label chunk."""
        if from_node_id == ROOT_ID or label_node_id == ROOT_ID:
            raise NetworkError("naming links never involve a root node")
        node = self.node(from_node_id)
        node.naming_links[label_node_id] = \
            node.naming_links.get(label_node_id, 0) + 1


class MultiModalMemory:
    """All per-modality networks of one model, plus the link convention.

    Naming links are stored on nodes of any non-label modality and point at
    node ids in the label modality's network.
    """

    def __init__(self, label_modality: str = "verbal",
                 seconds_per_new_chunk: float = 10.0,
                 seconds_per_update: float = 2.0):
        self.label_modality = label_modality
        self.seconds_per_new_chunk = seconds_per_new_chunk
        self.seconds_per_update = seconds_per_update
        self.nets: dict[str, DiscriminationNet] = {}

    def net(self, modality: str) -> DiscriminationNet:
        if modality not in self.nets:
            self.nets[modality] = DiscriminationNet(
                modality, self.seconds_per_new_chunk, self.seconds_per_update)
        return self.nets[modality]

    @property
    def label_net(self) -> DiscriminationNet:
        return self.net(self.label_modality)

    def add_naming_link(self, modality: str, node_id: int,
                        label_node_id: int) -> None:
        self.label_net.node(label_node_id)  # must exist
        if label_node_id == ROOT_ID:
            raise NetworkError("naming links never involve a root node")
        self.net(modality).add_naming_link(node_id, label_node_id)

    def label_name(self, label_node_id: int) -> str:
        """Human-readable name of a label chunk (its contents)."""
        return self.label_net.contents(label_node_id).to_line()

    @property
    def simulated_seconds(self) -> float:
        return sum(net.clock_seconds for net in self.nets.values())
