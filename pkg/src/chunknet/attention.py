"""Sliding attention window, chunk activation, and the classification commands.

A stimulus is scanned by a window of at most ``span`` tokens that advances by
``step`` tokens and, before each advance, progressively shrinks from the front
down to ``min_fetch`` tokens. Every fetch is recognised against the trained
network; per window position only the largest chunk retrieved gets to vote.
A chunk votes for the labels it holds naming links to, contributing its size
split across labels in proportion to the link counts. Votes normalise into
confidence scores: C(label | stimulus) = activation_label / total activation.

This read side never mutates the network, so any number of stimuli can be
classified concurrently against one frozen model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .network import ROOT_ID, DiscriminationNet, MultiModalMemory
from .patterns import Pattern


class AttentionError(ValueError):
    pass


@dataclass(frozen=True)
class AttentionConfig:
    span: int = 20          # maximum window size, in tokens
    step: int = 1           # window advance per position
    min_fetch: int = 2      # smallest shrunken fetch

    def __post_init__(self):
        if self.step < 1:
            raise AttentionError("attention step must be >= 1")
        if not 2 <= self.min_fetch <= self.span:
            raise AttentionError(
                f"need 2 <= min_fetch <= span, got min_fetch={self.min_fetch} "
                f"span={self.span}")


def window_groups(stimulus: Pattern, cfg: AttentionConfig) -> list[list[Pattern]]:
    """Fetches grouped by window position, in emission order.

    Position ``o`` covers tokens [o, min(o + span, end)); its fetches keep the
    right edge fixed and shrink from the left down to ``min_fetch`` tokens.
    A window already emitted at an earlier position (tail truncation makes
    later positions repeat suffixes) is not emitted again.
    """
    if not stimulus:
        raise AttentionError("cannot scan an empty stimulus")
    n = len(stimulus)
    seen: set[tuple[int, int]] = set()
    groups: list[list[Pattern]] = []
    for offset in range(0, n, cfg.step):
        end = min(offset + cfg.span, n)
        group: list[Pattern] = []
        for start in range(offset, end - cfg.min_fetch + 1):
            if (start, end) in seen:
                continue
            seen.add((start, end))
            group.append(Pattern(stimulus.modality,
                                 stimulus.tokens[start:end]))
        if group:
            groups.append(group)
    return groups


def window_fetches(stimulus: Pattern, cfg: AttentionConfig) -> list[Pattern]:
    """All fetches the attention window emits for a stimulus, in order."""
    return [fetch for group in window_groups(stimulus, cfg) for fetch in group]


@dataclass
class ActivationTally:
    """Per-label accumulated chunk activation for one stimulus."""

    activations: dict[int, float] = field(default_factory=dict)  # label node id -> a_i

    def add(self, label_node_id: int, amount: float) -> None:
        self.activations[label_node_id] = \
            self.activations.get(label_node_id, 0.0) + amount

    @property
    def total(self) -> float:
        return sum(self.activations.values())


@dataclass(frozen=True)
class Classification:
    """Ranked (label, confidence) list; empty with the marker set when no
    chunk activation occurred (uniform scores are never fabricated)."""

    entries: tuple[tuple[str, float], ...]
    no_activation: bool

    @property
    def top(self) -> str | None:
        return self.entries[0][0] if self.entries else None

    @property
    def top2(self) -> tuple[str | None, str | None]:
        first = self.entries[0][0] if len(self.entries) >= 1 else None
        second = self.entries[1][0] if len(self.entries) >= 2 else None
        return first, second

    def confidence(self, label: str) -> float:
        for name, conf in self.entries:
            if name == label:
                return conf
        return 0.0


def _contribute(net: DiscriminationNet, tally: ActivationTally, node_id) -> None:
    node = net.node(node_id)
    if not node.naming_links:
        return
    size = net.chunk_size(node_id)
    total_links = sum(node.naming_links.values())
    for label_id, count in node.naming_links.items():
        tally.add(label_id, size * (count / total_links))


def _contribute_multiplicative(net, tally, node_id) -> None:
    node = net.node(node_id)
    size = net.chunk_size(node_id)
    for label_id, count in node.naming_links.items():
        tally.add(label_id, size * count)


def accumulate(net: DiscriminationNet, tally: ActivationTally,
               fetch: Pattern) -> None:
    """Recognise one fetch and let the retrieved chunk vote.

    Chunks without naming links (and the root) contribute nothing.
    """
    node = net.recognise(fetch)
    if node.node_id == ROOT_ID:
        return
    _contribute(net, tally, node.node_id)


def confidence(tally: ActivationTally, memory: MultiModalMemory) -> Classification:
    """Normalise a tally into ranked confidences, C(c_i|x) = a_i / sum(a_k).

    Ties are broken by label-chunk creation order (node id), oldest first,
    so results are reproducible; the tied scores remain visible in the output
    rather than being hidden.
    """
    total = tally.total
    if total <= 0.0:
        return Classification(entries=(), no_activation=True)
    ranked = sorted(tally.activations.items(),
                    key=lambda item: (-item[1], item[0]))
    entries = tuple((memory.label_name(label_id), a / total)
                    for label_id, a in ranked)
    return Classification(entries=entries, no_activation=False)


def categorise(memory: MultiModalMemory, stimulus: Pattern,
               cfg: AttentionConfig,
               link_weighting: str = "proportional") -> Classification:
    """Scan, let per-position winners vote, normalise. Read-only.

    Per window position, the single largest voting chunk (a recognised node
    that carries naming links) among that position's fetches is selected:
    bigger chunks are rewarded, smaller knowledge structures are penalised,
    and nested sub-chunks of one span never double-vote. Chunks without
    links are not voters and never block a position.
    """
    net = memory.net(stimulus.modality)
    tally = ActivationTally()
    contribute = (_contribute if link_weighting == "proportional"
                  else _contribute_multiplicative)
    if link_weighting not in ("proportional", "multiplicative"):
        raise AttentionError(f"unknown link weighting {link_weighting!r}")
    for group in window_groups(stimulus, cfg):
        best_id = None
        best_size = 0
        for fetch in group:
            node = net.recognise(fetch)
            if node.node_id == ROOT_ID or not node.naming_links:
                continue
            size = net.chunk_size(node.node_id)
            if size > best_size:
                best_size = size
                best_id = node.node_id
        if best_id is not None:
            contribute(net, tally, best_id)
    return confidence(tally, memory)


def retrieve(net: DiscriminationNet, stimulus: Pattern) -> Pattern:
    """The most similar stored chunk: the recognised node's image
    (empty when nothing is recognised)."""
    node = net.recognise(stimulus)
    return Pattern(net.modality, node.image)
