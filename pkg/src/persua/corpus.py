"""Data model, JSONL file format, and validation for the labeled argument corpus.

A corpus is a collection of annotated forum replies ("posts"). Each post is
segmented into sentences; every sentence carries exactly one component label
(claim, premise, or non-argument) and premises additionally carry one to four
persuasive-strategy labels. Directed support edges connect premises to the
claims they back. Posts carry a non-negative delta score used to rank examples
by persuasiveness.

File format is JSON-Lines, one post per line (see ``serialize_post`` for the
canonical encoding). All span offsets are byte offsets into the UTF-8 encoding
of the post body.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Hashable, IO, Iterable, Sequence


class StrategyLabel(str, Enum):
    """Persuasive strategy carried by a premise sentence."""

    LOGOS = "logos"
    PATHOS = "pathos"
    ETHOS = "ethos"
    EVIDENCE = "evidence"


class ComponentLabel(str, Enum):
    """Role a sentence plays in the argument."""

    CLAIM = "claim"
    PREMISE = "premise"
    NON_ARGUMENT = "non_argument"


#: Canonical ordering used whenever strategy sets are serialized.
STRATEGY_ORDER: tuple[StrategyLabel, ...] = (
    StrategyLabel.LOGOS,
    StrategyLabel.PATHOS,
    StrategyLabel.ETHOS,
    StrategyLabel.EVIDENCE,
)


@dataclass(frozen=True)
class Sentence:
    """One sentence of a post body. ``start``/``end`` are UTF-8 byte offsets."""

    index: int
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class SentenceAnnotation:
    sentence_index: int
    component: ComponentLabel
    strategies: frozenset[StrategyLabel] = frozenset()


@dataclass(frozen=True)
class SupportEdge:
    """Directed premise -> claim link. ``label`` is 1 (support) or 0 (non-support)."""

    premise_index: int
    claim_index: int
    label: int


@dataclass(frozen=True)
class AnnotatedPost:
    post_id: str
    topic: str
    body: str
    delta: int = 0
    sentences: tuple[Sentence, ...] = ()
    annotations: tuple[SentenceAnnotation, ...] = ()
    edges: tuple[SupportEdge, ...] = ()
    # Unknown top-level JSON fields, preserved through serialize(parse(x)).
    extra: dict[str, Any] = field(default_factory=dict, compare=False)

    def annotation_for(self, sentence_index: int) -> SentenceAnnotation | None:
        for ann in self.annotations:
            if ann.sentence_index == sentence_index:
                return ann
        return None


@dataclass(frozen=True)
class Corpus:
    posts: tuple[AnnotatedPost, ...] = ()

    @property
    def topics(self) -> tuple[str, ...]:
        """Distinct topics in first-appearance order."""
        seen: dict[str, None] = {}
        for post in self.posts:
            seen.setdefault(post.topic, None)
        return tuple(seen)

    def by_topic(self, topic: str) -> tuple[AnnotatedPost, ...]:
        return tuple(p for p in self.posts if p.topic == topic)


class CorpusError(Exception):
    """Base class for corpus parsing and schema failures."""


class CorpusFormatError(CorpusError):
    """A line of the JSONL stream is not valid JSON."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SchemaError(CorpusError):
    """A parsed JSON object violates the post schema or the coding rules."""

    def __init__(self, post_id: str, field_name: str, message: str):
        super().__init__(f"post {post_id!r}, field {field_name!r}: {message}")
        self.post_id = post_id
        self.field_name = field_name


# ---------------------------------------------------------------------------
# Sentence segmentation
# ---------------------------------------------------------------------------

_TERMINATORS = ".!?"

#: Dots in these tokens never end a sentence. Compared lowercase, the token
#: runs from the previous whitespace through the dot under inspection.
ABBREVIATIONS: frozenset[str] = frozenset(
    {
        "e.g.",
        "i.e.",
        "etc.",
        "vs.",
        "cf.",
        "al.",
        "ca.",
        "approx.",
        "dr.",
        "mr.",
        "mrs.",
        "ms.",
        "prof.",
        "st.",
        "jr.",
        "sr.",
        "no.",
        "fig.",
    }
)


def segment_sentences(body: str) -> list[Sentence]:
    """Split ``body`` into sentences on ``.``, ``!``, ``?``.

    A run of consecutive terminators counts as one sentence end. Two guards
    suppress a split: the dot completes a whitelisted abbreviation, or the
    next non-whitespace character is lowercase. A trailing fragment without a
    terminator becomes the final sentence. Spans are byte offsets into the
    UTF-8 encoding of ``body`` and reconstruct each sentence text exactly.
    """
    n = len(body)
    # Prefix byte offsets so spans can be emitted in O(1) per sentence.
    byte_at = [0] * (n + 1)
    for i, ch in enumerate(body):
        byte_at[i + 1] = byte_at[i] + len(ch.encode("utf-8"))

    sentences: list[Sentence] = []

    def emit(start_char: int, end_char: int) -> None:
        text = body[start_char:end_char]
        sentences.append(
            Sentence(
                index=len(sentences),
                text=text,
                start=byte_at[start_char],
                end=byte_at[end_char],
            )
        )

    start: int | None = None
    i = 0
    while i < n:
        ch = body[i]
        if start is None:
            if ch.isspace():
                i += 1
                continue
            start = i
        if ch in _TERMINATORS:
            j = i
            while j + 1 < n and body[j + 1] in _TERMINATORS:
                j += 1
            split = True
            if j == i and ch == ".":
                tok_start = i
                while tok_start > start and not body[tok_start - 1].isspace():
                    tok_start -= 1
                if body[tok_start : i + 1].lower() in ABBREVIATIONS:
                    split = False
            k = j + 1
            while k < n and body[k].isspace():
                k += 1
            if k < n and body[k].islower():
                split = False
            if split:
                emit(start, j + 1)
                start = None
            i = j + 1
            continue
        i += 1

    if start is not None:
        end = n
        while end > start and body[end - 1].isspace():
            end -= 1
        if end > start:
            emit(start, end)
    return sentences


# ---------------------------------------------------------------------------
# Parsing and serialization
# ---------------------------------------------------------------------------

_POST_FIELDS = ("post_id", "topic", "body", "delta", "sentences", "annotations", "edges")


def _require(condition: bool, post_id: str, field_name: str, message: str) -> None:
    if not condition:
        raise SchemaError(post_id, field_name, message)


def parse_post(obj: dict[str, Any]) -> AnnotatedPost:
    """Build an :class:`AnnotatedPost` from one decoded JSONL object.

    Enforces the per-post schema: typed fields, ordered non-overlapping spans,
    one annotation per sentence, and the coding rules that a sentence holds
    exactly one component label and that only premises carry strategies.
    """
    if not isinstance(obj, dict):
        raise SchemaError("<unknown>", "<root>", "post must be a JSON object")
    post_id = obj.get("post_id")
    _require(isinstance(post_id, str) and post_id != "", str(post_id), "post_id", "must be a non-empty string")
    topic = obj.get("topic")
    _require(isinstance(topic, str) and topic != "", post_id, "topic", "must be a non-empty string")
    body = obj.get("body")
    _require(isinstance(body, str), post_id, "body", "must be a string")
    delta = obj.get("delta", 0)
    _require(isinstance(delta, int) and not isinstance(delta, bool), post_id, "delta", "must be an integer")
    _require(delta >= 0, post_id, "delta", "must be >= 0")

    body_bytes = body.encode("utf-8")
    raw_sentences = obj.get("sentences", [])
    _require(isinstance(raw_sentences, list), post_id, "sentences", "must be a list")
    sentences: list[Sentence] = []
    prev_end = 0
    for pos, raw in enumerate(raw_sentences):
        _require(isinstance(raw, dict), post_id, "sentences", f"entry {pos} must be an object")
        idx = raw.get("index")
        start = raw.get("start")
        end = raw.get("end")
        _require(idx == pos, post_id, "sentences", f"entry {pos} has index {idx}, expected {pos}")
        _require(
            isinstance(start, int) and isinstance(end, int),
            post_id,
            "sentences",
            f"sentence {pos} span must be integer byte offsets",
        )
        _require(0 <= start < end <= len(body_bytes), post_id, "sentences", f"sentence {pos} span out of range")
        _require(start >= prev_end, post_id, "sentences", f"sentence {pos} overlaps the previous sentence")
        prev_end = end
        try:
            text = body_bytes[start:end].decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(post_id, "sentences", f"sentence {pos} span splits a UTF-8 sequence") from exc
        _require(text.strip() != "", post_id, "sentences", f"sentence {pos} is empty after trimming")
        sentences.append(Sentence(index=pos, text=text, start=start, end=end))

    raw_annotations = obj.get("annotations", [])
    _require(isinstance(raw_annotations, list), post_id, "annotations", "must be a list")
    annotations: list[SentenceAnnotation] = []
    seen_idx: set[int] = set()
    for raw in raw_annotations:
        _require(isinstance(raw, dict), post_id, "annotations", "entries must be objects")
        sidx = raw.get("sentence_index")
        _require(isinstance(sidx, int), post_id, "annotations", "sentence_index must be an integer")
        _require(0 <= sidx < len(sentences), post_id, "annotations", f"sentence_index {sidx} out of range")
        _require(sidx not in seen_idx, post_id, "annotations", f"sentence {sidx} annotated more than once")
        seen_idx.add(sidx)
        comp_raw = raw.get("component")
        try:
            component = ComponentLabel(comp_raw)
        except ValueError:
            raise SchemaError(post_id, "annotations", f"unknown component {comp_raw!r}") from None
        strat_raw = raw.get("strategies", [])
        _require(isinstance(strat_raw, list), post_id, "annotations", "strategies must be a list")
        strategies: set[StrategyLabel] = set()
        for s in strat_raw:
            try:
                strategies.add(StrategyLabel(s))
            except ValueError:
                raise SchemaError(post_id, "annotations", f"unknown strategy {s!r}") from None
        if component is not ComponentLabel.PREMISE:
            _require(
                not strategies,
                post_id,
                "annotations",
                f"sentence {sidx}: strategies are only allowed on premises "
                "(coding manual: a sentence is exactly one of claim, premise, or non-argument; "
                "strategy labels apply to premises)",
            )
        else:
            _require(
                1 <= len(strategies) <= 4,
                post_id,
                "annotations",
                f"sentence {sidx}: a premise carries between 1 and 4 strategies",
            )
        annotations.append(SentenceAnnotation(sentence_index=sidx, component=component, strategies=frozenset(strategies)))
    _require(
        len(annotations) == len(sentences),
        post_id,
        "annotations",
        f"{len(sentences)} sentences but {len(annotations)} annotations",
    )
    annotations.sort(key=lambda a: a.sentence_index)

    raw_edges = obj.get("edges", [])
    _require(isinstance(raw_edges, list), post_id, "edges", "must be a list")
    edges: list[SupportEdge] = []
    for raw in raw_edges:
        _require(isinstance(raw, dict), post_id, "edges", "entries must be objects")
        p = raw.get("premise_index")
        c = raw.get("claim_index")
        lab = raw.get("label")
        _require(isinstance(p, int) and isinstance(c, int), post_id, "edges", "endpoints must be integers")
        _require(0 <= p < len(sentences), post_id, "edges", f"premise_index {p} out of range")
        _require(0 <= c < len(sentences), post_id, "edges", f"claim_index {c} out of range")
        _require(lab in (0, 1), post_id, "edges", f"label must be 0 or 1, got {lab!r}")
        edges.append(SupportEdge(premise_index=p, claim_index=c, label=lab))

    extra = {k: v for k, v in obj.items() if k not in _POST_FIELDS}
    return AnnotatedPost(
        post_id=post_id,
        topic=topic,
        body=body,
        delta=delta,
        sentences=tuple(sentences),
        annotations=tuple(annotations),
        edges=tuple(edges),
        extra=extra,
    )


def parse_corpus(stream: IO[str] | IO[bytes] | Iterable[str] | Iterable[bytes] | str | bytes) -> Corpus:
    """Parse a JSON-Lines stream of posts. Blank lines are skipped.

    Raises :class:`CorpusFormatError` (with the 1-based line number) for
    malformed JSON and :class:`SchemaError` (naming post id and field) for
    schema violations, including duplicate post ids.
    """
    if isinstance(stream, bytes):
        lines: Iterable[str] = stream.decode("utf-8").splitlines()
    elif isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = (ln.decode("utf-8") if isinstance(ln, bytes) else ln for ln in stream)

    posts: list[AnnotatedPost] = []
    seen_ids: set[str] = set()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(line_no, f"invalid JSON ({exc.msg})") from exc
        post = parse_post(obj)
        if post.post_id in seen_ids:
            raise SchemaError(post.post_id, "post_id", "duplicate post_id")
        seen_ids.add(post.post_id)
        posts.append(post)
    return Corpus(posts=tuple(posts))


def load_corpus(path: str) -> Corpus:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_corpus(fh)


def post_to_json_dict(post: AnnotatedPost) -> dict[str, Any]:
    d: dict[str, Any] = {
        "post_id": post.post_id,
        "topic": post.topic,
        "body": post.body,
        "delta": post.delta,
        "sentences": [{"index": s.index, "start": s.start, "end": s.end} for s in post.sentences],
        "annotations": [
            {
                "sentence_index": a.sentence_index,
                "component": a.component.value,
                "strategies": [s.value for s in STRATEGY_ORDER if s in a.strategies],
            }
            for a in post.annotations
        ],
        "edges": [
            {"premise_index": e.premise_index, "claim_index": e.claim_index, "label": e.label} for e in post.edges
        ],
    }
    d.update(post.extra)
    return d


def serialize_post(post: AnnotatedPost) -> str:
    """One canonical JSONL line: sorted keys, compact separators, UTF-8 text."""
    return json.dumps(post_to_json_dict(post), sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def write_corpus(corpus: Corpus, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for post in corpus.posts:
            fh.write(serialize_post(post) + "\n")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    post_id: str
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    notes: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "violation_count": len(self.violations),
            "violations": [vars(v) for v in self.violations],
            "notes": [vars(v) for v in self.notes],
        }


def validate_corpus(corpus: Corpus) -> ValidationReport:
    """Re-check the coding rules over a corpus; violations are data, not errors.

    Checks: exactly one annotation per sentence, strategies only on premises
    (and at least one per premise), edge endpoints present and typed
    premise -> claim. Ethos attribution (only the arguer's own credibility
    counts) is not machine-checkable, so posts using ethos get an
    informational note instead.
    """
    violations: list[Violation] = []
    notes: list[Violation] = []
    seen_ids: set[str] = set()
    for post in corpus.posts:
        pid = post.post_id
        if pid in seen_ids:
            violations.append(Violation(pid, "duplicate_post_id", "post_id appears more than once"))
        seen_ids.add(pid)

        by_index: dict[int, list[SentenceAnnotation]] = {}
        for ann in post.annotations:
            by_index.setdefault(ann.sentence_index, []).append(ann)
        for s in post.sentences:
            anns = by_index.get(s.index, [])
            if not anns:
                violations.append(Violation(pid, "missing_annotation", f"sentence {s.index} has no annotation"))
            elif len(anns) > 1:
                violations.append(
                    Violation(pid, "duplicate_annotation", f"sentence {s.index} has {len(anns)} annotations")
                )
        known = {s.index for s in post.sentences}
        component_of: dict[int, ComponentLabel] = {}
        has_ethos = False
        for ann in post.annotations:
            if ann.sentence_index not in known:
                violations.append(
                    Violation(pid, "unknown_sentence_index", f"annotation refers to missing sentence {ann.sentence_index}")
                )
                continue
            component_of[ann.sentence_index] = ann.component
            if ann.component is not ComponentLabel.PREMISE and ann.strategies:
                violations.append(
                    Violation(
                        pid,
                        "strategies_on_non_premise",
                        f"sentence {ann.sentence_index} is a {ann.component.value} but carries strategies",
                    )
                )
            if ann.component is ComponentLabel.PREMISE and not ann.strategies:
                violations.append(
                    Violation(pid, "premise_without_strategy", f"premise {ann.sentence_index} carries no strategy")
                )
            if StrategyLabel.ETHOS in ann.strategies:
                has_ethos = True
        for edge in post.edges:
            for role, idx in (("premise_index", edge.premise_index), ("claim_index", edge.claim_index)):
                if idx not in known:
                    violations.append(Violation(pid, "edge_endpoint_missing", f"{role} {idx} does not exist"))
            if component_of.get(edge.premise_index) not in (None, ComponentLabel.PREMISE):
                violations.append(
                    Violation(pid, "edge_premise_not_premise", f"premise_index {edge.premise_index} is not a Premise")
                )
            if edge.claim_index in component_of and component_of[edge.claim_index] is not ComponentLabel.CLAIM:
                violations.append(
                    Violation(pid, "edge_claim_not_claim", f"claim_index {edge.claim_index} is not a Claim")
                )
        if has_ethos:
            notes.append(
                Violation(
                    pid,
                    "ethos_attribution",
                    "post uses ethos; whether the credibility cited is the arguer's own cannot be machine-checked",
                )
            )
    return ValidationReport(violations=tuple(violations), notes=tuple(notes))


# ---------------------------------------------------------------------------
# Statistics and splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabelStats:
    post_count: int
    sentence_count: int
    components: dict[str, int]
    strategies: dict[str, int]
    per_topic: dict[str, dict[str, Any]]

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "post_count": self.post_count,
            "sentence_count": self.sentence_count,
            "components": dict(self.components),
            "strategies": dict(self.strategies),
            "per_topic": {t: dict(v) for t, v in self.per_topic.items()},
        }


def corpus_stats(corpus: Corpus) -> LabelStats:
    """Raw label occurrence counts, overall and per topic."""
    components: Counter[str] = Counter({c.value: 0 for c in ComponentLabel})
    strategies: Counter[str] = Counter({s.value: 0 for s in STRATEGY_ORDER})
    per_topic: dict[str, dict[str, Any]] = {}
    sentence_count = 0
    for post in corpus.posts:
        topic = per_topic.setdefault(
            post.topic,
            {
                "posts": 0,
                "components": {c.value: 0 for c in ComponentLabel},
                "strategies": {s.value: 0 for s in STRATEGY_ORDER},
            },
        )
        topic["posts"] += 1
        sentence_count += len(post.sentences)
        for ann in post.annotations:
            components[ann.component.value] += 1
            topic["components"][ann.component.value] += 1
            for s in ann.strategies:
                strategies[s.value] += 1
                topic["strategies"][s.value] += 1
    return LabelStats(
        post_count=len(corpus.posts),
        sentence_count=sentence_count,
        components=dict(components),
        strategies=dict(strategies),
        per_topic=per_topic,
    )


def stratified_split(
    items: Sequence[tuple[str, Hashable]],
    test_fraction: float,
    seed: int,
) -> tuple[list[str], list[str]]:
    """Split ``(id, class)`` pairs so each class keeps its train/test ratio.

    Per class the test count is ``round(n_class * test_fraction)`` (banker's
    rounding), sampled with a seeded shuffle over ids sorted within the class,
    so the split depends only on the item set, not its order.
    """
    if not items:
        raise ValueError("stratified_split: empty input")
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    groups: dict[Hashable, list[str]] = {}
    for item_id, cls in items:
        groups.setdefault(cls, []).append(item_id)
    rng = random.Random(seed)
    train_ids: list[str] = []
    test_ids: list[str] = []
    for cls in sorted(groups, key=str):
        ids = sorted(groups[cls], key=str)
        rng.shuffle(ids)
        n_test = round(len(ids) * test_fraction)
        test_ids.extend(ids[:n_test])
        train_ids.extend(ids[n_test:])
    return train_ids, test_ids
