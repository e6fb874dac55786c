"""Layer-wise retrieval over a documentation tree.

The walk starts at the root and, layer by layer, asks a relevance judge to
keep the promising children. Leaves reached early ride along as candidates
in later layers. Surviving leaves then face a per-leaf yes/no filter.
"""
from __future__ import annotations

import json
import logging
import math
import re
import time
from collections import Counter
from dataclasses import dataclass, field

from . import prompts
from .doctree import DocNode, DocTree
from .gateway import (
    ChatRequest,
    Gateway,
    GatewayError,
    ParseError,
    parse_string_list,
    parse_yes_no,
)

log = logging.getLogger(__name__)


class JudgeError(Exception):
    """Relevance judge could not produce a decision."""


@dataclass(frozen=True)
class TaskQuery:
    """What the retriever is looking for: the task text plus graph flags."""

    text: str
    directed: bool = False
    weighted: bool = False


@dataclass
class LayerTrace:
    layer: int
    candidate_ids: list
    selected_ids: list


@dataclass
class RetrievalResult:
    selected_leaf_ids: set
    layer_trace: list
    judged_node_count: int
    wall_time: float = 0.0

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "selected_leaf_ids": sorted(self.selected_leaf_ids),
            "judged_node_count": self.judged_node_count,
            "layers": [
                {
                    "layer": t.layer,
                    "candidates": list(t.candidate_ids),
                    "selected": list(t.selected_ids),
                }
                for t in self.layer_trace
            ],
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out


@dataclass
class RetrievalConfig:
    top_k: int = 5
    use_global_filter: bool = True
    model_id: str = "default"


# ---------------------------------------------------------------------------
# Judges


class KeywordJudge:
    """Relevant iff the node's title or summary shares a word with the query."""

    def _tokens(self, text: str) -> set:
        return set(re.findall(r"[a-z0-9]+", text.lower()))

    def is_relevant(self, query: TaskQuery, node: DocNode) -> bool:
        probe = self._tokens(node.title + " " + node.summary)
        return bool(self._tokens(query.text) & probe)

    def select_relevant(self, query: TaskQuery, candidates, top_k: int):
        return [n for n in candidates if self.is_relevant(query, n)][:top_k]


class SubtreeOracleJudge:
    """Perfect judge for tests: a node is relevant iff its subtree holds a
    gold leaf; a leaf is relevant iff it is gold."""

    def __init__(self, tree: DocTree, gold_leaf_ids):
        self.gold = set(gold_leaf_ids)
        self._holds_gold = {}
        order = sorted(tree.nodes.values(), key=lambda n: -n.layer)
        for node in order:
            if node.is_leaf:
                self._holds_gold[node.id] = node.id in self.gold
            else:
                self._holds_gold[node.id] = any(
                    self._holds_gold[c] for c in node.children
                )

    def is_relevant(self, query: TaskQuery, node: DocNode) -> bool:
        return self._holds_gold.get(node.id, False)

    def select_relevant(self, query: TaskQuery, candidates, top_k: int):
        return [n for n in candidates if self.is_relevant(query, n)][:top_k]


class ScriptedJudge:
    """Fixed relevance map for tests: node id -> bool."""

    def __init__(self, decisions: dict):
        self.decisions = dict(decisions)

    def is_relevant(self, query: TaskQuery, node: DocNode) -> bool:
        return bool(self.decisions.get(node.id, False))

    def select_relevant(self, query: TaskQuery, candidates, top_k: int):
        return [n for n in candidates if self.is_relevant(query, n)][:top_k]


class LLMJudge:
    """Judge backed by the gateway: one batched call per layer, plus one
    yes/no call per surviving leaf for the global filter."""

    def __init__(self, gateway: Gateway, config: RetrievalConfig | None = None):
        self.gateway = gateway
        self.config = config or RetrievalConfig()

    def select_relevant(self, query: TaskQuery, candidates, top_k: int):
        chapter_dict = {n.id: f"{n.title}: {n.summary}" for n in candidates}
        user_text = prompts.render(
            "relevance",
            query=query.text,
            chapter_dict=json.dumps(chapter_dict, indent=2, sort_keys=True),
            top_k=top_k,
        )
        req = ChatRequest(
            system_text="You select documentation chapters for graph questions.",
            user_text=user_text,
            model_id=self.config.model_id,
            purpose_tag="relevance",
        )
        try:
            resp = self.gateway.complete(req)
            keys = parse_string_list(resp.text)
        except ParseError:
            raise
        except GatewayError as exc:
            raise JudgeError(f"relevance call failed: {exc}") from exc
        by_id = {n.id: n for n in candidates}
        picked = []
        for key in keys:
            node = by_id.get(key)
            if node is None:
                log.warning("judge named a key that is not a candidate: %r", key)
                continue
            if node not in picked:
                picked.append(node)
        return picked[:top_k]

    def is_relevant(self, query: TaskQuery, node: DocNode) -> bool:
        user_text = prompts.render(
            "global_filter",
            query=query.text,
            doc_title=node.title,
            doc_text=node.body or node.summary,
        )
        req = ChatRequest(
            system_text="You answer strictly with Yes or No.",
            user_text=user_text,
            model_id=self.config.model_id,
            purpose_tag="global_filter",
        )
        try:
            resp = self.gateway.complete(req)
        except GatewayError as exc:
            raise JudgeError(f"global filter call failed: {exc}") from exc
        return parse_yes_no(resp.text)


# ---------------------------------------------------------------------------
# Traversal


def candidate_children(tree: DocTree, selected) -> list:
    """Children of the selected nodes; selected leaves carry themselves
    forward. Order follows the selection, duplicates dropped."""
    out = []
    seen = set()
    for node in selected:
        if node.is_leaf:
            kids = [node]
        else:
            kids = tree.children(node.id)
        for kid in kids:
            if kid.id not in seen:
                seen.add(kid.id)
                out.append(kid)
    return out


def select_relevant(query: TaskQuery, candidates, judge, top_k: int) -> list:
    """Ask the judge to keep the promising candidates, capped at top_k.
    A judge that errors out or returns garbage selects nothing."""
    if not candidates:
        return []
    try:
        picked = judge.select_relevant(query, candidates, top_k)
    except (JudgeError, ParseError) as exc:
        log.warning("relevance judging failed, selecting nothing: %s", exc)
        return []
    return list(picked)[:top_k]


def global_filter(query: TaskQuery, leaves, judge) -> list:
    """Per-leaf yes/no screen. A leaf whose judgment errors out is dropped."""
    kept = []
    for leaf in leaves:
        try:
            if judge.is_relevant(query, leaf):
                kept.append(leaf)
        except JudgeError as exc:
            log.warning("global filter failed on %s, dropping: %s", leaf.id, exc)
    return kept


def retrieve(
    query: TaskQuery,
    tree: DocTree,
    judge,
    config: RetrievalConfig | None = None,
) -> RetrievalResult:
    """Top-down layered retrieval. Counts every node the judge looks at:
    all per-layer candidates plus every leaf screened by the global filter."""
    config = config or RetrievalConfig()
    start = time.monotonic()
    frontier = [tree.node(tree.root_id)]
    trace = []
    judged = 0
    for layer in range(tree.depth):
        candidates = candidate_children(tree, frontier)
        if not candidates:
            break
        judged += len(candidates)
        selected = select_relevant(query, candidates, judge, config.top_k)
        trace.append(
            LayerTrace(
                layer=layer + 1,
                candidate_ids=[n.id for n in candidates],
                selected_ids=[n.id for n in selected],
            )
        )
        frontier = selected
        if not frontier:
            break
    leaves = [n for n in frontier if n.is_leaf]
    if config.use_global_filter and leaves:
        judged += len(leaves)
        leaves = global_filter(query, leaves, judge)
    return RetrievalResult(
        selected_leaf_ids={n.id for n in leaves},
        layer_trace=trace,
        judged_node_count=judged,
        wall_time=time.monotonic() - start,
    )


# ---------------------------------------------------------------------------
# TF-IDF baseline


_TOKEN = re.compile(r"[a-z0-9]+")


def _tokenize(text: str) -> list:
    return _TOKEN.findall(text.lower())


def tfidf_baseline(query: TaskQuery, tree: DocTree, k: int) -> list:
    """Rank leaves by cosine similarity over tf-idf vectors.

    idf = ln((1+N)/(1+df)) + 1 with raw term counts, vectors L2-normalized.
    Ties break toward the smaller leaf id. Returns the top-k leaves.
    """
    leaves = sorted(tree.leaves(), key=lambda n: n.id)
    if not leaves:
        return []
    docs = {n.id: Counter(_tokenize(f"{n.title} {n.summary} {n.body}")) for n in leaves}
    n_docs = len(leaves)
    df = Counter()
    for counts in docs.values():
        df.update(set(counts))
    idf = {t: math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in df}

    def vectorize(counts: Counter) -> dict:
        vec = {t: c * idf[t] for t, c in counts.items() if t in idf}
        norm = math.sqrt(sum(x * x for x in vec.values()))
        if norm == 0.0:
            return {}
        return {t: x / norm for t, x in vec.items()}

    qvec = vectorize(Counter(_tokenize(query.text)))
    ranked = []
    for leaf in leaves:
        dvec = vectorize(docs[leaf.id])
        sim = sum(qvec.get(t, 0.0) * x for t, x in dvec.items())
        ranked.append((leaf, sim))
    ranked.sort(key=lambda pair: (-pair[1], pair[0].id))
    return [leaf for leaf, _ in ranked[:k]]
