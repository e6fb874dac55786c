"""Layered retrieval: judges, traversal accounting, baseline ranking."""
import random

import pytest

from graphdoc.doctree import build_tree
from graphdoc.gateway import Gateway, ScriptedBackend
from graphdoc.retrieval import (
    KeywordJudge,
    LLMJudge,
    RetrievalConfig,
    ScriptedJudge,
    SubtreeOracleJudge,
    TaskQuery,
    candidate_children,
    retrieve,
    tfidf_baseline,
)


def small_tree():
    nodes = {
        "root": {"title": "Docs", "summary": "", "body": "",
                 "children": ["flow", "paths"]},
        "flow": {"title": "Network flow", "summary": "maximum flow and cuts",
                 "body": "", "children": ["flow.max", "flow.cut"]},
        "paths": {"title": "Paths", "summary": "shortest path algorithms",
                  "body": "", "children": ["paths.dijkstra"]},
        "flow.max": {"title": "maximum_flow_value",
                     "summary": "value of a maximum flow",
                     "body": "computes the maximum flow value", "children": []},
        "flow.cut": {"title": "minimum_cut", "summary": "minimum cut partition",
                     "body": "computes a minimum cut", "children": []},
        "paths.dijkstra": {"title": "dijkstra_path_length",
                           "summary": "weighted shortest path length",
                           "body": "weighted distance between two nodes",
                           "children": []},
    }
    return build_tree("root", nodes)


def three_layer_tree(branching=3, depth=3, gold_leaf="n.0.0.0"):
    """Uniform tree with ids n.<path>; one gold leaf."""
    nodes = {
        "n": {"title": "root", "summary": "", "body": "", "children": []}
    }
    frontier = ["n"]
    for _ in range(depth):
        nxt = []
        for parent in frontier:
            kids = [f"{parent}.{i}"[len("n."):] for i in range(branching)]
            kids = [f"n.{k}" for k in kids]
            nodes[parent]["children"] = kids
            for kid in kids:
                nodes[kid] = {
                    "title": f"chapter {kid}",
                    "summary": f"about {kid}",
                    "body": f"body {kid}",
                    "children": [],
                }
            nxt.extend(kids)
        frontier = nxt
    return build_tree("n", nodes), gold_leaf


def test_candidate_children_carries_leaves_forward():
    tree = small_tree()
    cands = candidate_children(tree, [tree.node("flow"), tree.node("flow.max")])
    assert [n.id for n in cands] == ["flow.max", "flow.cut"]


def test_subtree_oracle_judge_exact():
    tree, gold = three_layer_tree()
    judge = SubtreeOracleJudge(tree, {gold})
    result = retrieve(TaskQuery(text="x"), tree, judge)
    assert result.selected_leaf_ids == {gold}
    # layered accounting: branching per layer plus the one leaf filtered
    assert result.judged_node_count == 3 + 3 + 3 + 1
    assert [t.layer for t in result.layer_trace] == [1, 2, 3]


def test_retrieve_without_global_filter_counts_less():
    tree, gold = three_layer_tree()
    judge = SubtreeOracleJudge(tree, {gold})
    result = retrieve(
        TaskQuery(text="x"), tree, judge,
        RetrievalConfig(use_global_filter=False),
    )
    assert result.judged_node_count == 9
    assert result.selected_leaf_ids == {gold}


def test_scripted_judge_and_trace():
    tree = small_tree()
    judge = ScriptedJudge({"flow": True, "flow.max": True})
    result = retrieve(TaskQuery(text="irrelevant"), tree, judge)
    assert result.selected_leaf_ids == {"flow.max"}
    assert result.layer_trace[0].candidate_ids == ["flow", "paths"]
    assert result.layer_trace[0].selected_ids == ["flow"]
    assert result.layer_trace[1].candidate_ids == ["flow.max", "flow.cut"]


def test_keyword_judge_end_to_end():
    tree = small_tree()
    query = TaskQuery(text="maximum flow value from source to sink")
    result = retrieve(query, tree, KeywordJudge())
    assert "flow.max" in result.selected_leaf_ids
    assert "paths.dijkstra" not in result.selected_leaf_ids


def test_llm_judge_parses_and_caps(caplog):
    tree = small_tree()
    backend = ScriptedBackend({
        "relevance": ['["flow", "bogus_key"]', '["flow.max", "flow.cut"]'],
        "global_filter": ["Yes", "No"],
    })
    gw = Gateway(backend=backend)
    config = RetrievalConfig(top_k=5)
    judge = LLMJudge(gw, config)
    result = retrieve(TaskQuery(text="flow"), tree, judge, config)
    # bogus key dropped, both leaves judged, one survives the filter
    assert result.selected_leaf_ids == {"flow.max"}
    assert result.judged_node_count == 2 + 2 + 2


def test_llm_judge_malformed_selection_selects_nothing():
    tree = small_tree()
    backend = ScriptedBackend({"relevance": ["no list in this reply"]})
    gw = Gateway(backend=backend)
    config = RetrievalConfig()
    result = retrieve(TaskQuery(text="flow"), tree, judge=LLMJudge(gw, config),
                      config=config)
    assert result.selected_leaf_ids == set()
    assert result.layer_trace[0].selected_ids == []


def test_llm_judge_top_k_cap():
    tree = small_tree()
    backend = ScriptedBackend({
        "relevance": ['["flow", "paths"]', '["flow.max", "flow.cut", "paths.dijkstra"]'],
        "global_filter": ["Yes", "Yes"],
    })
    gw = Gateway(backend=backend)
    config = RetrievalConfig(top_k=2)
    result = retrieve(TaskQuery(text="x"), tree, LLMJudge(gw, config), config)
    # layer two keeps only the first two of three candidates
    assert result.selected_leaf_ids == {"flow.max", "flow.cut"}


def test_random_trees_oracle_judge_is_exact():
    rng = random.Random(42)
    for _ in range(40):
        branching = rng.randint(2, 4)
        depth = rng.randint(1, 3)
        tree, _ = three_layer_tree(branching=branching, depth=depth)
        leaves = [n.id for n in tree.leaves()]
        gold = set(rng.sample(leaves, k=rng.randint(1, min(3, len(leaves)))))
        config = RetrievalConfig(top_k=len(leaves))
        result = retrieve(
            TaskQuery(text="q"), tree, SubtreeOracleJudge(tree, gold), config
        )
        assert result.selected_leaf_ids == gold


def test_tfidf_baseline_ranking_and_ties():
    tree = small_tree()
    hits = tfidf_baseline(TaskQuery(text="maximum flow value"), tree, 2)
    assert hits[0].id == "flow.max"
    assert len(hits) == 2
    # a query with no shared vocabulary: cosine 0 for all, ties by id
    blank = tfidf_baseline(TaskQuery(text="zzz qqq"), tree, 3)
    assert [n.id for n in blank] == ["flow.cut", "flow.max", "paths.dijkstra"]
