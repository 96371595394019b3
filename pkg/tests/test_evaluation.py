import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphqa.answering import AnswerCandidate, PipelineConfig
from graphqa.evaluation import (
    BenchmarkFormatError,
    BenchmarkItem,
    answer_match,
    compute_metrics,
    load_benchmark,
    run_benchmark,
)
from graphqa.quasigraph import PREDICATE_ALIGNMENT_GRID, Thresholds

from .conftest import FIXTURES


def _cand(label, kb_id=None):
    return AnswerCandidate(
        label=label, kb_id=kb_id, score=1.0, tree_indices=(0,),
        node_ids=(), node_weight=0.0, ner_types=frozenset(),
    )


ranks_strategy = st.lists(
    st.one_of(st.integers(min_value=1, max_value=40).map(float), st.just(math.inf)),
    min_size=1,
    max_size=30,
)


class TestAnswerMatch:
    def test_case_insensitive_label(self):
        item = BenchmarkItem("q", ("sam mendes",))
        assert answer_match(_cand("Sam Mendes"), item)

    def test_kb_id_match_with_different_labels(self):
        item = BenchmarkItem("q", ("totally different",), gold_kb_id="E9")
        assert answer_match(_cand("whatever", kb_id="E9"), item)

    def test_leading_article_stripped(self):
        item = BenchmarkItem("q", ("Reader",))
        assert answer_match(_cand("The Reader"), item)
        item2 = BenchmarkItem("q", ("The Reader",))
        assert answer_match(_cand("Reader"), item2)

    def test_no_match(self):
        item = BenchmarkItem("q", ("Sam Mendes",), gold_kb_id="Sam_Mendes")
        assert not answer_match(_cand("Alan Ball", kb_id="Alan_Ball"), item)


class TestComputeMetrics:
    def test_worked_example(self):
        mrr, p1, hit5 = compute_metrics([1, 2, 4])
        assert mrr == pytest.approx((1 + 0.5 + 0.25) / 3)
        assert p1 == pytest.approx(1 / 3)
        assert hit5 == 1.0

    def test_all_unanswered(self):
        assert compute_metrics([math.inf]) == (0.0, 0.0, 0.0)

    def test_all_rank_one(self):
        assert compute_metrics([1, 1, 1]) == (1.0, 1.0, 1.0)

    def test_empty_is_error(self):
        with pytest.raises(ValueError):
            compute_metrics([])

    def test_non_integer_rank_is_error(self):
        with pytest.raises(ValueError):
            compute_metrics([1.5])

    @given(ranks_strategy)
    def test_permutation_invariant(self, ranks):
        assert compute_metrics(ranks) == compute_metrics(list(reversed(ranks)))

    @given(ranks_strategy)
    def test_metric_bounds(self, ranks):
        mrr, p1, hit5 = compute_metrics(ranks)
        assert 0.0 <= p1 <= mrr <= 1.0
        assert p1 <= hit5 <= 1.0


class TestLoader:
    def test_fixture_benchmark_loads(self):
        items = load_benchmark(FIXTURES / "benchmark.jsonl")
        assert len(items) == 3
        assert all(item.gold_aliases for item in items)

    def test_malformed_json_reports_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"question": "q", "gold_aliases": ["a"]}\nnot-json\n')
        with pytest.raises(BenchmarkFormatError, match=":2"):
            load_benchmark(path)

    def test_missing_field_is_error(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"question": "q"}\n')
        with pytest.raises(BenchmarkFormatError):
            load_benchmark(path)

    def test_empty_aliases_is_error(self):
        with pytest.raises(BenchmarkFormatError):
            BenchmarkItem("q", ())


class TestRunBenchmark:
    def test_fixture_benchmark_perfect(
        self, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
    ):
        items = load_benchmark(FIXTURES / "benchmark.jsonl")
        report = run_benchmark(
            items, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
        )
        assert (report.mrr, report.p_at_1, report.hit_at_5) == (1.0, 1.0, 1.0)
        assert report.question_count == 3
        assert report.mean_lcc_nodes > 0

    def test_per_category_counts(
        self, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
    ):
        items = [
            BenchmarkItem("Who directed American Beauty?", ("Sam Mendes",), category="People"),
            BenchmarkItem("Who was born in the town of Reading?", ("Sam Mendes",), category="People"),
            BenchmarkItem("Which zorp glorbed the quux?", ("nothing",), category="Place"),
        ]
        report = run_benchmark(
            items, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
        )
        assert report.per_category["People"].question_count == 2
        assert report.per_category["Place"].question_count == 1
        assert report.per_category["Place"].mrr == 0.0

    def test_unanswered_contributes_zero_and_reason(
        self, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
    ):
        items = [BenchmarkItem("Which zorp glorbed the quux?", ("x",))]
        report = run_benchmark(
            items, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
        )
        assert report.mrr == 0.0
        assert report.per_question[0].rank == math.inf
        assert report.per_question[0].reason == "NO_RETRIEVAL"

    def test_workers_do_not_change_results(
        self, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
    ):
        items = load_benchmark(FIXTURES / "benchmark.jsonl")
        serial = run_benchmark(
            items, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
        )
        parallel = run_benchmark(
            items, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings,
            workers=4,
        )
        assert [r.record() for r in serial.per_question] == [
            r.record() for r in parallel.per_question
        ]

    def test_report_self_consistent(
        self, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
    ):
        items = load_benchmark(FIXTURES / "benchmark.jsonl")
        report = run_benchmark(
            items, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
        )
        recomputed = compute_metrics([r.rank for r in report.per_question])
        assert (report.mrr, report.p_at_1, report.hit_at_5) == recomputed

    def test_sweep_lcc_edges_non_increasing(
        self, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
    ):
        items = load_benchmark(FIXTURES / "benchmark.jsonl")
        mean_edges = []
        for value in PREDICATE_ALIGNMENT_GRID:
            config = PipelineConfig(thresholds=Thresholds(predicate_alignment=value))
            report = run_benchmark(
                items, fixture_graph, fixture_index, fixture_dictionary,
                fixture_embeddings, config,
            )
            mean_edges.append(report.mean_lcc_edges)
        assert mean_edges == sorted(mean_edges, reverse=True)

    def test_table_renders(self, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings):
        items = load_benchmark(FIXTURES / "benchmark.jsonl")
        report = run_benchmark(
            items, fixture_graph, fixture_index, fixture_dictionary, fixture_embeddings
        )
        table = report.table()
        assert "overall" in table and "MRR" in table
        assert "People" in table
