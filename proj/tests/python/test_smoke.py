"""Smoke tests for the _mqcic extension module."""

import os

import pytest

m = pytest.importorskip("_mqcic")


def data_path(name: str) -> str:
    base = os.environ.get("MQCIC_TESTDATA", "testdata")
    return os.path.join(base, name)


def test_load_corpus_and_stats():
    indicators = m.load_indicators(data_path("indicators.json"))
    instances = m.load_instances(data_path("instances.json"))
    assert len(indicators) == 3
    assert len(instances) == 5
    assert indicators[0].enhanced()
    assert instances[0].unique_id.startswith(indicators[0].id)

    stats = m.corpus_stats(instances)
    assert stats["count"] == 5
    assert stats["min_facts"] >= 1
    assert stats["min_facts"] <= stats["avg_facts"] <= stats["max_facts"]


def test_rule_parse_evaluate_roundtrip():
    facts = [
        m.enum_fact("procedure", "intervention", ["stent", "PTCA"]),
        m.num_fact("residual_stenosis", "stenosis", "%"),
        m.num_fact("timi_grade", "grade"),
    ]
    rule = m.parse_rule(
        '(procedure == "stent" AND residual_stenosis < 20) OR '
        '(procedure == "PTCA" AND residual_stenosis < 50)',
        facts,
    )
    assert rule.fact_ids() == {"procedure", "residual_stenosis"}

    bindings = {"procedure": "stent", "residual_stenosis": (0.0, "%")}
    assert rule.evaluate(bindings) == m.TruthValue.TRUE
    assert rule.evaluate({}) == m.TruthValue.UNKNOWN

    reparsed = m.parse_rule(rule.canonical(), facts)
    assert reparsed.canonical() == rule.canonical()

    grade = m.parse_rule("timi_grade == 3", facts)
    assert grade.evaluate({"timi_grade": 2}) == m.TruthValue.FALSE


def test_final_answer_collapse():
    answer, definite = m.final_answer([m.TruthValue.TRUE, m.TruthValue.TRUE])
    assert (answer, definite) == (True, True)
    answer, definite = m.final_answer([m.TruthValue.TRUE, m.TruthValue.UNKNOWN])
    assert (answer, definite) == (False, False)
    answer, definite = m.final_answer([m.TruthValue.FALSE, m.TruthValue.UNKNOWN])
    assert (answer, definite) == (False, True)


def test_answer_extraction():
    assert m.parse_final_answer('Therefore, the answer is "Yes"') == m.TruthValue.TRUE
    assert m.parse_final_answer("Answer: False") == m.TruthValue.FALSE
    assert m.parse_final_answer("I cannot determine this.") == m.TruthValue.UNKNOWN
    assert m.extract_binary_judgment("The fact is correct. Answer: Yes") == 1
    assert m.extract_binary_judgment("0") == 0
    assert m.extract_binary_judgment("maybe") is None


def test_default_params_match_published_settings():
    params = m.default_params()
    assert params["max_new_tokens"] == 1024
    assert params["repetition_penalty"] == 1.2
    assert params["temperature"] == 0.001


def test_cache_key_sensitivity():
    key = m.cache_key("model-a", [("user", "hello")])
    assert key == m.cache_key("model-a", [("user", "hello")])
    assert key != m.cache_key("model-a", [("user", "hello!")])
    assert key != m.cache_key("model-b", [("user", "hello")])


def test_errors_surface_as_python_exceptions():
    with pytest.raises(m.MqcicError):
        m.load_indicators("/nonexistent/indicators.json")
    with pytest.raises(m.MqcicError):
        m.parse_rule("ghost == 1", [m.bool_fact("a")])
