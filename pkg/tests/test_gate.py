import pytest
from hypothesis import given, strategies as st

from evigate.errors import ConfigError
from evigate.gate import REASON_CODES, GateConfig, decide, evaluate_gate
from evigate.select import EvidenceSet, ScoredCandidate

TEXTS = {
    1: "The Fourteenth Amendment forbids it.",
    2: "Equal protection is a guarantee.",
    3: "Courts decide cases.",
}


def ev(*rows):
    return EvidenceSet(tuple(ScoredCandidate(uid, s, r, c, m) for uid, s, r, c, m in rows), False)


def test_weak_topical_set_fails_like_table_2():
    # n=6, max_sim ~0.46, mean_rel ~0.07, mean_mue ~0.53, nothing anchors
    rows = [(i, s, r, 0.7, 0.53) for i, (s, r) in enumerate(
        [(0.46, 0.14), (0.44, 0.14), (0.43, 0.0), (0.42, 0.14), (0.41, 0.0), (0.40, 0.0)])]
    trace = evaluate_gate(ev(*rows), [], GateConfig())
    assert trace.decision == "FAIL"
    assert {"MEAN_REL", "ANCHOR"} <= set(trace.reasons)
    assert trace.n == 6 and trace.max_sim == 0.46 and trace.anchor_ok == 0
    assert trace.retrieval_pct == 46


def test_empty_set_fails():
    trace = evaluate_gate(EvidenceSet(), [], GateConfig())
    assert trace.decision == "FAIL"
    assert trace.reasons == ("COUNT", "MEAN_REL", "MEAN_MUE", "ANCHOR")
    assert trace.mean_rel == 0.0 and trace.mean_mue == 0.0 and trace.max_sim == 0.0


def test_strong_set_with_phrase_passes():
    trace = evaluate_gate(ev((1, 1.0, 1.0, 0.8, 0.9), (2, 0.6, 0.7, 0.6, 0.7)),
                          ["fourteenth amendment"], GateConfig(), TEXTS.get)
    assert trace.decision == "PASS" and trace.reasons == ()
    assert trace.mean_rel == pytest.approx(0.85) and trace.mean_mue == pytest.approx(0.8)


def test_phrase_missing_fails_only_on_phrase():
    strong = ev((2, 1.0, 1.0, 0.8, 0.9), (3, 0.6, 0.7, 0.6, 0.7))
    trace = evaluate_gate(strong, ["fourteenth amendment"], GateConfig(), TEXTS.get)
    assert trace.reasons == ("PHRASE",) and trace.phrase_ok == 0
    off = evaluate_gate(strong, ["fourteenth amendment"], GateConfig(phrase_anchoring=False), TEXTS.get)
    assert off.decision == "PASS" and off.phrase_ok == 1
    # no matched phrase: vacuous
    assert evaluate_gate(strong, [], GateConfig(), TEXTS.get).phrase_ok == 1


def test_reason_order_is_fixed():
    assert decide(0, 0.0, 0.0, False, False) == ("FAIL", REASON_CODES)
    assert decide(1, 0.6, 0.65, True, True) == ("PASS", ())


def test_config_validation():
    with pytest.raises(ConfigError):
        GateConfig(tau_rel=1.5)
    with pytest.raises(ConfigError):
        GateConfig(k_min=-1)


unit = st.floats(0.0, 1.0, allow_nan=False)
row = st.tuples(st.integers(1, 3), unit, unit, unit, unit)


@given(st.lists(row, max_size=6), unit, unit, unit, unit)
def test_anchor_monotone_in_thresholds(rows, tr1, tr2, ts1, ts2):
    e = ev(*rows)
    lo = evaluate_gate(e, [], GateConfig(tau_rel=min(tr1, tr2), tau_sim=min(ts1, ts2)))
    hi = evaluate_gate(e, [], GateConfig(tau_rel=max(tr1, tr2), tau_sim=max(ts1, ts2)))
    assert hi.anchor_ok <= lo.anchor_ok


@given(st.lists(row, max_size=6), st.booleans())
def test_pass_implies_count_and_anchor(rows, phrase):
    cfg = GateConfig(mean_rel_min=0.0, mean_mue_min=0.0)
    t = evaluate_gate(ev(*rows), ["fourteenth amendment"] if phrase else [], cfg, TEXTS.get)
    if t.decision == "PASS":
        assert t.n >= cfg.k_min and t.anchor_ok == 1
    assert (t.decision == "PASS") == (t.reasons == ())
    again = evaluate_gate(ev(*rows), ["fourteenth amendment"] if phrase else [], cfg, TEXTS.get)
    assert again == t
