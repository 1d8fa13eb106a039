import csv
import io
import json
from math import comb

import pytest

from oracles import crc4_longdiv, multiples_of_g_below_256
from rc4fault import evaluator
from rc4fault.evaluator import (
    OracleMismatch,
    addition_rule,
    counter_rule,
    crc_rule,
    evaluate_addition,
    evaluate_counter,
    evaluate_crc,
    simulate_addition,
)
from rc4fault.adder import ripple_add


@pytest.fixture(scope="module")
def reports():
    return {r.checker: r for r in evaluator.evaluate()}


def test_row_sums(reports):
    for rep in reports.values():
        for r in rep.rows:
            assert r.detected + r.undetected == r.combinations == comb(8, r.weight)
        assert rep.total == 255
        assert rep.detected_total + rep.undetected_total == 255


def test_crc_report(reports):
    rep = reports["crc"]
    assert rep.rows[0].detected == 8 and rep.rows[0].undetected == 0
    assert set(rep.undetected_masks) == multiples_of_g_below_256()
    assert rep.undetected_total == 15
    assert 0x19 in rep.undetected_masks
    assert rep.rows[2].undetected == 4
    assert rep.paper_totals == (219, 36)
    assert not rep.matches_paper
    assert any("not reproducible" in n for n in rep.notes)


def test_crc_rule_against_long_division():
    for m in range(1, 256):
        assert crc_rule(m) == (crc4_longdiv(m) != 0)


def test_addition_report(reports):
    rep = reports["addition"]
    assert [r.detected for r in rep.rows] == [8, 16, 56, 32, 56, 16, 8, 0]
    assert (rep.detected_total, rep.undetected_total) == (192, 63)
    assert rep.rows[1].undetected == 12 and rep.rows[7].undetected == 1
    assert rep.efficiency_percent == 75.3
    assert round(rep.efficiency * 100) == 75
    assert rep.matches_paper


def test_counter_report(reports):
    rep = reports["counter"]
    assert (rep.detected_total, rep.undetected_total) == (224, 31)
    assert rep.rows[0].detected == 8
    assert rep.rows[3].undetected == 14 and rep.rows[3].paper_delta == (1, -1)
    assert rep.rows[7].undetected == 1 and rep.rows[7].paper_delta == (-1, 1)
    assert rep.efficiency_percent == 87.8
    assert not rep.matches_paper
    assert any(n.startswith("weight 4") for n in rep.notes)


def test_closed_form_rules_count():
    assert sum(not addition_rule(m) for m in range(1, 256)) == 63
    assert sum(not counter_rule(m) for m in range(1, 256)) == 31


def test_simulation_rejects_inconsistent_checker():
    # a record whose carries are wrong makes verdicts operand-dependent
    bogus = (ripple_add(1, 2), ripple_add(0x0F, 0x01)._replace(carries=0))
    with pytest.raises(OracleMismatch):
        simulate_addition(0x03, bogus)


def test_json(reports):
    data = json.loads(evaluator.to_json(list(reports.values())))
    counter = next(d for d in data if d["checker"] == "counter")
    assert counter["efficiency_percent"] == 87.8
    assert counter["totals"]["paper_delta"] == [0, 0]
    assert counter["per_weight"][3]["paper_delta"] == [1, -1]
    crc = next(d for d in data if d["checker"] == "crc")
    assert crc["totals"]["paper_undetected"] == 36


def test_csv(reports):
    text = evaluator.to_csv([reports["addition"]])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 9
    assert rows[-1]["weight"] == "total"
    assert "255,192,63" in text.splitlines()[-1]


def test_text(reports):
    text = evaluator.to_text([reports["crc"]])
    assert "94.1%" in text and "published 86%" in text
    assert "+21/-21" in text


def test_individual_evaluators_deterministic():
    assert evaluate_crc().to_dict() == evaluate_crc().to_dict()
    assert evaluate_addition().undetected_masks == evaluate_addition().undetected_masks
    assert evaluate_counter().to_dict() == evaluate_counter().to_dict()
