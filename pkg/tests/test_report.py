import json

from cohomlab.report import (
    DERIVED,
    OPEN,
    PAPER,
    Check,
    PaperReport,
    build_report,
    expected_verdict,
    report_json,
    summary_table,
)
from oracles import context


def test_check_pass_rule():
    assert Check("a", None, OPEN, 5).passed
    assert Check("a", 5, PAPER, 5).passed
    assert not Check("a", 4, DERIVED, 5).passed


def test_open_rows_never_fail_a_report():
    rep = PaperReport(3, checks=[Check("x", None, OPEN, 1), Check("y", 1, PAPER, 1)])
    assert rep.ok
    rep.checks.append(Check("z", 0, OPEN, 1))
    assert rep.ok
    rep.checks.append(Check("w", 0, DERIVED, 1))
    assert not rep.ok and [c.name for c in rep.failures()] == ["w"]


def test_expected_verdicts():
    assert expected_verdict(27) == ("EMBEDS", PAPER)
    assert expected_verdict(17) == ("NOT_EMBEDS", PAPER)
    assert expected_verdict(29) == (None, OPEN)
    assert expected_verdict(25) == (None, OPEN)


def test_report_for_q9_is_complete_and_passes():
    rep = build_report(9, ctx=context(9))
    assert rep.ok, rep.failures()
    assert rep.dims == {
        "H0_I": 1, "H0_W": 0, "H1_I": 0, "H1_V": 1, "H1_W": 1, "H1_U": 2,
        "H2_BorelT": 1, "ImDelta": 0, "KerPhi": 0,
    }
    assert rep.check("U_irreducible_over_F2").expected_provenance == OPEN
    assert rep.check("U_irreducible_over_F2").computed is False
    doc = report_json([rep])
    text = json.dumps(doc, sort_keys=True)
    assert json.loads(text)["schema"] == 1
    assert "NOT_EMBEDS" in summary_table([rep])


def test_q29_embedding_row_is_open():
    rep = build_report(29, samples=2000)
    row = rep.check("embedding_verdict")
    assert row.expected is None and row.expected_provenance == OPEN
    assert row.computed in ("EMBEDS", "NOT_EMBEDS")
    assert rep.ok
    assert rep.dims["H2_BorelT"] == "guard-override required"
