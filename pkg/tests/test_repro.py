import pytest

from psbmetric import run_repro

EXPECTED_ITEMS = (
    "axioms",
    "balls",
    "topology",
    "t0-universality",
    "cover-witness",
    "comparison",
    "contraction",
    "fixpoint",
)


@pytest.fixture(scope="module")
def reports():
    return run_repro(seed=0), run_repro(seed=0)


def test_repro_passes_with_expected_items(reports):
    report = reports[0]
    assert report["passed"] is True
    assert tuple(item["name"] for item in report["items"]) == EXPECTED_ITEMS
    assert all(item["passed"] for item in report["items"])


def test_repro_is_deterministic_in_process(reports):
    first, second = reports
    assert first == second


def test_repro_details_are_informative(reports):
    details = {item["name"]: item["detail"] for item in reports[0]["items"]}
    assert "8/8 mutations rejected" in details["axioms"]
    assert "262143 subfamilies" in details["cover-witness"]
    assert "logged" in details["contraction"]
