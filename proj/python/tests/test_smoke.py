import pathlib

import pytest

import dpdpgov

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_mask_value_anchor():
    assert dpdpgov.mask_value("2170516.25", 0.5) == "*****16.25"


def test_pseudonymize_is_keyed_and_deterministic():
    a = dpdpgov.pseudonymize("alice", "k1")
    assert a.startswith("pid_") and len(a) == 20
    assert a == dpdpgov.pseudonymize("alice", "k1")
    assert a != dpdpgov.pseudonymize("alice", "k2")


def test_encrypt_round_trip():
    token = dpdpgov.encrypt_value("hello", "secret")
    assert token.startswith("enc_")
    assert dpdpgov.decrypt_value(token, "secret") == "hello"


def test_generalize_numeric():
    assert dpdpgov.generalize_numeric(10, 4, 0, 100) == "[0,25)"
    assert dpdpgov.generalize_numeric(99, 4, 0, 100) == "[75,100]"


def test_trust_level_anchors():
    assert dpdpgov.trust_level("person_1@iiitb.ac.in", "Self Use") == "Moderate"
    assert dpdpgov.trust_level("person_1@gmail.com", "Organisational Use") == "Moderate"


def test_canonicalization():
    assert dpdpgov.canonical_domain("Finance_Banking") == "Finance & Banking"
    assert dpdpgov.canonical_principal("Adult") == "Adult Individual"


def test_engine_end_to_end():
    eng = dpdpgov.Engine()
    eng.load_repository(str(DATA / "compliance_repository.txt"))
    csv = DATA / "samples" / "Finance_Banking_Adult_FinanceBanking.csv"
    meta = eng.ingest(str(csv), str(csv) + ".meta.json")
    assert meta["domain"] == "Finance & Banking"

    out = eng.evaluate(
        "person_1@gmail.com",
        "Organisational Use",
        ["annual_income", "loan_status", "monthly_expenditure"],
        "Finance_Banking_Adult_FinanceBanking.csv",
    )
    assert out["trust"] == "Moderate"
    assert out["sensitivity"] == "High"
    assert out["strategy"] == "PartialMask"
    assert 0.40 <= out["score"] <= 0.60
    assert out["audit_entries"] == 200 * 3
    assert len(out["rows"]) == 200


def test_engine_raises_on_unknown_dataset():
    eng = dpdpgov.Engine()
    with pytest.raises(Exception):
        eng.evaluate("a@b.c", "Self Use", ["x"], "missing.csv")
