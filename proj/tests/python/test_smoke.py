from fractions import Fraction

import pytest

import pmod2


def partition_parities(x):
    # Plain integer DP over parts, reduced mod 2 at the end.
    p = [1] + [0] * (x - 1)
    for part in range(1, x):
        for n in range(part, x):
            p[n] += p[n - part]
    return "".join(str(v % 2) for v in p)


def test_parity_bits_match_integer_partitions():
    assert pmod2.parity_bits("p", 300) == partition_parities(300)
    assert pmod2.parity_bits("p", 10) == "1101111100"


def test_catalog_shapes():
    claims = pmod2.catalog()
    shapes = [c["shape"] for c in claims]
    assert shapes.count("two-term") == 12
    assert shapes.count("three-term") == 2
    first = next(c for c in claims if c["id"] == "5,4,1")
    assert len(first["rhs"]) == 2


def test_verify_and_unknown_case():
    r = pmod2.verify("5,4,1", 10000)
    assert r["passed"] and r["first_mismatch"] is None
    with pytest.raises(pmod2.UnknownCase):
        pmod2.verify("6,0,1")


def test_certify_worked_case():
    cert = pmod2.certify("11,6,1")
    assert cert["format"] == "cert-v1"
    assert cert["verdict"] == "PROVEN"
    assert cert["sturm_bound"] == 1080
    assert cert["p_set"] == [6]
    assert cert["min_order"]["global"] == "-15"
    low = pmod2.certify("11,6,1", j=14)
    assert low["verdict"] == "FAILED"
    assert low["failed_stage"] == "pole_clearing"


def test_sturm_bound():
    assert pmod2.sturm_bound(360, 44, True) == 1080
    assert pmod2.sturm_bound(264, 28, False) == 6336


def test_eta_quotient():
    e = pmod2.EtaQuotient.parse("eta(4)^24")
    assert e.level == 4
    assert e.ghn()["is_form"]
    assert pmod2.order_at_cusp(e, 0, 1) == Fraction(1)
    assert pmod2.order_at_cusp(e, 1, 4) == Fraction(4)
    # eta(4z)^24 = q^4 prod (1 - q^(32n))^3 mod 2, and the cube of the
    # Euler product is supported on triangular numbers.
    offset24, support = e.expand(200)
    assert offset24 == 96
    assert support == [32 * k * (k + 1) // 2 for k in range(4)]
    with pytest.raises(pmod2.ParseError):
        pmod2.EtaQuotient.parse("eta(0)")


def test_density():
    d = pmod2.odd_density("p", 10)
    assert d["odd_count"] == 7
    assert d["ratio"]["exact"] == "7/10"
    rows = pmod2.conjecture_table([1, 4], 4000)
    assert rows[1]["predicted"] == "1/8"
    assert rows[1]["frobenius_consistent"]
    assert pmod2.landau_check(100000)["strictly_decreasing"]
    assert pmod2.regular_relation_check(20000)["identity_holds"]


def test_run_cli():
    code, out, err = pmod2.run_cli(["verify", "--case", "5,4,1", "--terms", "1000"])
    assert code == 0 and "PASS" in out
    code, _, err = pmod2.run_cli(["verify", "--case", "6,0,1"])
    assert code == 2 and "--case" in err
