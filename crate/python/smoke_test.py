"""Smoke test for the `schober` extension module. Run after `pip install --no-build-isolation crates/py`."""

import schober


def main():
    o = schober.LBComplex.line_bundle(2, -3)
    assert o.rgamma() == {2: 1}, o.rgamma()
    assert schober.rhom_dims(schober.LBComplex.line_bundle(1, 0), schober.LBComplex.line_bundle(1, -2)) == {1: 1}
    again = schober.LBComplex.from_json(o.to_json())
    assert again == o and again.m == 2
    assert not o.is_zero()
    assert schober.h_dim(3, 0, 2) == 10

    r = schober.check_spherical(3)
    assert all(a["pass"] for a in r["axioms"]), r["axioms"]
    assert all(m["compare"] for m in schober.compare_monad(2))

    d = schober.PerverseDiskDatum([["1"]], [["1/2"]])
    assert d.is_perverse() and d.has_no_origin_sections()
    assert not schober.PerverseDiskDatum([["1"]], [["1"]]).is_perverse()

    led = schober.ledger(["1/2", "1/2"])
    assert led["entry"]["shift"] == 2 and led["coherent"] == {"twist": -1, "shift": 2}

    t = schober.CellSheaf.twist()
    assert t.hom_dims(t) == {0: 1}
    tt = t.convolve(t)
    assert schober.CellSheaf.unit().hom_dims(tt) == {1: 1}
    assert schober.ccc_compare()["pass"]
    l2 = schober.CellSheaf.local_system("2")
    assert l2.hom_dims(l2) == {0: 1, 1: 1}
    assert l2.hom_dims(schober.CellSheaf.local_system("3")) == {}

    c = schober.classify_point(["0", "2", "3"], ["0", "0", "0"], ["0"])
    assert c["kind"] == "zero-fiber" and c["codim"] == 4
    assert schober.verify_section_bijectivity(2, "1/4", samples=50)["pass"]

    code, report = schober.run_cli(["cellccc", "compare"])
    assert code == 0 and report["tag"] == "CCC-n2"
    code, report = schober.run_cli(["fan"])
    assert code == 2 and report is None
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
