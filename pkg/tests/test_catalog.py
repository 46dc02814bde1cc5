from __future__ import annotations

import pytest

from kcontact import catalog
from kcontact.calculus import lie_bracket
from kcontact.distrib import ad_distribution, default_points, derived_flag, generic_rank, kcontact_verify
from kcontact.parser import parse_chart, parse_poly, parse_vector_field

CHECKSUM = "69b78ba3179a0cbd01104eee9f0d2adb3ff603461072e426ae33506a80f072fd"

NAMES = [
    "class1", "class2", "class3", "class4", "class5", "class6", "class7", "class8",
    "zero_trailer", "one_trailer", "cartan_36", "cartan_235", "cartan_47qc",
]


@pytest.fixture(scope="module")
def reports():
    return {n: catalog.verify_entry(n) for n in NAMES}


def finding_names(rep):
    return sorted(c.name for c in rep.findings)


def test_entries():
    assert catalog.list_entries() == NAMES
    with pytest.raises(KeyError):
        catalog.get_entry("class9")


def test_transcription_checksum():
    assert catalog.transcription_checksum() == CHECKSUM


@pytest.mark.parametrize("name", ["class1", "class2", "class4", "class6", "zero_trailer", "one_trailer",
                                  "cartan_36", "cartan_47qc"])
def test_clean_entries(reports, name):
    rep = reports[name]
    assert rep.ok, [c.to_json() for c in rep.checks if c.status != "pass"]


def test_no_kit_failures(reports):
    for rep in reports.values():
        assert not rep.failures, rep.entry


def test_class3_x5_zero_branch(reports):
    rep = reports["class3"]
    names = finding_names(rep)
    assert names == ["x5 = 0: S3 is a Lie symmetry", "x5 = 0: three-contact"]
    f = rep.check("x5 = 0: S3 is a Lie symmetry")
    assert f.computed == "[S3,X2] = x5*d_x2 not in D"
    assert f.locus == "Table 1, class 3, x5=0 branch"
    assert rep.check("x5 != 0: three-contact").status == "pass"


def test_class5(reports):
    rep = reports["class5"]
    assert finding_names(rep) == [
        "constants satisfy Jacobi",
        "global: S + D spans TM (spanning-locus refinement)",
        "global: four-contact",
        "structure constants",
    ]
    assert "[X2,X4]" in rep.check("structure constants").computed
    locus = [l for l in rep.loci if l["name"] == "global: spanning locus"][0]
    assert locus["description"] == "{x6 = 0}"
    for i in range(1, 5):
        assert rep.check(f"global: S{i} is a Lie symmetry").status == "pass"


def test_class6(reports):
    rep = reports["class6"]
    assert rep.check("k-contact verdict").computed == "not-k-contact corroborated"
    ranks = [c.computed for c in rep.checks if c.name.startswith("ad-flag rank at")]
    assert ranks == ["5", "5", "5", "6"]


@pytest.mark.parametrize("cls", [7, 8])
def test_dense_classes_definite(reports, cls):
    rep = reports[f"class{cls}"]
    assert all(c.status in ("pass", "finding") for c in rep.checks)
    span = [c for c in rep.checks if "spans TM" in c.name][0]
    locus = [l for l in rep.loci if "spanning locus" in l["name"]][0]
    # certificate not identically zero, or a finding is present
    assert span.status == "pass" and locus["determinant"] not in (None, "0") or span.status == "finding"
    assert rep.check("Y3 matches its generating function A3").status == "finding"
    for i in (1, 2, 4):
        assert rep.check(f"Y{i} matches its generating function A{i}").status == "pass"
    assert rep.check("dense subset: four-contact-on-dense-subset").status == "finding"


def test_class8_sign_repaired_candidates():
    # flipping the printed sign of Y3's d_x1 component turns every class-8 check green
    e = catalog.get_entry("class8")
    ys = list(catalog._Y)
    ys[2] = ys[2].replace("2*x1^2*B*d_x1", "-2*x1^2*B*d_x1", 1)
    defs = catalog._defs(e.chart)
    s = [parse_vector_field(f"{y} + ({f})*d_x6", e.chart, defs) for y, f in zip(ys, catalog._F8)]
    kr = kcontact_verify(e.distribution, s, e.sample_points)
    assert kr.overall == "pass-on-dense-subset"


def test_cartan_235(reports):
    rep = reports["cartan_235"]
    assert rep.check("derived flag").computed == "ranks (2, 3, 5)"
    assert finding_names(rep) == ["global: S + D spans TM (spanning-locus refinement)", "global: three-contact"]
    assert "{q = 0}" in rep.check("global: S + D spans TM (spanning-locus refinement)").computed


def test_cartan_235_validation():
    ch = parse_chart("x y z p q")
    with pytest.raises(ValueError):
        catalog.cartan_235(parse_poly("q", ch))
    with pytest.raises(ValueError):
        catalog.cartan_235(parse_poly("p*q^2", ch))
    d = catalog.cartan_235(parse_poly("q^3", ch))
    assert derived_flag(d).ranks == (2, 3, 5)
    s = [parse_vector_field(t, ch) for t in ("d_x", "d_y", "d_z")]
    kr = kcontact_verify(d, s, default_points(ch, "q3"))
    assert all(v.passed for v in kr.symmetry_checks)
    assert kr.overall == "pass-on-dense-subset"


def test_n_trailer_zero_matches_catalog():
    d = catalog.n_trailer(0)
    zt = catalog.get_entry("zero_trailer")
    assert list(d.generators) == zt.generators
    x1, x2 = d.generators
    x3 = lie_bracket(x1, x2)
    assert x3 == zt.vg_basis[2]
    assert lie_bracket(x1, x3) == -x2
    assert lie_bracket(x2, x3).is_zero()


def test_n_trailer_rejects_negative():
    with pytest.raises(ValueError):
        catalog.n_trailer(-1)


@pytest.mark.parametrize("name", [f"class{i}" for i in (1, 2, 3, 4, 5, 7, 8)])
def test_ad_flag_full_rank(name):
    e = catalog.get_entry(name)
    assert generic_rank(ad_distribution(*e.generators, e.chart.dim - 2)) == e.chart.dim


def test_zero_trailer_suite():
    rep = catalog.zero_trailer_contact_suite()
    assert rep.ok
    assert rep.check("d eta3 = eta1^eta2").status == "pass"
    assert rep.check("eta1^eta2^eta3 = volume").computed == "1"


def test_report_json_has_no_timings_by_default(reports):
    doc = reports["class1"].to_json()
    assert "wall_time" not in doc
    assert "wall_time" in reports["class1"].to_json(timings=True)
