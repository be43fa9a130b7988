import math

import pytest

import akh


def test_catalog_lists_models_and_recipes():
    names = akh.catalog()
    for n in ("torus4", "kodaira-thurston", "nilpotent6", "grid-flat", "grid-varying"):
        assert n in names


def test_kodaira_thurston_d2_and_ak_pass():
    entries, meta = akh.verify("kodaira-thurston", ["d2", "ak"])
    assert len(entries) == 17
    assert all(e["verdict"] in ("pass", "exact") for e in entries)
    assert meta["model"] == "kodaira-thurston"


def test_harmonic_table_kodaira_thurston():
    t = akh.harmonic_table("kodaira-thurston")
    assert t["de_rham"] == [1, 3, 4, 3, 1]
    assert t["conjugation_symmetric"] and t["hodge_symmetric"]


def test_croke_constants_n2():
    c = akh.croke_constants(2)
    assert abs(c["C_tilde"] - 1 / (128 * math.pi**2)) < 1e-12
    assert abs(c["C"] - 9 / (8 * math.sqrt(2) * math.pi)) < 1e-12
    with pytest.raises(akh.DomainError):
        akh.croke_constants(1)


def test_unknown_suite_rejected():
    with pytest.raises(akh.ArgumentError):
        akh.verify("torus4", "d2,bogus")


def test_grid_soundness_flat():
    entries, meta = akh.verify("grid-flat", "soundness", resolutions=(8, 16))
    assert all(e["verdict"] != "fail" for e in entries)
    assert meta["fourier_counts"]["betti_resolved"] == [1, 4, 6, 4, 1]


def test_deterministic_reports():
    a = akh.verify("torus4", "d2,ak")[0]
    b = akh.verify("torus4", "d2,ak")[0]
    assert a == b
