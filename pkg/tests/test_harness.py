import shutil

import pytest

from c5m.harness import (COLUMNS, MISSING, UNAVAILABLE, EigenRow, cross_account, curve_column_values,
                         load_tables, match_curve, verify_checksums, verify_fake_curve)


def test_checksums_hold(tables):
    assert all(verify_checksums().values())


def test_tampered_table_is_refused(tmp_path):
    from c5m.harness import data_dir
    d = tmp_path / "tables"
    shutil.copytree(data_dir(), d)
    p = d / "levels.csv"
    p.write_text(p.read_text().replace("400", "401", 1))
    with pytest.raises(ValueError):
        load_tables(str(d))


def test_table_shapes(tables):
    assert len(tables.hecke_primes) == len(COLUMNS) == 14
    assert len(tables.curves) == 12
    assert tables.cuspidal_dims["400"] == 1
    assert {r.label for r in tables.eigen_rows} <= set(tables.levels)


def test_column_primes_have_the_right_norms(tables):
    for c in COLUMNS:
        p = int(c.rstrip("abcd"))
        P = tables.column_prime(c)
        assert P.p == p
        assert P.norm() == {2: 16, 5: 5}.get(p, p)


def test_bullets_sit_on_bad_primes(tables):
    for r in tables.eigen_rows:
        n = int(r.label.rstrip("ab"))
        for c in COLUMNS:
            if r.value(c) == UNAVAILABLE:
                assert n % int(c.rstrip("abcd")) == 0


def test_curve_701_matches_its_row(tables):
    E = tables.curves["701"]
    rep = match_curve(E, tables.rows("701")[0], "701", tables)
    assert rep.passed and rep.conductor_norm == 701
    assert all(r.verdict == "match" for r in rep.records)


def test_a_perturbed_row_is_caught(tables):
    E = tables.curves["701"]
    row = tables.rows("701")[0]
    vals = list(row.values)
    vals[2] = vals[2] + 1
    rep = match_curve(E, EigenRow(row.label, row.index, tuple(vals)), "701", tables)
    assert not rep.passed
    assert [r.column for r in rep.records if r.verdict == "mismatch"] == ["11a"]


def test_missing_entries_are_skipped(tables):
    E = tables.curves["701"]
    row = tables.rows("701")[0]
    vals = (MISSING,) + row.values[1:]
    rep = match_curve(E, EigenRow(row.label, row.index, vals), "701", tables)
    assert rep.passed and rep.records[0].verdict == "skipped"


def test_wrong_label_fails_conductor_check(tables):
    rep = match_curve(tables.curves["701"], None, "701", tables, label="2201")
    assert not rep.conductor_ok


def test_witness_curve_prefers_second_row(tables):
    A = tables.witness_curve
    r0, r1 = tables.rows("3641b")[:2]
    assert match_curve(A, r1, tables=tables).passed
    assert not match_curve(A, r0, tables=tables).passed


def test_column_values_mark_bad_primes(tables):
    N, vals = curve_column_values(tables.curves["701"], tables)
    assert N == 701 and UNAVAILABLE not in vals.values()


def test_fake_curve_relations(tables):
    rep = verify_fake_curve(tables)
    assert rep.passed
    assert sorted({r[0] for r in rep.records}) == [2, 31, 41]
    assert set(rep.bijections) == {31, 41}


def test_cross_account_covers_every_row(tables):
    res = cross_account(tables, check_curves=False)
    # every eigenvalue row is explained; 3721 is covered by characteristic polynomials instead of a row
    assert {(a.label, a.row) for a in res} >= {(r.label, r.index) for r in tables.eigen_rows}
    assert ("3721", 0) in {(a.label, a.row) for a in res}
    assert all(a.verified for a in res)


@pytest.mark.slow
def test_cross_account_with_curves(tables):
    assert all(a.verified for a in cross_account(tables))
