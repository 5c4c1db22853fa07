import pytest

from lleb.data import export
from lleb.models.primary import all_primary_points
from lleb.models.symmetry import certify
from lleb.models.trivial import sample_trivial
from lleb.modules.counterexample import make_cex_params, verify_counterexample


def test_primary_round_trip(tmp_path, params):
    points = all_primary_points(params)
    path = export.write_json(tmp_path / "primary.json", "primary",
                             {"points": [export.primary_to_dict(bp) for bp in points]})
    loaded = export.load_json(path)
    assert [(bp.k, bp.slot, bp.label) for bp in loaded] == [(bp.k, bp.slot, bp.label) for bp in points]
    for a, b in zip(loaded, points):
        assert abs(a.t - b.t) <= 1e-11 * max(1.0, abs(b.t))
        assert abs(a.point.a - b.point.a) <= 1e-11 * abs(b.point.a)


def test_certificate_round_trip(tmp_path, params):
    cert = certify(7, 1, params)
    first = export.write_json(tmp_path / "a.json", "certificate", {"certificate": export.certificate_to_dict(cert)})
    loaded = export.load_json(first)
    assert (loaded.q, loaded.p_div, loaded.total, loaded.certified, loaded.kind) == (7, 1, -4, True,
                                                                                     "period-septupling")
    assert [j.delta_star for j in loaded.jumps] == [j.delta_star for j in cert.jumps]
    second = export.write_json(tmp_path / "b.json", "certificate", {"certificate": export.certificate_to_dict(loaded)})
    assert export.load_json(second) == loaded
    assert first.read_bytes() == second.read_bytes()


def test_report_round_trip(tmp_path):
    report = verify_counterexample(3, make_cex_params(2.5))
    path = export.write_json(tmp_path / "r.json", "counterexample", {"report": export.report_to_dict(report)})
    loaded = export.load_json(path)
    assert loaded.passed and [c.name for c in loaded.claims] == ["i", "ii", "iii"]
    assert [c.checked for c in loaded.claims] == [c.checked for c in report.claims]


def test_unknown_schema(tmp_path):
    path = tmp_path / "x.json"
    path.write_text('{"schema": "something/1"}')
    with pytest.raises(ValueError):
        export.load_json(path)


def test_csv_is_deterministic(tmp_path, params):
    rows = export.trivial_rows(sample_trivial(params, n=101))
    a = export.write_csv(tmp_path / "a.csv", export.TRIVIAL_HEADER, rows)
    b = export.write_csv(tmp_path / "b.csv", export.TRIVIAL_HEADER, rows)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == ",".join(export.TRIVIAL_HEADER) and len(lines) == 102


def test_diagram(tmp_path, params):
    trivial = sample_trivial(params, n=201)
    a = export.plot_diagram(tmp_path / "a.svg", trivial, primary_points=all_primary_points(params), title="T")
    b = export.plot_diagram(tmp_path / "b.svg", trivial, primary_points=all_primary_points(params), title="T")
    text = a.read_text()
    assert "<svg" in text
    assert a.read_bytes() == b.read_bytes()
