import statistics

import pytest

from propdiac.analysis import EmptyInput, bin_analysis, format_bin_report, pearson, quartile_edges
from propdiac.evaluate import EvalRecord
from propdiac.script import parse_arabic

from conftest import read_tsv

REF = parse_arabic("بَاب")


def rec(exact, freeman=0.5, frequency=0, distance=None):
    return EvalRecord(
        "x", REF, exact=exact, distance=(0 if exact else 1) if distance is None else distance,
        freeman=freeman, frequency=frequency,
    )


def freeman_bin_records():
    out = []
    for row in read_tsv("freeman_bins.tsv"):
        n, m, value = int(row["instances"]), int(row["matches"]), float(row["upper"]) - 0.05
        out += [rec(k < m, freeman=value) for k in range(n)]
    return out


def test_two_bins():
    records = [rec(True, 0.2), rec(False, 0.3), rec(True, 0.8)]
    rows = bin_analysis(records, "freeman", [0, 0.5, 1]).rows
    assert [r.accuracy for r in rows] == [0.5, 1.0]
    assert [r.instances for r in rows] == [2, 1]


def test_single_bin_matches_global_accuracy():
    records = freeman_bin_records()
    analysis = bin_analysis(records, "freeman", [0, 1])
    assert analysis.rows[0].accuracy == sum(r.exact for r in records) / len(records)


def test_edges_are_right_closed():
    rows = bin_analysis([rec(True, 0.3), rec(True, 0.0)], "freeman", [0, 0.3, 1]).rows
    assert [r.instances for r in rows] == [2, 0]
    # 3/10 computed in floating point lands in the 0.3 bin too
    rows = bin_analysis([rec(True, 0.1 * 3)], "freeman", [0, 0.3, 1]).rows
    assert rows[0].instances == 1


def test_freeman_bin_aggregates():
    records = freeman_bin_records()
    low = bin_analysis(records, "freeman", [0, 0.5, 1])
    assert (low.rows[0].instances, low.rows[0].matches) == (89, 77)
    assert round(100 * low.rows[0].accuracy, 1) == 86.5
    assert (low.rows[1].instances, low.rows[1].matches) == (3273, 2377)
    mid = bin_analysis(records, "freeman", [0, 0.9, 1])
    assert (mid.rows[0].instances, mid.rows[0].matches) == (1182, 835)
    assert round(100 * mid.rows[0].accuracy, 1) == 70.6
    assert round(100 * low.accuracy, 2) == 72.99


def test_weighted_bins_recompose_global_accuracy():
    records = freeman_bin_records()
    analysis = bin_analysis(records, "freeman", [k / 10 for k in range(11)])
    weighted = sum(r.accuracy * r.instances for r in analysis.rows if r.instances) / analysis.total
    assert weighted == pytest.approx(sum(r.exact for r in records) / len(records), abs=1e-12)
    assert [r.label for r in analysis.rows][:2] == ["10%", "20%"]


def test_quartiles():
    records = [rec(k % 2 == 0, frequency=f) for k, f in enumerate([1, 2, 3, 4, 5, 6, 7, 8])]
    analysis = bin_analysis(records, "frequency")
    assert [r.label for r in analysis.rows] == ["Q1", "Q2", "Q3", "Q4"]
    assert [r.instances for r in analysis.rows] == [2, 2, 2, 2]
    assert quartile_edges([1, 2, 3, 4, 5]) == [1, 2, 3, 4, 5]


def test_pearson_matches_statistics_module():
    xs, ys = [1.0, 2.0, 4.0, 7.0], [2.0, 1.0, 5.0, 9.0]
    assert pearson(xs, ys) == pytest.approx(statistics.correlation(xs, ys))
    assert pearson([1, 1, 1], [1, 2, 3]) is None
    assert pearson([1], [2]) is None


def test_correlations_use_filled_bins():
    records = freeman_bin_records()
    analysis = bin_analysis(records, "freeman", [k / 10 for k in range(11)])
    rows = analysis.rows
    expected = statistics.correlation([r.accuracy for r in rows], [r.average_distance for r in rows])
    assert analysis.correlations[("accuracy", "distance")] == pytest.approx(expected)


def test_errors():
    with pytest.raises(EmptyInput):
        bin_analysis([], "freeman")
    with pytest.raises(ValueError):
        bin_analysis([rec(True, 1.5)], "freeman", [0, 1])
    with pytest.raises(ValueError):
        bin_analysis([rec(True)], "freeman", [0.5, 0.2])
    with pytest.raises(ValueError):
        bin_analysis([rec(True)], "colour")


def test_report_format():
    text = format_bin_report(bin_analysis([rec(True, 0.2), rec(False, 0.8)], "freeman", [0, 0.5, 1]))
    lines = text.splitlines()
    assert lines[2].split("\t")[0] == "bin"
    assert lines[3].split("\t")[:2] == ["50%", "1"]
    assert "# accuracy: 50.00" in lines
