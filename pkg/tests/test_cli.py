import io
import json

import pytest

from curvebounds.cli import EXIT_OK, EXIT_RANGE, EXIT_USAGE, improvement_grid, main


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def rows_of(tsv: str) -> list[dict]:
    lines = tsv.strip().splitlines()
    header = lines[0].split("\t")
    return [dict(zip(header, line.split("\t"))) for line in lines[1:]]


class TestBound:
    def test_wo3_serre_record(self):
        code, out, _ = run_cli("bound", "--q", "5", "--g", "19", "--method", "wo3-serre")
        assert code == EXIT_OK
        row = rows_of(out)[0]
        assert row["n1_upper"] == "53"
        assert row["t1_lower"] == "-1723/36"

    def test_ihara_small(self):
        code, out, _ = run_cli("bound", "--q", "3", "--g", "1", "--method", "ihara")
        assert code == EXIT_OK
        row = rows_of(out)[0]
        assert row["n1_upper"] == "7"

    def test_ihara_serre_integral_alpha_note(self):
        code, out, _ = run_cli("bound", "--q", "5", "--g", "10", "--method", "ihara-serre")
        assert code == EXIT_OK
        row = rows_of(out)[0]
        assert row["n1_upper"] == "36"
        assert "alpha integral; coincides with Ihara" in row["notes"]

    def test_best_mode_small_genus(self):
        code, out, _ = run_cli("bound", "--q", "5", "--g", "1")
        assert code == EXIT_OK
        row = rows_of(out)[0]
        # below the order-2 threshold only the Weil bounds apply
        assert row["method"] in ("weil", "weil-serre")
        assert row["n1_upper"] == "10"

    def test_best_mode_uses_refinements(self):
        code, out, _ = run_cli("bound", "--q", "5", "--g", "19")
        assert code == EXIT_OK
        row = rows_of(out)[0]
        assert row["n1_upper"] == "53"
        assert row["method"] == "wo3-serre"

    def test_matrix_literal_bound_a3(self):
        code, out, _ = run_cli(
            "bound", "--q", "5", "--g", "19", "--method", "wo3-serre",
            "--matrix", '{"d": 1, "two_a": 7, "b_x": 28, "b_y": -7}',
        )
        assert code == EXIT_OK
        assert rows_of(out)[0]["t1_lower"] == "-1723/36"

    def test_matrix_literal_bound_a2(self):
        code, out, _ = run_cli(
            "bound", "--q", "5", "--g", "4", "--method", "bound-a2",
            "--matrix", '{"d": 1, "two_a": 7, "b": 13}',
        )
        assert code == EXIT_OK
        assert rows_of(out)[0]["t1_lower"] == "-27/2"

    def test_invalid_q_exits_2(self):
        code, _, err = run_cli("bound", "--q", "6", "--g", "3")
        assert code == EXIT_USAGE
        assert "prime power" in err

    def test_no_check_allows_invalid_q(self):
        code, out, _ = run_cli("bound", "--q", "6", "--g", "3", "--no-check", "--method", "weil-serre")
        assert code == EXIT_OK

    def test_range_error_exits_1_and_names_range(self):
        code, _, err = run_cli("bound", "--q", "23", "--g", "2", "--method", "ihara")
        assert code == EXIT_RANGE
        assert "g >= 10" in err

    def test_bad_usage_exits_2(self):
        code, _, _ = run_cli("bound", "--q", "5")
        assert code == EXIT_USAGE

    def test_unknown_method_exits_2(self):
        code, _, _ = run_cli("bound", "--q", "5", "--g", "4", "--method", "nonsense")
        assert code == EXIT_USAGE

    def test_json_output(self):
        code, out, _ = run_cli("bound", "--q", "5", "--g", "4", "--method", "ihara-serre", "--json")
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload[0]["t1_lower"] == "-27/2"
        assert payload[0]["n1_upper"] == "19"


class TestTable1:
    def test_contains_expected_rows(self):
        code, out, _ = run_cli("table1")
        assert code == EXIT_OK
        rows = rows_of(out)
        pairs = {(int(r["q"]), int(r["g"])) for r in rows}
        assert (11, 8) in pairs
        assert {(53, 47), (53, 48), (53, 49), (53, 50)} <= pairs
        assert (81, 50) in pairs

    def test_rows_within_loop_bounds(self):
        from curvebounds.classical import g2_threshold, g3_threshold

        entries = improvement_grid(100, 50)
        for e in entries:
            assert e.g >= g2_threshold(e.q).integer
            assert e.g <= g3_threshold(e.q).exact.ceil()
            assert e.improved and e.ihara_serre_n < e.ihara_n

    def test_deterministic_output(self):
        _, first, _ = run_cli("table1", "--qmax", "40")
        _, second, _ = run_cli("table1", "--qmax", "40")
        assert first == second

    def test_ordering(self):
        code, out, _ = run_cli("table1", "--qmax", "30")
        rows = rows_of(out)
        keys = [(int(r["q"]), int(r["g"])) for r in rows]
        assert keys == sorted(keys)


class TestRec3:
    def test_exact_rows(self):
        code, out, _ = run_cli("rec3")
        assert code == EXIT_OK
        rows = rows_of(out)
        assert [r["t1_lower"] for r in rows] == [
            "-1723/36", "-12348/179", "-23352/193", "-33580/221",
        ]
        assert [r["n1_upper"] for r in rows] == ["53", "76", "129", "163"]

    def test_json_exact_strings(self):
        code, out, _ = run_cli("rec3", "--json")
        payload = json.loads(out)
        assert payload[0]["t1_lower"] == "-1723/36"


class TestScanA3:
    def test_finds_record_matrix(self):
        code, out, _ = run_cli("scan-a3", "--q", "11", "--g", "35")
        assert code == EXIT_OK
        row = rows_of(out)[0]
        assert (row["d"], row["two_a"], row["b_x"], row["b_y"]) == ("2", "28", "191", "-28")
        assert row["n1_upper"] == "163"


class TestSeq4q:
    def test_q64_gain_equals_cap(self):
        code, out, _ = run_cli("seq4q", "--qmax", "100")
        assert code == EXIT_OK
        rows = {r["q"]: r for r in rows_of(out)}
        assert rows["64"]["gain"] == "8/3"
        assert rows["64"]["cap"] == "8/3"
        assert "32" not in rows and "37" in rows

    def test_irrational_gain_rendering(self):
        _, out, _ = run_cli("seq4q", "--qmax", "40")
        row = rows_of(out)[0]
        assert row["q"] == "37"
        assert "sqrt(37)" in row["gain"]


class TestAsym:
    def test_row_count_for_q23(self):
        code, out, _ = run_cli("asym", "--q", "23", "--gmax", "222")
        assert code == EXIT_OK
        rows = rows_of(out)
        assert len(rows) == 213
        assert rows[0]["g"] == "10"
        assert rows[-1]["g"] == "222"


CSV_OK = """# records snapshot
q,g,best_upper,best_lower,source
11,8,55,54,unit-test
53,47,999,10,unit-test
9,12,12,10,unit-test
"""


class TestCompare:
    def test_statuses(self, tmp_path):
        path = tmp_path / "records.csv"
        path.write_text(CSV_OK, encoding="utf-8")
        code, out, err = run_cli("compare", "--records", str(path))
        assert code == EXIT_OK
        rows = {(r["q"], r["g"]): r for r in rows_of(out)}
        assert rows[("11", "8")]["record_status"] == "meets-record"
        assert rows[("53", "47")]["record_status"] == "new-record"
        assert rows[("9", "12")]["record_status"] == "worse-than-record"
        assert rows[("9", "17")]["record_status"] == "no-record-data"

    def test_warns_when_bound_below_lower(self, tmp_path):
        path = tmp_path / "records.csv"
        path.write_text("q,g,best_upper,best_lower\n11,8,60,58\n", encoding="utf-8")
        code, _, err = run_cli("compare", "--records", str(path))
        assert code == EXIT_OK
        assert "warning" in err and "(q=11, g=8)" in err

    def test_malformed_csv_exits_2_with_line(self, tmp_path):
        path = tmp_path / "records.csv"
        path.write_text("q,g,best_upper\n11,eight,55\n", encoding="utf-8")
        code, _, err = run_cli("compare", "--records", str(path))
        assert code == EXIT_USAGE
        assert "line 2" in err

    def test_bad_header_exits_2(self, tmp_path):
        path = tmp_path / "records.csv"
        path.write_text("field_size,genus,upper\n11,8,55\n", encoding="utf-8")
        code, _, err = run_cli("compare", "--records", str(path))
        assert code == EXIT_USAGE
        assert "line 1" in err

    def test_missing_file_exits_2(self):
        code, _, err = run_cli("compare", "--records", "/nonexistent/records.csv")
        assert code == EXIT_USAGE


class TestSelftest:
    def test_passes(self):
        code, out, _ = run_cli("selftest")
        assert code == EXIT_OK
        assert "FAIL" not in out
        assert out.count("PASS") >= 5
