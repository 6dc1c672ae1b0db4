import json
from fractions import Fraction

from splitbin.cli import main
from splitbin.core import (
    instance_to_json,
    load_instance,
    load_packing,
    verify_packing,
)
from splitbin.core import Instance

F = Fraction


def write_instance(path, items, m, k):
    inst = Instance(items=tuple(F(s) for s in items), m=m, k=k)
    path.write_text(json.dumps(instance_to_json(inst)))
    return inst


class TestGen:
    def test_gen_writes_instance(self, tmp_path, capsys):
        out = tmp_path / "inst.json"
        code = main(
            ["gen", "--n", "6", "--m", "2", "--k", "3", "--seed", "7",
             "--out", str(out)]
        )
        assert code == 0
        inst = load_instance(str(out))
        assert inst.n == 6 and inst.m == 2 and inst.k == 3

    def test_gen_stdout(self, capsys):
        assert main(["gen", "--n", "2", "--m", "1", "--k", "2"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert len(data["items"]) == 2

    def test_gen_infeasible_spec_is_format_error(self, tmp_path):
        code = main(["gen", "--n", "9", "--m", "2", "--k", "2"])
        assert code == 3


class TestSolveVerifyExact:
    def test_round_trip(self, tmp_path, capsys):
        inst_path = tmp_path / "inst.json"
        pack_path = tmp_path / "pack.json"
        trace_path = tmp_path / "trace.json"
        inst = write_instance(inst_path, ["1", "1", "1", "1"], 2, 2)

        code = main(
            ["solve", "--eps", "2", "--input", str(inst_path),
             "--out", str(pack_path), "--trace", str(trace_path)]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("value ")

        pack = load_packing(str(pack_path))
        assert verify_packing(inst, pack).feasible

        trace = json.loads(trace_path.read_text())
        assert trace["eps_denominator"] == 2
        assert sum(1 for r in trace["guesses"] if r["selected"]) == 1

        code = main(
            ["verify", "--input", str(inst_path), "--packing", str(pack_path)]
        )
        assert code == 0
        assert "feasible" in capsys.readouterr().out

    def test_solve_infeasible_exit_code(self, tmp_path):
        inst_path = tmp_path / "inst.json"
        write_instance(inst_path, ["1", "1", "1"], 1, 2)
        assert main(["solve", "--eps", "2", "--input", str(inst_path)]) == 1

    def test_verify_rejects_wrong_packing(self, tmp_path, capsys):
        inst_path = tmp_path / "inst.json"
        pack_path = tmp_path / "pack.json"
        write_instance(inst_path, ["1"], 1, 1)
        pack_path.write_text(json.dumps({"bins": [[{"item": 0, "size": "1/2"}]]}))
        code = main(
            ["verify", "--input", str(inst_path), "--packing", str(pack_path)]
        )
        assert code == 1
        assert "violation" in capsys.readouterr().out

    def test_exact(self, tmp_path, capsys):
        inst_path = tmp_path / "inst.json"
        write_instance(inst_path, ["3", "3", "3"], 2, 2)
        assert main(["exact", "--input", str(inst_path)]) == 0
        assert "value 9/2" in capsys.readouterr().out

    def test_exact_infeasible(self, tmp_path, capsys):
        inst_path = tmp_path / "inst.json"
        write_instance(inst_path, ["1", "1", "1"], 1, 2)
        assert main(["exact", "--input", str(inst_path)]) == 1
        assert "infeasible" in capsys.readouterr().out

    def test_exact_resource_cap(self, tmp_path):
        inst_path = tmp_path / "inst.json"
        write_instance(inst_path, ["1"] * 10, 3, 4)
        assert main(["exact", "--input", str(inst_path)]) == 2

    def test_missing_file_is_format_error(self, tmp_path):
        missing = str(tmp_path / "nope.json")
        assert main(["solve", "--eps", "2", "--input", missing]) == 3
        assert main(["exact", "--input", missing]) == 3


class TestBench:
    def test_bench_reports(self, tmp_path, capsys):
        d = tmp_path / "instances"
        d.mkdir()
        write_instance(d / "a.json", ["1", "1", "1", "1"], 2, 2)
        write_instance(d / "b.json", ["3", "3", "3"], 2, 2)
        csv_path = tmp_path / "report.csv"
        json_path = tmp_path / "report.json"
        code = main(
            ["bench", "--dir", str(d), "--eps", "2,3",
             "--csv", str(csv_path), "--json", str(json_path)]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "ran 4 (instance, eps) pairs, 0 failures" in out
        assert "guarantee_holds True" in out

        rows = json.loads(json_path.read_text())["rows"]
        assert len(rows) == 4
        for row in rows:
            assert row["error"] is None
            assert F(row["ratio"]) >= 1
        header = csv_path.read_text().splitlines()[0]
        assert "eptas_value" in header and "ratio" in header

    def test_bench_missing_dir(self, tmp_path):
        code = main(["bench", "--dir", str(tmp_path / "nope"), "--eps", "2"])
        assert code == 3
