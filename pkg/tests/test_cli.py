import json

import pytest

from optmpp.cli import main

EQ1 = "p cnf 4 3\n1 -3 4 0\n-1 2 -4 0\n-2 3 4 0\n"


def summary(out: str) -> dict:
    line = [ln for ln in out.splitlines() if ln.startswith("SUMMARY ")][-1]
    return dict(tok.split("=", 1) for tok in line.split()[1:])


def runrecords(err: str) -> list:
    return [json.loads(ln[len("RUNRECORD "):]) for ln in err.splitlines() if ln.startswith("RUNRECORD ")]


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return _run


def test_gen_and_solve_nine_puzzle(run, tmp_path):
    inst = tmp_path / "p.json"
    code, out, _ = run("gen", "npuzzle", 3, "--out", inst)
    assert code == 0 and summary(out)["robots"] == "9"
    plan = tmp_path / "plan.json"
    code, out, err = run("solve", inst, "--objective", "makespan", "--out", plan)
    assert code == 0
    assert summary(out)["makespan"] == "4"
    recs = runrecords(err)
    assert len(recs) == 1 and recs[0]["command"] == "solve"
    assert recs[0]["result"]["makespan"] == 4 and str(inst) in recs[0]["inputs"]
    code, out, _ = run("validate", inst, plan)
    assert code == 0 and summary(out)["status"] == "valid"


def test_solve_twopath_total_distance(run, tmp_path):
    inst = tmp_path / "t.json"
    run("gen", "twopath", 1, "--out", inst)
    code, out, _ = run("solve", inst, "--objective", "total-distance")
    assert code == 0 and summary(out)["value"] == "12"


def test_solve_trivial_instance(run, tmp_path):
    inst = tmp_path / "i.json"
    inst.write_text(json.dumps({"vertices": [{"id": 0}, {"id": 1}], "edges": [[0, 1]],
                                "robots": [{"id": 0, "start": 1, "goal": 1}]}))
    code, out, _ = run("solve", inst, "--objective", "total-arrival")
    s = summary(out)
    assert code == 0
    assert [s[k] for k in ("total-arrival", "makespan", "total-distance", "max-distance")] == ["0"] * 4


def test_solve_exit_codes(run, tmp_path):
    swap = tmp_path / "swap.json"
    swap.write_text(json.dumps({"vertices": [{"id": 0}, {"id": 1}], "edges": [[0, 1]],
                                "robots": [{"id": 0, "start": 0, "goal": 1}, {"id": 1, "start": 1, "goal": 0}]}))
    assert run("solve", swap, "--objective", "makespan")[0] == 3
    cyc = tmp_path / "c.json"
    run("gen", "cycle", 12, "--out", cyc)
    code, out, _ = run("solve", cyc, "--objective", "max-distance", "--states", 5)
    assert code == 2 and summary(out)["status"] == "budget-exhausted"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("solve", bad, "--objective", "makespan")[0] == 4
    assert run("solve", tmp_path / "missing.json", "--objective", "makespan")[0] == 4
    assert run("solve", cyc, "--objective", "fastest")[0] == 4


def test_gen_rejects_bad_parameter(run):
    assert run("gen", "npuzzle", 1)[0] == 4
    assert run("gen", "cycle", 0)[0] == 4


def test_gen_is_deterministic(run, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("gen", "cycle", 10, "--out", a)
    run("gen", "cycle", 10, "--out", b)
    assert a.read_bytes() == b.read_bytes()
    assert len(json.loads(a.read_text())["vertices"]) == 15


@pytest.mark.parametrize("target,K", [("mtat", 35), ("m3pp", 5), ("mtd", 257), ("mmd", 7)])
def test_reduce_witness_validate(run, tmp_path, target, K):
    cnf = tmp_path / "f.cnf"
    cnf.write_text(EQ1)
    inst = tmp_path / f"{target}.json"
    code, out, _ = run("reduce", cnf, "--target", target, "--out", inst)
    assert code == 0 and summary(out)["K"] == str(K)
    meta = json.loads((tmp_path / f"{target}.meta.json").read_text())
    assert meta["K"] == K and "v_c1^g" in meta["name_map"]
    plan = tmp_path / "w.json"
    code, out, _ = run("witness", tmp_path / f"{target}.meta.json", "--auto", "--out", plan)
    assert code == 0
    key = {"mtat": "total-arrival", "m3pp": "makespan", "mtd": "total-distance", "mmd": "max-distance"}[target]
    assert summary(out)[key] == str(K)
    code, out, _ = run("validate", inst, plan)
    assert code == 0


def test_witness_with_explicit_assignment(run, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text(EQ1)
    run("reduce", cnf, "--target", "mtat", "--out", tmp_path / "i.json")
    meta = tmp_path / "i.meta.json"
    assert run("witness", meta, "1111")[0] == 0
    code, out, err = run("witness", meta, "0010")
    assert code == 4 and "unsatisfied" in err
    assert run("witness", meta)[0] == 4


def test_witness_unsatisfiable_auto(run, tmp_path):
    clauses = [f"{a} {b} {c} 0" for a in (1, -1) for b in (2, -2) for c in (3, -3)]
    cnf = tmp_path / "u.cnf"
    cnf.write_text("p cnf 3 8\n" + "\n".join(clauses) + "\n")
    run("reduce", cnf, "--target", "mtat", "--out", tmp_path / "u.json")
    code, _, err = run("witness", tmp_path / "u.meta.json", "--auto")
    assert code == 4 and "unsatisfiable" in err


def test_reduce_errors(run, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text(EQ1)
    assert run("reduce", cnf, "--target", "mtd", "--two-groups", "--out", tmp_path / "x.json")[0] == 4
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 3 1\n1 1 2 0\n")
    assert run("reduce", bad, "--target", "mtat", "--out", tmp_path / "y.json")[0] == 4


def test_reduce_two_groups(run, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text(EQ1)
    code, out, _ = run("reduce", cnf, "--target", "m3pp", "--two-groups", "--out", tmp_path / "g.json")
    assert code == 0 and summary(out)["grouped"] == "true"
    code, out, _ = run("witness", tmp_path / "g.meta.json", "--auto", "--out", tmp_path / "gp.json")
    assert summary(out)["makespan"] == "5"
    assert run("validate", tmp_path / "g.json", tmp_path / "gp.json")[0] == 0


def test_validate_reports_violations(run, tmp_path):
    inst = tmp_path / "i.json"
    inst.write_text(json.dumps({"vertices": [{"id": 0}, {"id": 1}, {"id": 2}], "edges": [[0, 1], [1, 2]],
                                "robots": [{"id": 0, "start": 0, "goal": 1}, {"id": 1, "start": 1, "goal": 0}]}))
    plan = tmp_path / "p.json"
    plan.write_text(json.dumps({"horizon": 1, "paths": {"0": [0, 1], "1": [1, 0]}}))
    code, out, _ = run("validate", inst, plan)
    assert code == 1
    assert summary(out)["kinds"] == "head-on"
    plan.write_text(json.dumps({"horizon": 1, "paths": {"0": [0, 1]}}))
    assert run("validate", inst, plan)[0] == 4


@pytest.mark.parametrize("args,front", [
    (("--family", "cycle", "--param", 10, "--pair", "total-arrival,makespan"), "(22,14);(23,11)"),
    (("--family", "twopath", "--param", 1, "--pair", "total-arrival,total-distance"), "(16,13);(18,12)"),
    (("--family", "cycle", "--param", 2, "--pair", "total-arrival,makespan"), "(7,3)"),
])
def test_pareto_command(run, args, front):
    code, out, _ = run("pareto", *args)
    assert code == 0
    assert summary(out)["front"] == front
    assert summary(out)["exhaustive"] == "true"


def test_pareto_input_errors(run):
    assert run("pareto", "--family", "cycle", "--pair", "makespan")[0] == 4
    assert run("pareto", "--pair", "makespan,total-arrival")[0] == 4


def test_solved_plan_round_trips_byte_identical(run, tmp_path):
    inst = tmp_path / "c.json"
    run("gen", "cycle", 3, "--out", inst)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("solve", inst, "--objective", "total-distance", "--out", a)
    run("solve", inst, "--objective", "total-distance", "--out", b)
    assert a.read_bytes() == b.read_bytes()
    assert run("validate", inst, a)[0] == 0
