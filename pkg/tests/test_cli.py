import subprocess
import sys

import pytest

from dfamin import parse_dfa, read_dfa
from dfamin.cli import main
from dfamin.experiments import ROW_HEADER


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_round_trip(tmp_path, capsys):
    code, _, _ = run(capsys, "gen", "--n", "6", "--k", "2", "--count", "3", "--seed", "4", "--out", str(tmp_path))
    assert code == 0
    files = sorted(tmp_path.glob("*.dfa"))
    assert len(files) == 3
    for f in files:
        dfa = read_dfa(f)
        assert dfa.n == 6 and dfa.k == 2 and dfa.ts.is_canonical
    code, out, _ = run(capsys, "gen", "--n", "6", "--k", "2", "--seed", "4")
    assert parse_dfa(out) == read_dfa(files[0])


def test_gen_unary(capsys):
    code, out, _ = run(capsys, "gen", "--n", "5", "--k", "1", "--unary")
    assert code == 0
    assert parse_dfa(out).table[:4, 0].tolist() == [1, 2, 3, 4]
    assert run(capsys, "gen", "--n", "5", "--unary")[0] == 1


def test_gen_mode_mismatch(capsys):
    code, _, err = run(capsys, "gen", "--n", "300", "--mode", "exact")
    assert code == 1 and "exact_threshold" in err


def test_minimize_empty_finals(tmp_path, capsys):
    src = tmp_path / "in.dfa"
    src.write_text("dfa 3 2\ninitial 1\nfinals\n2 3\n3 1\n1 2\n")
    out = tmp_path / "out.dfa"
    code, stdout, _ = run(capsys, "minimize", "--algo", "moore", "--in", str(src), "--out", str(out), "--stats")
    assert code == 0
    assert read_dfa(out).n == 1
    assert "iterations=0" in stdout


@pytest.mark.parametrize("algo", ["moore", "hopcroft", "brzozowski", "tablefill"])
def test_minimize_partial_input(tmp_path, capsys, algo):
    src = tmp_path / "in.dfa"
    # a b* with undefined moves; the sink added for them stays non-final
    src.write_text("dfa 3 2\ninitial 1\nfinals 2\n2 0\n0 2\n1 1\n")
    code, out, err = run(capsys, "minimize", "--algo", algo, "--in", str(src), "--stats")
    assert code == 0
    dfa = parse_dfa(out)
    assert dfa.n == 3 and len(dfa.finals) == 1
    assert "minimal_states=3" in err


def test_minimize_bad_file(tmp_path, capsys):
    src = tmp_path / "bad.dfa"
    src.write_text("dfa 2 2\n")
    code, _, err = run(capsys, "minimize", "--in", str(src))
    assert code == 1 and "error" in err
    assert run(capsys, "minimize", "--in", str(tmp_path / "missing.dfa"))[0] == 1


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["minimize", "--algo", "bubble", "--in", "x"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["iterations", "--sizes", "a,b"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1


def test_bench_reproducible(tmp_path, capsys):
    args = ["bench", "--algos", "moore,hopcroft", "--sizes", "20,40", "--samples", "4", "--k", "2",
            "--seed", "6", "--threads", "2"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, *args, "--csv", str(a))[0] == 0
    assert run(capsys, *args, "--csv", str(b), "--threads", "1")[0] == 0

    def strip(path):
        lines = path.read_text().splitlines()
        return [line.rsplit(",", 1)[0] for line in lines]

    assert a.read_text().splitlines()[0] == ROW_HEADER
    assert strip(a) == strip(b)
    assert len(strip(a)) == 1 + 2 * 2 * 4


def test_bench_unknown_algo(capsys):
    assert run(capsys, "bench", "--algos", "moore,nope", "--sizes", "5")[0] == 1


def test_iterations_and_summary(tmp_path, capsys):
    summary = tmp_path / "s.csv"
    code, out, _ = run(capsys, "iterations", "--sizes", "16", "--samples", "5", "--seed", "1",
                       "--threads", "1", "--summary", str(summary))
    assert code == 0
    assert len(out.splitlines()) == 6
    assert summary.read_text().splitlines()[1].startswith("16,2,moore,5,")


def test_unary_exp(capsys):
    code, out, _ = run(capsys, "unary-exp", "--n", "8", "--exhaustive")
    assert code == 0
    assert out.splitlines()[1].startswith("8,1,moore,2048,")
    assert run(capsys, "unary-exp", "--n", "1")[0] == 1


def test_verify_counts(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "counts")
    assert code == 0 and out.startswith("PASS counts")


def test_verify_failure_exit_code(capsys, monkeypatch):
    from dfamin import cli
    from dfamin.verify import Check

    monkeypatch.setattr(cli, "run_suite", lambda name, seed: [Check("fake", False, "forced")])
    code, out, _ = run(capsys, "verify", "--suite", "counts")
    assert code == 2 and out.startswith("FAIL fake")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dfamin", "gen", "--n", "3", "--k", "1"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("dfa 3 1")
