import sgforest as sg
from sgforest import cli
from sgforest.cli import emit_counts, emit_ratios, fibonacci_check, main

from _tables import N_G


def run(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_count_small(capsys):
    code, out, err = run(["count", "--max-genus", "6"], capsys)
    assert code == 0
    assert out.startswith("g,count\n0,1\n")
    assert out.endswith("6,23\n")


def test_wilf_trimmed(capsys):
    code, out, _ = run(
        ["wilf", "--max-genus", "10", "--trim-denominator", "3",
         "--bound-genus", "100"], capsys)
    assert code == 0
    assert out.endswith("10,19\n")


def test_tsv_format(capsys):
    code, out, _ = run(["count", "--max-genus", "4", "--format", "tsv"], capsys)
    assert code == 0
    assert "g\tcount\n" in out
    assert out.endswith("4\t7\n")


def test_pretty_format_groups_digits(capsys):
    code, out, _ = run(["count", "--max-genus", "13", "--format", "pretty"],
                       capsys)
    assert code == 0
    assert "1 001" in out  # 13 -> 1001, grouped with thin spaces


def test_emit_counts_depth_zero():
    rep = sg.zero_report(0, "p")
    rep.counts = [1]
    rep.nodes_visited = 1
    assert emit_counts(rep) == "g,count\n0,1\n"


def test_ratios_from_counts(tmp_path, capsys):
    counts = tmp_path / "counts.csv"
    code, out, _ = run(
        ["count", "--max-genus", "6", "--out", str(counts)], capsys)
    assert code == 0
    code, out, _ = run(["ratios", str(counts)], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "g,count,ratio"
    assert lines[1] == "0,1,"
    assert lines[2] == "1,1,1.000000"
    assert lines[-1] == "6,23,1.916667"


def test_ratio_rounding_matches_reference_values():
    # 1234294 * 1.464807 ~= 1808002.5, so six half-even digits give .464807
    csv = "g,count\n" + "".join(f"{g},{c}\n" for g, c in (
        (0, 1), (1, 1234294), (2, 1808003)))
    out = emit_ratios(csv)
    assert out.splitlines()[3] == "2,1808003,1.464807"


def test_ratios_handles_zero_previous():
    out = emit_ratios("g,count\n0,0\n1,5\n")
    assert out.splitlines()[2] == "1,5,"


def test_ratios_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("genus;count\n", encoding="utf-8")
    code, _, err = run(["ratios", str(bad)], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_ratios_missing_file(tmp_path, capsys):
    code, _, err = run(["ratios", str(tmp_path / "nope.csv")], capsys)
    assert code == 3
    assert err.startswith("error:")


def test_fib_check_artificial_violation(tmp_path, capsys):
    f = tmp_path / "c.csv"
    f.write_text("g,count\n0,1\n1,1\n2,1\n", encoding="utf-8")
    code, out, _ = run(["fib-check", str(f)], capsys)
    assert code == 0  # informational either way
    assert "violation at g=2: 1 < 1 + 1" in out


def test_fib_check_real_counts(tmp_path, capsys):
    counts = tmp_path / "counts.csv"
    assert main(["count", "--max-genus", "15", "--out", str(counts)]) == 0
    code, out, _ = run(["fib-check", str(counts)], capsys)
    assert code == 0
    assert out == "no violations\n"


def test_fibonacci_check_reference_prefix():
    csv = "g,count\n" + "".join(f"{g},{c}\n" for g, c in enumerate(N_G[:31]))
    assert fibonacci_check(csv) == "no violations\n"


def test_usage_errors(capsys):
    assert run(["count", "--max-genus", "6", "--trim-denominator", "2"],
               capsys)[0] == 2
    assert run(["count", "--max-genus", "6", "--bound-genus", "5"],
               capsys)[0] == 2
    assert run(["count", "--max-genus", "-1"], capsys)[0] == 2
    assert run(["count", "--max-genus", "6", "--workers", "0"], capsys)[0] == 2
    assert run(["count", "--max-genus", "6", "--frontier-genus", "9"],
               capsys)[0] == 2
    assert run(["no-such-command"], capsys)[0] == 2
    assert run(["count"], capsys)[0] == 2  # --max-genus required


def test_workers_env_default(monkeypatch, capsys):
    monkeypatch.setenv("SGFOREST_WORKERS", "2")
    code, out, _ = run(["count", "--max-genus", "8"], capsys)
    assert code == 0
    assert out.endswith("8,67\n")
    monkeypatch.setenv("SGFOREST_WORKERS", "zebra")
    assert run(["count", "--max-genus", "8"], capsys)[0] == 2


def test_output_files_identical_across_workers(tmp_path, capsys):
    paths = []
    for i, (w, fg) in enumerate([(1, 5), (2, 10), (8, 5)]):
        p = tmp_path / f"out{i}.csv"
        code, _, _ = run(
            ["count", "--max-genus", "12", "--workers", str(w),
             "--frontier-genus", str(fg), "--out", str(p)], capsys)
        assert code == 0
        paths.append(p)
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]
    assert b"\r" not in blobs[0]


def test_violations_yield_exit_one(monkeypatch, capsys):
    rep = sg.zero_report(3, "p")
    rep.counts = [1, 1, 1, 1]
    rep.nodes_visited = 4
    rep.violations = [(1, 2)]
    monkeypatch.setattr(cli, "explore_parallel", lambda *a, **k: rep)
    code, out, err = run(["wilf", "--max-genus", "3"], capsys)
    assert code == 1
    assert "violation: 1,2" in err
    assert out.endswith("3,1\n")


def test_checkpoint_and_resume_cli(tmp_path, capsys):
    cp = tmp_path / "run.ckpt"
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    code, _, _ = run(
        ["count", "--max-genus", "12", "--checkpoint", str(cp),
         "--checkpoint-interval", "0", "--frontier-genus", "6",
         "--out", str(a)], capsys)
    assert code == 0
    assert cp.exists()
    code, _, _ = run(
        ["count", "--max-genus", "12", "--resume", str(cp), "--out", str(b)],
        capsys)
    assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_resume_policy_mismatch_exits_2(tmp_path, capsys):
    cp = tmp_path / "run.ckpt"
    sg.save_checkpoint(
        cp, [], sg.zero_report(8, sg.TrimPolicy(genus_bound=8).descriptor()))
    code, _, err = run(
        ["count", "--max-genus", "8", "--trim-denominator", "3",
         "--resume", str(cp)], capsys)
    assert code == 2
    assert err.startswith("error:")


def test_oracle_check_cli(capsys):
    code, out, _ = run(["oracle-check", "--max-genus", "6"], capsys)
    assert code == 0
    assert "oracle check passed" in out
    assert run(["oracle-check", "--max-genus", "44"], capsys)[0] == 2
