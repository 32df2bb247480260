import xml.etree.ElementTree as ET

import pytest

import preassess as pa
from preassess.cli import main


@pytest.fixture
def sample_files(tmp_path):
    ontology = tmp_path / "sql.ont"
    ontology.write_text(pa.sample_ontology_text(), encoding="utf-8")
    bank = tmp_path / "bank.json"
    bank.write_text(pa.sample_bank_text(), encoding="utf-8")
    log = tmp_path / "events.log"
    return ontology, bank, log


def test_validate(sample_files, capsys):
    ontology, _, _ = sample_files
    assert main(["validate", str(ontology)]) == 0
    out = capsys.readouterr().out
    assert "parents: select -> insert -> delete -> update" in out
    assert "prerequisite links (C): 3" in out
    assert "leaves per parent (N): 2" in out
    assert "rules needed: 13" in out


def test_validate_reports_domain_error(tmp_path, capsys):
    bad = tmp_path / "bad.ont"
    bad.write_text("hasFoo a b\n", encoding="utf-8")
    assert main(["validate", str(bad)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: ")
    assert "line 1" in err


def test_estimate(capsys):
    assert main(["estimate", "--c", "3", "--n", "2"]) == 0
    assert capsys.readouterr().out == "13\n"


def test_estimate_domain_error(capsys):
    assert main(["estimate", "--c", "3", "--n", "0"]) == 1
    assert "error:" in capsys.readouterr().err


def test_increment_and_decrement(capsys):
    assert main(["increment", "--r", "7", "--c", "3", "--n-new", "2"]) == 0
    assert capsys.readouterr().out == "13\n"
    assert main(["decrement", "--r", "129", "--c", "4", "--n-old", "5"]) == 0
    assert capsys.readouterr().out == "65\n"


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["estimate", "--c", "3"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["no_such_command"])
    assert err.value.code == 2


def test_sweep_to_stdout(capsys):
    assert main(["sweep", "--c", "0..6", "--n", "1..5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "C,N,R"
    assert len(lines) == 36


def test_sweep_to_files(tmp_path, capsys):
    csv_path = tmp_path / "grid.csv"
    svg_path = tmp_path / "grid.svg"
    assert main([
        "sweep", "--c", "0..6", "--n", "1..5",
        "--csv", str(csv_path), "--svg", str(svg_path), "--axis", "n",
    ]) == 0
    assert capsys.readouterr().out == ""
    grid = pa.parse_dataset_csv(csv_path.read_text(encoding="utf-8"))
    assert grid.rules_by_c(3) == [7, 13, 25, 49, 97]
    root = ET.fromstring(svg_path.read_text(encoding="utf-8"))
    assert root.tag.endswith("svg")


def test_rules_text_and_json(sample_files, capsys):
    ontology, _, _ = sample_files
    assert main(["rules", str(ontology)]) == 0
    text = capsys.readouterr().out
    assert text.splitlines()[0] == "@d1 insert PP -> ready_for_desired insert"
    assert len(text.splitlines()) == 13

    assert main(["rules", str(ontology), "--format", "json"]) == 0
    out = capsys.readouterr().out
    assert out.lstrip().startswith("[")
    assert '"@d13"' in out


def test_rules_deep_descent_flag(sample_files, capsys):
    ontology, _, _ = sample_files
    assert main(["rules", str(ontology), "--deep-descent"]) == 0
    text = capsys.readouterr().out
    assert "@d12 update FF -> descend_prerequisite insert" in text


def test_interactive_session(sample_files, capsys, monkeypatch):
    ontology, bank, log = sample_files
    answers = iter([
        "delete",  # desired concept prompt
        "insert into staff select * from new_staff",
        "",  # blank answers are re-prompted, not submitted
        "insert into staff values (1, 'Ann')",
    ])
    monkeypatch.setattr("builtins.input", lambda _="": next(answers))
    assert main([
        "session", str(ontology), "--bank", str(bank), "--log", str(log),
        "--student", "s1",
    ]) == 0
    out = capsys.readouterr().out
    assert "[insert_select] attempt 1 of 2" in out
    assert "Please type an answer." in out
    assert "verdict: ready_for_desired" in out
    assert "study delete: http://sql.example.org/learn/delete" in out
    assert len(log.read_text(encoding="utf-8").splitlines()) == 2


def test_session_desired_flag_skips_prompt(sample_files, capsys, monkeypatch):
    ontology, bank, log = sample_files
    monkeypatch.setattr(
        "builtins.input", lambda _="": "drop table staff"
    )
    assert main([
        "session", str(ontology), "--bank", str(bank), "--log", str(log),
        "--student", "s1", "--desired", "update", "--max-attempts", "1",
    ]) == 0
    out = capsys.readouterr().out
    assert "verdict: remediate_leaves" in out
    assert "study delete_select:" in out
    assert "study delete_where:" in out


def test_session_chain_bottom(sample_files, capsys):
    ontology, bank, log = sample_files
    assert main([
        "session", str(ontology), "--bank", str(bank), "--log", str(log),
        "--student", "s1", "--desired", "select",
    ]) == 0
    out = capsys.readouterr().out
    assert "verdict: direct_content" in out


def test_session_unknown_desired(sample_files, capsys):
    ontology, bank, log = sample_files
    assert main([
        "session", str(ontology), "--bank", str(bank), "--log", str(log),
        "--student", "s1", "--desired", "drop",
    ]) == 1
    assert "error:" in capsys.readouterr().err


def test_analyze_formats_summary(sample_files, capsys):
    ontology, bank, log = sample_files
    log.write_text(
        'record("s1","update","delete_select",1,"not_passed",'
        '"2015-11-03T11:08:54Z","2015-11-03T11:09:27Z").\n'
        'record("s1","update","delete_select",2,"not_passed",'
        '"2015-11-03T11:11:31Z","2015-11-03T11:12:10Z").\n'
        'record("s1","update","delete_where",1,"not_passed",'
        '"2015-11-03T11:12:10Z","2015-11-03T11:14:43Z").\n'
        'record("s1","update","delete_where",2,"not_passed",'
        '"2015-11-03T11:14:50Z","2015-11-03T11:17:14Z").\n',
        encoding="utf-8",
    )
    assert main(["analyze", "--log", str(log), "--student", "s1"]) == 0
    out = capsys.readouterr().out
    assert "desired: update  total 369s" in out
    assert "delete_select: attempts [33s, 39s] avg 36.0s -> not_passed" in out
    assert "delete_where: attempts [153s, 144s] avg 148.5s -> not_passed" in out
    assert ("remark: Not prepared to learn UPDATE; recommended to learn "
            "DELETE_SELECT and DELETE_WHERE.") in out


def test_analyze_empty_log(sample_files, capsys):
    _, _, log = sample_files
    assert main(["analyze", "--log", str(log), "--student", "s9"]) == 0
    assert "no recorded sessions for s9" in capsys.readouterr().out


def test_serve_bind_conflict(sample_files, capsys):
    import socket

    ontology, bank, log = sample_files
    with socket.socket() as holder:
        holder.bind(("127.0.0.1", 0))
        holder.listen(1)
        port = holder.getsockname()[1]
        rc = main([
            "serve", str(ontology), "--bank", str(bank), "--log", str(log),
            "--port", str(port),
        ])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
