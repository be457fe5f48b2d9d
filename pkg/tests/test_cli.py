"""CLI tests through click's test runner."""

import json

import pytest
from click.testing import CliRunner

from graphtalk.cli import main
from graphtalk.factdb import parse_clauses


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def covid_file(tmp_path, covid_text):
    path = tmp_path / "covid.conllu"
    path.write_text(covid_text, encoding="utf-8")
    return path


def test_talk_scripted_session(runner, covid_file):
    result = runner.invoke(main, ["talk", str(covid_file)],
                           input="Who warned residents ?\nquit\n")
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0].startswith("digested covid: 8 sentences")
    assert "summary:" in lines
    summary_at = lines.index("summary:")
    entry = lines[summary_at + 1]
    sid, _, text = entry.partition(" : ")
    assert sid.strip().isdigit()
    assert text
    assert any(line.startswith("keyphrases: ") for line in lines)
    # the question yields sentence 2 in "id : text" rows
    assert "2 : Doctor Smith warned residents in Texas ." in result.output


def test_talk_exit_and_eof(runner, covid_file):
    result = runner.invoke(main, ["talk", str(covid_file)], input="exit\n")
    assert result.exit_code == 0
    # end of input without quit also terminates cleanly
    result = runner.invoke(main, ["talk", str(covid_file)], input="")
    assert result.exit_code == 0


def test_talk_quiet_suppresses_digest(runner, covid_file):
    result = runner.invoke(main, ["talk", str(covid_file), "--quiet"],
                           input="quit\n")
    assert result.exit_code == 0
    assert "digested" not in result.output
    assert "summary:" not in result.output


def test_talk_marker_on_empty_answers(runner, covid_file):
    result = runner.invoke(main, ["talk", str(covid_file), "--quiet"],
                           input="zebra\nquit\n")
    assert result.exit_code == 0
    assert "(weak match)" in result.output
    assert "no relevant content" in result.output


def test_talk_export_option(runner, covid_file, tmp_path):
    out = tmp_path / "covid.pro"
    result = runner.invoke(
        main, ["talk", str(covid_file), "--export", str(out), "--quiet"],
        input="quit\n",
    )
    assert result.exit_code == 0
    assert f"exported facts to {out}" in result.output
    db = parse_clauses(out.read_text(encoding="utf-8"))
    assert db.counts()["sent"] == 8


def test_talk_save_transcript(runner, covid_file, tmp_path):
    save = tmp_path / "session.json"
    result = runner.invoke(
        main, ["talk", str(covid_file), "--quiet", "--save", str(save)],
        input="Who warned residents ?\nWhere did cases appear ?\nquit\n",
    )
    assert result.exit_code == 0
    data = json.loads(save.read_text(encoding="utf-8"))
    assert data["doc_id"] == "covid"
    assert len(data["transcript"]) == 2
    first = data["transcript"][0]
    assert first["question"] == "Who warned residents ?"
    assert [a["id"] for a in first["response"]["answers"]] == [2]


def test_talk_question_bank_is_used(runner, covid_file):
    bank = covid_file.with_name(covid_file.name + ".q.conllu")
    bank.write_text(
        "# text = Who warned residents ?\n"
        "1\tWho\twho\tPRON\tWP\t_\t2\tnsubj\t_\t_\n"
        "2\twarned\twarn\tVERB\tVBD\t_\t0\troot\t_\t_\n"
        "3\tresidents\tresident\tNOUN\tNNS\t_\t2\tobj\t_\t_\n"
        "4\t?\t?\tPUNCT\t.\t_\t2\tpunct\t_\t_\n",
        encoding="utf-8",
    )
    result = runner.invoke(main, ["talk", str(covid_file), "--quiet"],
                           input="who  warned RESIDENTS?\nquit\n")
    assert result.exit_code == 0
    assert "2 : Doctor Smith warned residents in Texas ." in result.output


def test_talk_unparseable_question(runner, covid_file):
    result = runner.invoke(main, ["talk", str(covid_file), "--quiet"],
                           input="?!.\nquit\n")
    assert result.exit_code == 0
    assert "cannot parse question" in result.output


def test_talk_missing_file(runner, tmp_path):
    result = runner.invoke(main, ["talk", str(tmp_path / "nope.conllu")])
    assert result.exit_code != 0


def test_talk_with_lexdb_and_ontology(runner, covid_file, tmp_path,
                                      mini_wn_dir):
    ontology = tmp_path / "onto.json"
    ontology.write_text('[{"s": "dallas", "v": "part_of", "o": "texas"}]',
                        encoding="utf-8")
    result = runner.invoke(
        main,
        ["talk", str(covid_file), "--quiet",
         "--lexdb", str(mini_wn_dir), "--ontology", str(ontology)],
        input="Did the pandemic spread ?\nquit\n",
    )
    assert result.exit_code == 0, result.output


def test_export_command(runner, tmp_path, covid_text, golden_text):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "covid.conllu").write_text(covid_text, encoding="utf-8")
    (corpus / "golden.conllu").write_text(golden_text, encoding="utf-8")
    out = tmp_path / "out"
    result = runner.invoke(main, ["export", str(corpus), str(out)])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["exported"] == 2
    assert report["failed"] == 0
    assert (out / "covid.pro").is_file()
    assert (out / "golden.pro").is_file()
    assert (out / "report.json").is_file()


def test_export_command_failure_exit_code(runner, tmp_path, covid_text):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "covid.conllu").write_text(covid_text, encoding="utf-8")
    (corpus / "broken.conllu").write_text("1\tnope\n", encoding="utf-8")
    result = runner.invoke(main, ["export", str(corpus),
                                  str(tmp_path / "out")])
    assert result.exit_code == 1
    assert (tmp_path / "out" / "covid.pro").is_file()


def test_capabilities_command(runner):
    result = runner.invoke(main, ["capabilities"])
    assert result.exit_code == 0
    note = json.loads(result.output)
    assert note["accepts"] == ["conllu"]
    assert note["format_version"] == "1"


def test_first_in_flag_changes_graph(runner, covid_file, tmp_path):
    plain = tmp_path / "plain.pro"
    flagged = tmp_path / "flagged.pro"
    runner.invoke(main, ["talk", str(covid_file), "--quiet",
                         "--export", str(plain)], input="quit\n")
    runner.invoke(main, ["talk", str(covid_file), "--quiet", "--first-in",
                         "--export", str(flagged)], input="quit\n")
    plain_db = parse_clauses(plain.read_text(encoding="utf-8"))
    flagged_db = parse_clauses(flagged.read_text(encoding="utf-8"))
    plain_first = [f for f in plain_db.family("edge")
                   if f.get("label") == "first_in"]
    flagged_first = [f for f in flagged_db.family("edge")
                     if f.get("label") == "first_in"]
    assert plain_first == []
    assert flagged_first != []


def test_answers_option_limits_output(runner, covid_file):
    result = runner.invoke(
        main, ["talk", str(covid_file), "--quiet", "--answers", "1"],
        input="outbreak pandemic spread\nquit\n",
    )
    assert result.exit_code == 0
    answer_rows = [line for line in result.output.splitlines()
                   if " : " in line and line.split(" : ")[0].isdigit()]
    assert len(answer_rows) == 1
