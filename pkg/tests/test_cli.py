import io
import json
import subprocess
import sys

import pytest

from mdl.cli import run_cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_classify_json():
    code, out, _ = run("classify", "D_refsucc", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["class"] == "NEGATIVE" and data["inner_cycle"] is True and data["schema"] == 1


def test_axioms_latex():
    code, out, _ = run("axioms", "D_tri", "--m", "2", "--format", "latex")
    assert code == 0
    assert out.startswith(r"(p_{1} \lor p_{2}) \land \Box_{a} (p_{1} \lor p_{2}) \to")
    assert out.count(r"\lor p_{") >= 8


def test_verify_c2_text():
    code, out, _ = run("verify", "c2", "D_tri", "--graph", "complete:2")
    assert code == 0
    assert out.strip() == "γ^D_7 refuted at w0"


@pytest.mark.parametrize(
    "argv",
    [
        ("rank1", "D_tri"),
        ("eta", "D_tri", "--format", "dot"),
        ("minimize", "D_chain", "--all-orders", "--format", "json"),
        ("pseudoproduct", "D_refsucc", "--format", "dot"),
        ("export", "D_fig3", "--format", "dot"),
        ("verify", "minimality", "D_chain", "--format", "json"),
        ("verify", "complete1", "D_refsucc", "--alpha-max", "3"),
        ("verify", "soundness", "D_sym", "--samples", "10", "--max-size", "3"),
        ("verify", "uf3", "--samples", "10"),
        ("verify", "c1", "D_refsucc", "--samples", "20"),
    ],
)
def test_commands_succeed(argv):
    code, out, err = run(*argv)
    assert code == 0, err
    assert out


def test_bundle_dot_names():
    _, out, _ = run("rank1", "D_tri", "--format", "dot")
    assert '"g_x1"' in out and "dashed" in out


def test_deterministic():
    argv = ("verify", "c1", "D_refsucc", "--samples", "50", "--seed", "4", "--format", "json")
    assert run(*argv) == run(*argv)


@pytest.mark.parametrize(
    "argv",
    [
        ("classify", "nope"),
        ("rank1", "D_sym"),
        ("verify", "c2"),
        ("axioms", "D_fig3", "--m", "9", "--cap-expansion", "100"),
        ("classify",),
        ("frobnicate", "D_sym"),
    ],
)
def test_errors_exit_2(argv):
    code, _, _ = run(*argv)
    assert code == 2


def test_property_failure_exit_1(tmp_path):
    # an edge back into the root: the reflexive point cannot return there, so C-vi fails
    path = tmp_path / "back.diag"
    path.write_text("points 2\nedge x0 -a-> x1\nedge x1 -a-> x0\nedge x1 -a-> x1\n", encoding="utf-8")
    code, out, _ = run("rank1", str(path))
    assert code == 1
    assert "C-vi: FAIL" in out


def test_format_without_output_exit_2():
    assert run("axioms", "D_tri", "--format", "dot")[0] == 2


def test_file_input(tmp_path):
    path = tmp_path / "tri.diag"
    path.write_text("points 3\nedge x0 -a-> x1\nedge x0 -a-> x2\nedge x1 -a-> x2\nedge x2 -a-> x1\n", encoding="utf-8")
    code, out, _ = run("classify", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["class"] == "NEGATIVE"


def test_syntax_error_file(tmp_path):
    path = tmp_path / "bad.diag"
    path.write_text("points 2\nedge x0 -a-> x7\n", encoding="utf-8")
    code, _, err = run("classify", str(path))
    assert code == 2 and "line 2" in err


def test_catalog_env_override(tmp_path, monkeypatch):
    (tmp_path / "D_loop.diag").write_text("points 1\nedge x0 -a-> x0\n", encoding="utf-8")
    monkeypatch.setenv("MDL_CATALOG_DIR", str(tmp_path))
    code, out, _ = run("classify", "D_loop", "--format", "json")
    assert code == 0 and json.loads(out)["class"] == "POSITIVE"
    assert run("classify", "D_sym")[0] == 2


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "mdl.cli", "classify", "D_sym"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("class: POSITIVE")
