import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adlv.cli import (EXIT_BUDGET, EXIT_INVALID, EXIT_OK, Job, JobError, dumps, execute_job,
                      job_to_doc, main, parse_b, parse_group, parse_job, render)
from adlv.oracle.lattice import Lattice
from adlv.oracle.field import get_field

GL5_ARGS = ["classify", "--group", "GL:5", "--b", "blocks:1/2,1/3", "--mu", "2,0,0,0,0"]


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# -- parsing ---------------------------------------------------------------------

def test_parse_classify_job():
    job = parse_job(GL5_ARGS)
    assert job.kind == "classify" and job.group == "GL:5"
    assert job.b == ("blocks", ((1, 2), (1, 3)))
    assert job.mu == (2, 0, 0, 0, 0)


def test_length_mismatch_names_mu():
    with pytest.raises(JobError) as exc:
        parse_job(["classify", "--group", "GL:5", "--b", "blocks:1/2,1/3", "--mu", "2,0,0,0"])
    assert exc.value.field == "mu"


def test_job_file_verify_gl5(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"kind": "verify-gl5"}))
    job = parse_job(["--job", str(path)])
    assert job.kind == "verify-gl5"
    assert job.b == ("blocks", ((1, 2), (1, 3))) and job.mu == (2, 0, 0, 0, 0) and job.group == "GL:5"


def test_oracle_job_document():
    doc = {"kind": "oracle-enumerate", "q": 2, "s": 1, "window": [-2, 3], "b": {"blocks": [[1, 2], [1, 3]]},
           "mu": [2, 0, 0, 0, 0], "closed": False, "kappa": 0, "budget": 1000000}
    job = parse_job(doc=doc)
    assert job.window == (-2, 3) and job.s == (1,) and job.budget == 1000000


def test_flag_conflicts_with_job_file(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"kind": "classify", "b": "blocks:1/2", "mu": [1, 0]}))
    assert parse_job(["--job", str(path), "--mu", "1,0"]).mu == (1, 0)
    with pytest.raises(JobError) as exc:
        parse_job(["--job", str(path), "--mu", "2,-1"])
    assert exc.value.field == "mu"
    with pytest.raises(JobError) as exc:
        parse_job(["dim", "--job", str(path)])
    assert exc.value.field == "kind"


@pytest.mark.parametrize("argv,field", [
    (["frobnicate", "--b", "blocks:1/2", "--mu", "1,0"], "kind"),
    (["classify", "--b", "blocks:2/4", "--mu", "1,0,0,0"], "b"),
    (["classify", "--b", "blocks:1/2", "--mu", "0,1"], "mu"),
    (["classify", "--b", "blocks:1/2", "--mu", "1,0", "--format", "xml"], "format"),
    (["oracle-count", "--group", "PGL:2", "--b", "newton:0;kappa:1", "--mu", "1"], "group"),
    (["oracle-enumerate", "--b", "blocks:1/2", "--mu", "1,0", "--s", "1,2"], "s"),
    (["classify", "--b", "blocks:1/2", "--mu", "1,0", "--window", "3:1"], "window"),
    (["classify", "--b", "blocks:1/2", "--mu", "1,0", "--lattice", "{}"], "lattice"),
    (["classify", "--group", "Q:3", "--b", "newton:0,0,0;kappa:0", "--mu", "0,0,0"], "group"),
])
def test_invalid_jobs(argv, field, capsys):
    with pytest.raises(JobError) as exc:
        parse_job(argv)
    assert exc.value.field == field
    code, out, err = run(capsys, argv)
    assert code == EXIT_INVALID and out == ""
    assert json.loads(err)["field"] == field


def test_group_parsing():
    assert parse_group("GL:3").is_gl
    assert parse_group("PGL:4").rank_total == 3
    assert parse_group("B:3:adjoint").rank_total == 3
    assert parse_group("GL:2xGL:3").gl_sizes == (2, 3)
    assert parse_job(["classify", "--group", "gl:2", "--b", "blocks:1/2", "--mu", "1,0"]).group == "GL:2"


def test_parse_b_forms():
    assert parse_b("blocks:1/2,1/3") == parse_b({"blocks": [[1, 2], [1, 3]]}) == parse_b({"blocks": ["1/2", "1/3"]})
    assert parse_b("newton:1/2,1/2;kappa:1") == ("newton", (Fraction(1, 2), Fraction(1, 2)), (1,))
    with pytest.raises(JobError):
        parse_b("slopes:1/2")


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("ADLV_BUDGET", "77")
    assert parse_job(GL5_ARGS).budget == 77
    assert parse_job(GL5_ARGS + ["--budget", "5"]).budget == 5


# -- execution ---------------------------------------------------------------------

def test_classify_report(capsys):
    code, out, err = run(capsys, GL5_ARGS)
    assert code == EXIT_OK and err == ""
    rep = json.loads(out)["result"]
    assert rep["nonempty"] is True and rep["indecomposable"] is True
    assert rep["pi0"]["kind"] == "PI1_TORSOR" and rep["dimension"] is None
    code, out, _ = run(capsys, GL5_ARGS + ["--format", "text"])
    assert "pi_0 of the closed stratum: PI1_TORSOR" in out and "dimension: unknown" in out


def test_dim_report(capsys):
    code, out, _ = run(capsys, ["dim", "--b", "blocks:4/3", "--mu", "3,1,0"])
    assert code == EXIT_OK and json.loads(out)["result"]["dimension"] == 2


def test_mu_min_report(capsys):
    code, out, _ = run(capsys, ["mu-min", "--b", "blocks:1/2,1/3"])
    res = json.loads(out)["result"]
    assert res["mu_min"] == [1, 1, 0, 0, 0] and res["newton"] == ["1/2", "1/2", "1/3", "1/3", "1/3"]


def test_oracle_count_reports(capsys):
    code, out, _ = run(capsys, ["oracle-count", "--b", "blocks:4/3", "--mu", "3,1,0", "--s", "1,2"])
    res = json.loads(out)["result"]
    assert code == EXIT_OK and res["counts"] == [8, 32] and res["exponent"] == 2
    # GL_5 patch: the strict members of kappa 2 in [0, 1] are the q^s (q^s - 1) lattices with a0 != 0
    code, out, _ = run(capsys, ["oracle-count", "--b", "blocks:1/2,1/3", "--mu", "2,0,0,0,0",
                                "--s", "1,2", "--window", "0:1", "--kappa", "2"])
    res = json.loads(out)["result"]
    assert code == EXIT_OK and res["counts"] == [2, 12]


def test_oracle_enumerate_report(capsys):
    code, out, _ = run(capsys, ["oracle-enumerate", "--b", "blocks:1/2", "--mu", "1,0",
                                "--window", "-2:3", "--kappa", "0"])
    res = json.loads(out)["result"]
    assert code == EXIT_OK and res["count"] == 1
    assert Lattice.from_json(res["lattices"][0]) == Lattice.standard(get_field(2), 2)


def test_oracle_reduce_reports(capsys):
    L = Lattice.from_generators(get_field(2), 2, [{0: 1}, {3: 1}])
    code, out, _ = run(capsys, ["oracle-reduce", "--b", "blocks:1/2", "--mu", "2,-1",
                                "--lattice", json.dumps(L.to_json())])
    res = json.loads(out)["result"]
    assert code == EXIT_OK and res["count"] == 1 and 1 <= res["max_steps"] <= 2
    code, out, _ = run(capsys, ["oracle-reduce", "--b", "blocks:1/3", "--mu", "2,0,-1", "--samples", "5"])
    res = json.loads(out)["result"]
    assert code == EXIT_OK and res["count"] == 5


def test_budget_exit_code(capsys):
    code, out, err = run(capsys, ["oracle-enumerate", "--b", "blocks:1/2,1/3", "--mu", "2,0,0,0,0",
                                  "--window", "-2:3", "--budget", "10"])
    assert code == EXIT_BUDGET and out == ""
    assert json.loads(err)["error"] == "budget-exceeded"


def test_missing_window_for_non_superbasic(capsys):
    code, _, err = run(capsys, ["oracle-count", "--b", "blocks:1/2,1/3", "--mu", "2,0,0,0,0"])
    assert code == EXIT_INVALID and json.loads(err)["field"] == "window"


def test_reports_are_deterministic():
    job = parse_job(["oracle-enumerate", "--b", "blocks:1/3", "--mu", "2,0,-1", "--closed", "--q", "3"])
    a, _ = execute_job(job)
    b, _ = execute_job(parse_job(render(job)))
    assert dumps(a) == dumps(b)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "adlv"] + GL5_ARGS, capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["pi0"]["kind"] == "PI1_TORSOR"


# -- round trip --------------------------------------------------------------------

BLOCKS = [((1, 2),), ((1, 2), (1, 3)), ((4, 3),), ((1, 1), (1, 1)), ((0, 1), (-1, 2)), ((2, 3),)]


@st.composite
def jobs(draw):
    kind = draw(st.sampled_from(["classify", "mu-min", "dim", "oracle-enumerate", "oracle-count",
                                 "oracle-reduce"]))
    blocks = draw(st.sampled_from(BLOCKS))
    n = sum(h for _, h in blocks)
    mu = tuple(sorted(draw(st.lists(st.integers(-3, 3), min_size=n, max_size=n)), reverse=True))
    doc = {"kind": kind, "b": "blocks:" + ",".join(f"{m}/{h}" for m, h in blocks), "mu": list(mu),
           "closed": draw(st.booleans()), "q": draw(st.sampled_from([2, 3, 4])),
           "format": draw(st.sampled_from(["json", "text"]))}
    if draw(st.booleans()):
        doc["kappa"] = draw(st.integers(-3, 3))
    if draw(st.booleans()):
        lo = draw(st.integers(-3, 2))
        doc["window"] = [lo, lo + draw(st.integers(1, 3))]
    if draw(st.booleans()):
        doc["budget"] = draw(st.integers(1, 10 ** 6))
    if kind == "oracle-count":
        doc["s"] = draw(st.lists(st.integers(1, 3), min_size=1, max_size=3))
    else:
        doc["s"] = [draw(st.integers(1, 3))]
    if kind == "oracle-reduce" and draw(st.booleans()):
        doc["samples"] = draw(st.integers(1, 9))
    return doc


@given(jobs())
@settings(max_examples=150, deadline=None)
def test_parse_render_roundtrip(doc):
    job = parse_job(doc=doc)
    assert parse_job(render(job)) == job
    assert parse_job(doc=job_to_doc(job)) == job


@given(st.sampled_from(["PGL:3", "SL:3", "A:2:adjoint", "GL:3"]), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_roundtrip_newton_form(group, raw):
    mu = sorted(raw, reverse=True)
    if group in ("PGL:3", "SL:3", "A:2:adjoint"):
        mu = [mu[0] - mu[1], mu[1] - mu[2]]
        newton = "0,0"
    else:
        newton = "0,0,0"
    argv = ["classify", "--group", group, "--b", f"newton:{newton};kappa:0", "--mu", ",".join(map(str, mu))]
    try:
        job = parse_job(argv)
    except JobError:
        return
    assert parse_job(render(job)) == job
