"""Black-box contract checks for the rpca command line tool.

Usage: test_cli.py <path-to-rpca>
"""

import csv
import io
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

CLI = sys.argv[1] if len(sys.argv) > 1 else "rpca"
failures = []


def run(*args, expect=0):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True)
    if proc.returncode != expect:
        raise AssertionError(
            f"rpca {' '.join(map(str, args))}: exit {proc.returncode}, wanted {expect}\n"
            + proc.stderr.decode()
        )
    return proc


def read_matrix(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array([[float(v) for v in r] for r in rows[1:]])


def check(name):
    def wrap(fn):
        try:
            fn()
            print(f"ok   {name}")
        except Exception as exc:  # noqa: BLE001
            failures.append(name)
            print(f"FAIL {name}: {exc}")
        return fn

    return wrap


work = Path(tempfile.mkdtemp(prefix="rpca_cli_"))


def write(name, data, header=None):
    path = work / name
    with path.open("w") as f:
        if header:
            f.write(",".join(header) + "\n")
        for row in np.atleast_2d(data):
            f.write(",".join(repr(float(v)) for v in row) + "\n")
    return path


@check("generate writes the requested number of rows")
def _():
    header, x = read_matrix(run("generate", "--paper-51", "--seed", 3).stdout.decode())
    assert header == [f"x{j}" for j in range(1, 7)], header
    assert x.shape == (1060, 6), x.shape
    _, y = read_matrix(run("generate", "--paper-51", "--clean", "--seed", 3).stdout.decode())
    assert y.shape == (1000, 6), y.shape
    _, z = read_matrix(run("generate", "--n-clean", 50, "--n-contam", 3, "--p", 4).stdout.decode())
    assert z.shape == (53, 4), z.shape


@check("generate is byte-for-byte deterministic per seed")
def _():
    a = run("generate", "--paper-51", "--seed", 11).stdout
    b = run("--threads", 8, "generate", "--paper-51", "--seed", 11).stdout
    c = run("generate", "--paper-51", "--seed", 12).stdout
    assert a == b
    assert a != c


@check("generated contamination sits in the last rows")
def _():
    _, x = read_matrix(run("generate", "--paper-51", "--seed", 5).stdout.decode())
    clean, contam = x[:1000], x[1000:]
    assert np.all(np.abs(clean.mean(axis=0) - np.arange(6)) < 0.3)
    assert np.all(np.abs(contam.mean(axis=0) - 20.0) < 1.5)


@check("classical fit recovers the dominant variance on clean data")
def _():
    data = work / "clean.csv"
    run("generate", "--paper-51", "--clean", "--seed", 4, "-o", data)
    model = json.loads(run("fit", "-i", data, "-m", "classical", "-k", 1).stdout)
    assert model["layout"] == "column-major"
    assert abs(model["eigenvalues"][0] - 5.0) < 1.0, model["eigenvalues"]
    u = np.array(model["loadings"][0])
    assert abs(abs(u[0]) - 1.0) < 0.05, u
    # independent check against numpy
    _, x = read_matrix(data.read_text())
    w, v = np.linalg.eigh(np.cov(x, rowvar=False))
    assert abs(model["eigenvalues"][0] - w[-1]) < 1e-9 * w[-1]
    assert abs(abs(u @ v[:, -1]) - 1.0) < 1e-9


@check("every method returns orthonormal loadings")
def _():
    data = work / "contam.csv"
    run("generate", "--n-clean", 150, "--n-contam", 10, "--seed", 2, "-o", data)
    for method in ["classical", "mcov", "spearman", "kendall", "pp-mad", "pp-qn", "maxent"]:
        model = json.loads(run("fit", "-i", data, "-m", method, "-k", 3).stdout)
        u = np.array(model["loadings"]).T
        assert u.shape == (6, 3), (method, u.shape)
        assert np.max(np.abs(u.T @ u - np.eye(3))) < 1e-9, method
        assert model["method"] == method


@check("maxent with zero iterations equals classical")
def _():
    data = work / "contam.csv"
    a = json.loads(run("fit", "-i", data, "-m", "classical", "-k", 2).stdout)
    b = json.loads(run("fit", "-i", data, "-m", "maxent", "-k", 2, "--max-iter", 0).stdout)
    ua, ub = np.array(a["loadings"]), np.array(b["loadings"])
    assert np.max(np.abs(ua - ub)) < 1e-12


@check("compare ranks robust methods ahead of classical")
def _():
    report = json.loads(
        run("compare", "--paper-51", "--seeds", "7", "--methods", "classical,kendall,pp-qn", "-k", 1).stdout
    )
    results = {r["method"]: r for r in report["runs"][0]["results"]}
    assert results["classical"]["first_angle_deg"] > 45
    assert results["kendall"]["first_angle_deg"] < 15
    assert results["pp-qn"]["first_angle_deg"] < 15


@check("compare writes one plot row per seed, method and component")
def _():
    plot = work / "plot.csv"
    run("compare", "--paper-51", "--seeds", "1,2", "--methods", "classical,mcov", "-k", 2,
        "-o", work / "report.json", "--plot-csv", plot)
    rows = list(csv.DictReader(plot.open()))
    assert len(rows) == 8, len(rows)
    keys = {(r["seed"], r["method"], r["component"]) for r in rows}
    assert len(keys) == 8
    report = json.loads((work / "report.json").read_text())
    assert [run_["source"]["seed"] for run_ in report["runs"]] == [1, 2]


@check("compare rejects an empty method list")
def _():
    run("compare", "--paper-51", "--methods", "", expect=2)
    run("compare", "--paper-51", "--methods", "nope", expect=2)


@check("scores of a unit-axis model are the centered column")
def _():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(30, 3))
    data = write("x.csv", x)
    model = {
        "method": "classical", "scatter_source": "covariance", "p": 3, "k": 1,
        "center": [0.5, 0.0, 0.0], "eigenvalues": [1.0], "layout": "column-major",
        "loadings": [[1.0, 0.0, 0.0]],
        "diagnostics": {"iterations": 0, "converged": True, "truncated": False, "stalled": False},
    }
    path = work / "axis.json"
    path.write_text(json.dumps(model))
    header, s = read_matrix(run("scores", "--model", path, "-i", data).stdout.decode())
    assert header == ["pc1"]
    assert np.max(np.abs(s[:, 0] - (x[:, 0] - 0.5))) < 1e-15


@check("full-rank scores reconstruct the data")
def _():
    data = work / "contam.csv"
    model_path = work / "full.json"
    model_path.write_text(run("fit", "-i", data, "-m", "kendall").stdout.decode())
    model = json.loads(model_path.read_text())
    _, s = read_matrix(run("scores", "--model", model_path, "-i", data).stdout.decode())
    _, x = read_matrix(data.read_text())
    u = np.array(model["loadings"]).T
    back = s @ u.T + np.array(model["center"])
    assert np.max(np.abs(back - x)) < 1e-8


@check("bad input exits with status 2")
def _():
    empty = work / "empty.csv"
    empty.write_text("")
    run("fit", "-i", empty, "-m", "classical", expect=2)
    ragged = work / "ragged.csv"
    ragged.write_text("1,2,3\n4,5\n")
    run("fit", "-i", ragged, "-m", "classical", expect=2)
    run("fit", "-i", work / "missing.csv", "-m", "classical", expect=2)
    run("fit", "-i", work / "contam.csv", "-m", "svd", expect=2)
    run("fit", "-i", work / "contam.csv", "-m", "classical", "-k", 9, expect=2)
    run("scores", "--model", work / "full.json", "-i", work / "x.csv", expect=2)
    run("scores", "--model", work / "full.json", "-i", empty, expect=2)
    run("frobnicate", expect=2)


print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
