import json
import subprocess
import sys
from pathlib import Path

import pytest
import sympy

from invring.cli import main

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
X, Y, z, t = sympy.symbols("X Y z t")


def run(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return json.loads(out), code


def write(tmp_path, text, name="problem.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def parse(expr):
    return sympy.sympify(expr, locals={"X": X, "Y": Y, "z": z}, convert_xor=True)


def act(f, m):
    """Substitute X -> m00 X + m10 Y, Y -> m01 X + m11 Y (columns are images)."""
    return sympy.expand(f.subs({X: m[0][0] * X + m[1][0] * Y, Y: m[0][1] * X + m[1][1] * Y}, simultaneous=True))


def molien(gens, D):
    mats = [sympy.eye(2)]
    frontier = [sympy.Matrix(g) for g in gens]
    while frontier:
        g = frontier.pop()
        if g in mats:
            continue
        mats.append(g)
        frontier.extend(g * sympy.Matrix(h) for h in gens)
    f = sum(1 / (sympy.eye(2) - t * g).det() for g in mats) / len(mats)
    s = sympy.series(f, t, 0, D + 1).removeO()
    return [int(s.coeff(t, k)) for k in range(D + 1)]


def reduce_cyclotomic(expr, p):
    phi = sum(z**k for k in range(p))
    return sympy.rem(sympy.expand(expr), phi, z)


def test_cm_check_order4(capsys):
    rep, code = run(capsys, "cm-check", str(PROBLEMS / "order4.toml"))
    assert code == 0
    r = rep["result"]
    assert r["verdict"] == "CM" and r["agree"]
    # re-verify the transcript: parameters invariant, Hilbert data against Molien
    g = [[0, -1], [1, 0]]
    for key in ("theta1", "theta2"):
        f = parse(r["hsop"][key])
        assert sympy.expand(act(f, g) - f) == 0
    hilb = r["freeness"]["hilbert"]
    assert hilb == molien([g], r["D"])
    d1, d2 = r["hsop"]["degrees"]
    series = sum(t**e for e in r["freeness"]["generator_degrees"]) / ((1 - t**d1) * (1 - t**d2))
    ser = sympy.series(series, t, 0, r["D"] + 1).removeO()
    assert [int(ser.coeff(t, k)) for k in range(r["D"] + 1)] == hilb


def test_ramify_p5(capsys):
    rep, code = run(capsys, "ramify", str(PROBLEMS / "ramify5.toml"))
    assert code == 0
    x = sympy.Symbol("x")
    for row in rep["result"]["table"]:
        assert row["sum_ef"] == 4
        _, facs = sympy.Poly(sum(x**k for k in range(5)), x, modulus=row["q"]).factor_list()
        assert sorted((f["e"], f["f"]) for f in row["factors"]) == sorted((m, f.degree()) for f, m in facs)
    assert [q["status"] for q in rep["result"]["quadratic"]] == ["ok", "ok"]


def test_group_infinite_hits_bound(capsys):
    rep, code = run(capsys, "group", str(PROBLEMS / "infinite.toml"), "--bound", "100")
    assert code == 3
    assert rep["error"]["type"] == "BoundExceeded"


def test_group_closure_transcript(capsys, tmp_path):
    problem = write(tmp_path, "[group]\ngenerators = [[[0, -1], [1, -1]], [[0, 1], [1, 0]]]\n")
    rep, code = run(capsys, "group", problem)
    assert code == 0
    elems = [sympy.Matrix([[sympy.Rational(x) for x in r] for r in m]) for m in rep["transcript"][0]["elements"]]
    assert len(elems) == rep["result"]["group"]["order"] == 6
    assert all(a * b in elems for a in elems for b in elems)
    assert rep["result"]["sylow_orders"] == {"2": 2, "3": 3}


def test_invariants_transcript(capsys):
    rep, code = run(capsys, "invariants", str(PROBLEMS / "order4.toml"), "-D", "8")
    assert code == 0 and rep["result"]["molien_agrees"]
    g = [[0, -1], [1, 0]]
    for entry in rep["transcript"]:
        if entry["claim"] != "invariant":
            continue
        f = sum(sympy.Rational(c) * X ** m[0] * Y ** m[1] for m, c in entry["poly"])
        assert sympy.expand(act(f, g) - f) == 0
    assert rep["result"]["hilbert"] == molien([g], 8)


def test_cohomology_transcript(capsys, tmp_path):
    problem = write(tmp_path, "[group]\ngenerators = [[[-1, 0], [0, -1]]]\n[cohomology]\nindices = [1, 2, 3]\ndegrees = [0, 5]\n")
    rep, code = run(capsys, "cohomology", problem)
    assert code == 0
    for row in rep["transcript"]:
        n, i = row["n"], row["i"]
        # -I acts on R_n by (-1)^n, so H^i(R_n) = (Z/2)^(n+1) exactly when n + i is even
        want = ["2"] * (n + 1) if (n + i) % 2 == 0 else []
        assert row["torsion"] == want and row["free_rank"] == 0


def test_diagonalize_transcript(capsys):
    rep, code = run(capsys, "diagonalize", str(PROBLEMS / "diagonalize.toml"))
    assert code == 0
    tr = rep["transcript"][0]
    p = rep["result"]["p"]
    S = sympy.Matrix([[parse(x) for x in r] for r in tr["sigma"]])
    B = sympy.Matrix([[parse(x) for x in r] for r in tr["B"]])
    for j, k in enumerate(tr["exponents"]):
        diff = S * B[:, j] - z**k * B[:, j]
        assert all(reduce_cyclotomic(e, p) == 0 for e in diff)
    theta = sympy.Matrix([parse(x) for x in rep["transcript"][1]["theta"]])
    u = sympy.Matrix([parse(x) for x in rep["transcript"][1]["u"]])
    assert all(reduce_cyclotomic(e, p) == 0 for e in S * theta - theta - (z - 1) * u)


def test_equi_problem(capsys):
    rep, code = run(capsys, "cm-check", str(PROBLEMS / "equi.toml"))
    assert code == 0 and rep["result"]["verdict"] == "CM"


def test_verify_single_suite(capsys):
    rep, code = run(capsys, "verify", "--suite", "veronese")
    assert code == 0
    assert rep["result"]["cross_validation"]["disagreements"] == []


@pytest.mark.parametrize(
    "text, err",
    [
        ("[ring]\nkind = \"quaternions\"\n[group]\ngenerators = [[[1, 0], [0, 1]]]\n", "InvalidInput"),
        ("[group]\ngenerators = [[[2, 0], [0, 1]]]\n", "NotInvertible"),
        ("[group\n", "InvalidInput"),
        ("[diagonalize]\np = 3\nmatrix = [[\"z\", 1], [0, 1]]\n", "PreconditionFailed"),
    ],
)
def test_invalid_input_exit_code(capsys, tmp_path, text, err):
    command = "diagonalize" if "diagonalize" in text else "group"
    rep, code = run(capsys, command, write(tmp_path, text))
    assert code == 2
    assert rep["error"]["type"] == err and rep["error"]["message"]


def test_missing_file_is_invalid_input(capsys, tmp_path):
    rep, code = run(capsys, "group", str(tmp_path / "nope.toml"))
    assert code == 2 and rep["error"]["type"] == "InvalidInput"


def test_unknown_suite(capsys):
    rep, code = run(capsys, "verify", "--suite", "nonsense")
    assert code == 2


def test_json_is_byte_identical_across_runs():
    args = [sys.executable, "-m", "invring", "cm-check", str(PROBLEMS / "hypersurface.toml"), "--json"]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b
    json.loads(a)


def test_text_output(capsys):
    code = main(["cm-check", str(PROBLEMS / "order4.toml")])
    out = capsys.readouterr().out
    assert code == 0
    assert "verdict: CM through degree 16" in out
    assert out.rstrip().endswith("exit code: 0")
