import json
import shutil
import subprocess

import pytest

from cubedr import io
from cubedr.cli import main
from cubedr.verify import data_path


def d(name):
    return str(data_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cohomology_json(capsys):
    code, out, _ = run(capsys, "cohomology", d("torus.model"), "--json")
    assert code == 0 and json.loads(out)["betti"] == [1, 2, 1]


def test_mv_table(capsys):
    code, out, _ = run(capsys, "mv", d("sphere_box.model"), d("sphere_box_caps.cover"))
    assert code == 0 and "exact: yes" in out and "assembled: 1 0 1" in out


def test_mv_non_cover_exit(capsys):
    code, _, err = run(capsys, "mv", d("circle4.model"), d("circle4_noncover.cover"))
    assert code == 4 and "cover" in err


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.model"
    bad.write_text("[0,2]\n")
    code, _, err = run(capsys, "cohomology", str(bad))
    assert code == 2 and "line 1" in err


def test_model_error_exit(tmp_path, capsys):
    bad = tmp_path / "flip.model"
    bad.write_text("[0,1]\nidentify [0,1] -> [0,1] via [[-1]]; (1)\n")
    assert run(capsys, "cohomology", str(bad))[0] == 3


def test_unknown_suite(capsys):
    assert run(capsys, "verify", "nonsense")[0] == 2


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "cohomology")
    assert code == 0 and "all passed" in out


def test_subdivide_output_round_trips(tmp_path, capsys):
    out_file = tmp_path / "sd.txt"
    code, out, _ = run(capsys, "subdivide", d("square.model"), d("squash.plot"), d("square_sides45.cover"),
                       "--output", str(out_file), "--json")
    rep = json.loads(out)
    assert code == 0 and rep["r"] == 2 and rep["f_vector"] == [11, 22, 12]
    assert io.parse_complex(out_file.read_text()).f_vector() == [11, 22, 12]


def test_subdivide_non_termination(capsys):
    code = run(capsys, "subdivide", d("square.model"), d("squash.plot"), d("square_sides45.cover"), "--iters", "0")[0]
    assert code == 5


def test_subdivide_cover_misses_image(tmp_path, capsys):
    small = tmp_path / "small.cover"
    small.write_text("cover A = ball((0,0), 1/4)\ncover B = ball((1,1), 1/4)\n")
    assert run(capsys, "subdivide", d("square.model"), d("identity2.plot"), str(small))[0] == 4


def test_integrate_uses_form_header(capsys):
    code, out, _ = run(capsys, "integrate", d("circle.form"), d("circle.path"))
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "integrate", d("circle.form"), d("circle_reversed.path"))
    assert out.strip() == "-1"


def test_pou_command(capsys):
    code, out, _ = run(capsys, "pou", d("square_sides.cover"), d("square_family.plot"))
    assert code == 0 and out.strip().endswith("pass")
    code, out, _ = run(capsys, "pou", d("segment_halves.cover"), d("segment_family.plot"), "--three-valued")
    assert code == 0


@pytest.mark.skipif(shutil.which("cubedr") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["cubedr", "cohomology", d("rp2.model")], capture_output=True, text=True)
    assert res.returncode == 0 and "b: 1 0 0" in res.stdout
