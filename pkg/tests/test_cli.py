#!/usr/bin/env python3
"""
测试命令行与铺砌文档

验证：
1. 子命令的报告与退出码（0 / 1 / 2 / 3 / 4）
2. 文档的解析错误带行号或 JSON 路径
3. 文档写出后再读入得到同一个铺砌
4. 八面体搜索、∂Δ 与单瓦片的箭图、同调子命令
"""

import sys
import os
import json
import logging

import pytest

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from morse_shelling.cli import build_parser, main, run
from morse_shelling.document import DocumentError, dump_document, parse_document
from morse_shelling.generators import boundary_delta_shelling, triangle_cycle
from morse_shelling.simplicial import Simplex
from morse_shelling.tiles import MorseTile
from morse_shelling.tiling import MorseTiling

TRIANGLE_CYCLE_DOT = """digraph quiver {
  t0 [label="t0 (k=1)"];
  t1 [label="t1 (k=1)"];
  t2 [label="t2 (k=1)"];
  t0 -> t1 [label="0"];
  t1 -> t2 [label="0"];
  t2 -> t0 [label="0"];
}
"""


def cli(*argv):
    return run(build_parser().parse_args([str(a) for a in argv]))


def write_document(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
    return path


@pytest.fixture
def sphere_file(tmp_path):
    path = tmp_path / "sphere3.json"
    report, code = cli("examples", "boundary-delta", "--n", 3, "--out", path)
    assert code == 0
    assert report["order"] == [0, 1, 2, 3, 4]
    return path


@pytest.fixture
def cycle_file(tmp_path):
    path = tmp_path / "cycle.json"
    _, code = cli("examples", "triangle-cycle", "--out", path)
    assert code == 0
    return path


def test_examples_then_validate(sphere_file):
    report, code = cli("validate", sphere_file)
    assert code == 0
    assert report["ok"]
    assert report["tiles"] == 5
    assert report["critical_indices"] == {"0": 1, "3": 1}


def test_examples_without_out_prints_document():
    report, code = cli("examples", "boundary-delta", "--n", 1)
    assert code == 0
    assert report["format_version"] == "1.0"
    assert len(report["tiles"]) == 3


def test_unknown_example_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        build_parser().parse_args(["examples", "torus"])
    assert excinfo.value.code == 4


def test_shell(sphere_file, cycle_file):
    report, code = cli("shell", sphere_file)
    assert code == 0
    assert report["order"] == [0, 1, 2, 3, 4]

    report, code = cli("shell", cycle_file)
    assert code == 1
    assert not report["shellable"]
    assert sorted(report["certificate"]["cycle"]) == [0, 1, 2]

    report, code = cli("shell", cycle_file, "--order", 0)
    assert code == 1


def test_partial_shell(sphere_file):
    report, code = cli("shell", sphere_file, "--order", 1)
    assert code == 0
    assert report["order"] == [0, 1, 2]
    assert report["prefix_sizes"] == [0, 10, 14, 15]

    report, code = cli("shell", sphere_file, "--order", -1)
    assert code == 4


def test_quiver_dot(cycle_file, tmp_path):
    dot = tmp_path / "out" / "cycle.dot"
    report, code = cli("quiver", cycle_file, "--dot", dot)
    assert code == 0
    assert not report["acyclic"]
    assert dot.read_text(encoding="utf-8") == TRIANGLE_CYCLE_DOT

    report, _ = cli("quiver", cycle_file)
    assert report["dot_text"] == TRIANGLE_CYCLE_DOT


def test_spectral(sphere_file):
    report, code = cli("spectral", sphere_file)
    assert code == 0
    assert report["verdict"] == "MATCH"
    assert report["ring"] == "Q"
    assert report["homology"]["degeneration_page"] == 1
    assert report["cohomology"]["limit"]["verdict"] == "MATCH"
    assert report["first_page"]["ok"]
    assert report["betti_bound"]["ok"]

    report, code = cli("spectral", sphere_file, "--coeff", "mod:3", "--order", 1)
    assert code == 0
    assert report["homology"]["limit"]["oracle"] == {"0": 1, "1": 6}


def test_spectral_usage_errors(sphere_file):
    _, code = cli("spectral", sphere_file, "--coeff", "integer")
    assert code == 4
    _, code = cli("spectral", sphere_file, "--coeff", "mod:4")
    assert code == 4
    _, code = cli("spectral", sphere_file, "--pages", "many")
    assert code == 4


def test_spectral_on_cycle_is_negative(cycle_file):
    report, code = cli("spectral", cycle_file)
    assert code == 1
    assert "certificate" in report


def test_homology(tmp_path):
    path = tmp_path / "circle.json"
    cli("examples", "boundary-delta", "--n", 1, "--out", path)
    report, code = cli("homology", path)
    assert code == 0
    assert report["ring"] == "Z"
    groups = report["underlying"]["homology"]["groups"]
    assert [g["rank"] for g in groups] == [1, 1]
    assert report["underlying"]["euler_characteristic"] == 0


def test_malformed_json(tmp_path):
    path = write_document(tmp_path, "broken.json", '{"format_version": "1.0",\n  "tiles": [\n')
    report, code = cli("validate", path)
    assert code == 3
    assert report["error"]["line"] is not None


def test_missing_format_version(tmp_path):
    path = write_document(tmp_path, "old.json", {"tiles": []})
    report, code = cli("validate", path)
    assert code == 3
    assert report["error"]["path"] == "$.format_version"


def test_unsupported_format_version():
    with pytest.raises(DocumentError):
        parse_document(json.dumps({"format_version": "2.0", "tiles": []}))


def test_structural_error_has_path():
    text = json.dumps({"format_version": "1.0", "tiles": [{"simplex": [0, "a"]}]})
    with pytest.raises(DocumentError) as excinfo:
        parse_document(text)
    assert excinfo.value.path == "$.tiles[0].simplex[1]"


def test_double_cover_is_invalid(tmp_path):
    path = write_document(tmp_path, "double.json", {
        "format_version": "1.0",
        "tiles": [{"simplex": [0, 1]}, {"simplex": [0]}],
    })
    report, code = cli("validate", path)
    assert code == 2
    assert report["partition"]["multiply_covered"] == [{"cell": [0], "tiles": [0, 1]}]

    report, code = cli("shell", path)
    assert code == 2
    assert report["error"] == "invalid tiling"


def test_tile_violation_is_invalid(tmp_path):
    path = write_document(tmp_path, "bad_tile.json", {
        "format_version": "1.0",
        "tiles": [{"simplex": [0, 1, 2], "removed_opposite": [0, 1, 2], "morse_face": [3]}],
    })
    report, code = cli("validate", path)
    assert code == 2
    assert len(report["violations"]) == 3
    assert all(v.startswith("tiles[0]:") for v in report["violations"])


def test_document_round_trip():
    for tiling in [boundary_delta_shelling(3)[0], triangle_cycle()]:
        assert parse_document(dump_document(tiling)) == tiling


def test_document_round_trip_with_cells():
    tile = MorseTile(Simplex((0, 1, 2)), {0}, None)
    tiling = MorseTiling.from_tiles([tile], cells=tile.open_faces | {Simplex((1,))})
    document = json.loads(dump_document(tiling))
    assert [1] in document["cells"]
    assert parse_document(dump_document(tiling)) == tiling


def test_main_writes_json(capsys):
    try:
        code = main(["examples", "triangle-cycle"])
        out = capsys.readouterr().out
    finally:
        logging.getLogger("morse_shelling").handlers.clear()
    assert code == 0
    assert json.loads(out)["format_version"] == "1.0"


@pytest.fixture(scope="module")
def octahedron_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("octahedron") / "octahedron.json"
    report, code = cli("examples", "octahedron-search", "--out", path)
    assert code == 0
    assert report["tiles"] == len(report["order"])
    return path


def nonzero(totals):
    return {d: n for d, n in totals.items() if n}


def test_examples_octahedron_search_round_trip(octahedron_file):
    """搜索得到的八面体铺砌写出再读入不变，且按文件顺序即是壳化"""
    tiling = parse_document(octahedron_file.read_text(encoding="utf-8"))
    assert parse_document(dump_document(tiling)) == tiling

    report, code = cli("shell", octahedron_file)
    assert code == 0
    assert report["order"] == list(range(len(tiling)))


def test_spectral_octahedron_degenerates_at_second_page(octahedron_file):
    report, code = cli("spectral", octahedron_file)
    assert code == 0
    assert report["verdict"] == "MATCH"
    for direction in ("homology", "cohomology"):
        assert report[direction]["degeneration_page"] == 2
        assert report[direction]["limit"]["verdict"] == "MATCH"
    rational = nonzero(report["homology"]["limit"]["totals"])
    assert rational == {"0": 1, "2": 1}

    report, code = cli("spectral", octahedron_file, "--coeff", "mod:2")
    assert code == 0
    assert report["ring"] == "GF(2)"
    assert nonzero(report["homology"]["limit"]["totals"]) == rational


def test_homology_of_octahedron_and_tetrahedron(octahedron_file, tmp_path):
    report, code = cli("homology", octahedron_file)
    assert code == 0
    groups = report["underlying"]["homology"]["groups"]
    assert [g["rank"] for g in groups] == [1, 0, 1]
    assert report["underlying"]["euler_characteristic"] == 2

    # Δ_3 为单个闭瓦片：H = (1, 0, 0, 0)，末尾的零群不写出
    path = write_document(tmp_path, "delta3.json", {
        "format_version": "1.0",
        "tiles": [{"simplex": [0, 1, 2, 3]}],
    })
    report, code = cli("homology", path)
    assert code == 0
    groups = report["underlying"]["homology"]["groups"]
    assert [g["rank"] for g in groups] == [1]
    assert report["underlying"]["f_vector"] == [4, 6, 4, 1]


def test_quiver_of_boundary_delta_is_complete_dag(sphere_file):
    report, code = cli("quiver", sphere_file)
    assert code == 0
    assert report["acyclic"]
    arrows = {(a["source"], a["target"]) for a in report["quiver"]["arrows"]}
    assert arrows == {(j, i) for j in range(5) for i in range(j)}
    assert all(a["label"] == 2 for a in report["quiver"]["arrows"])


def test_quiver_of_single_tile(tmp_path):
    path = write_document(tmp_path, "single.json", {
        "format_version": "1.0",
        "tiles": [{"simplex": [0, 1, 2]}],
    })
    report, code = cli("quiver", path)
    assert code == 0
    assert report["acyclic"]
    assert report["quiver"]["vertices"] == [{"id": 0, "order": 0}]
    assert report["quiver"]["arrows"] == []
