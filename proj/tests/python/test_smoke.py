import math
import os
from pathlib import Path

import pytest

import pbdr

ROOT = Path(__file__).resolve().parents[2]
DATA = Path(os.environ.get("PBDR_DATA_DIR", ROOT / "data"))
SOURCE = Path(os.environ.get("PBDR_SOURCE_DIR", ROOT))


def test_worked_example():
    m = pbdr.CostMatrix(["sepal", "petal"], ["length", "width"], [[5.4, 3.0], [4.5, 1.5]])
    p = pbdr.formulate(m)
    assert p.num_vars == 2
    assert p.constant == pytest.approx(6.0, abs=1e-9)
    assert p.monomials == [(pytest.approx(2.4, abs=1e-9), [1])]
    values, lossy = pbdr.degree_project(p)
    assert values == pytest.approx([6.0, 2.4], abs=1e-9)
    assert not lossy


def test_objective_identity_small():
    cells = [[3, 1], [1, 2], [2, 5]]
    p = pbdr.formulate(cells)
    for subset in ([0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]):
        y = pbdr.assignment_for_subset(3, subset)
        brute = sum(min(cells[i][j] for i in subset) for j in range(2))
        assert pbdr.evaluate(p, y) == pytest.approx(brute)
        assert pbdr.objective(cells, subset) == pytest.approx(brute)
    subset, value = pbdr.argmin_subsets(cells, 2)
    assert subset == [0, 1]
    assert value == pytest.approx(2.0)


def test_errors_map_to_value_error():
    with pytest.raises(pbdr.InvalidInput):
        pbdr.formulate([[1.0, -1.0]])
    with pytest.raises(ValueError):
        pbdr.Hyperplane([0.0, 0.0], 1.0)
    with pytest.raises(pbdr.ParseError):
        pbdr.parse_rule("")


def test_iris_pipeline():
    loaded = pbdr.load_iris(str(DATA / "iris.csv"))
    assert len(loaded["records"]) == 150
    samples, failures = pbdr.reduce_dataset(loaded["records"], pbdr.schema("iris"))
    assert failures == []
    assert all(len(s.values) == 2 for s in samples)

    rule = pbdr.parse_rule((SOURCE / "rules" / "iris_lines.txt").read_text(), 2)
    points = [(s.id, pbdr.apply_mapping(s.values, [1, 0]), s.label) for s in samples]
    report = pbdr.accuracy(rule, points)
    assert report["total"] == 150
    assert report["correct"] >= 147
    assert ("84", "versicolor", "virginica") in [e[:3] for e in report["errors"]]

    groups = pbdr.group_equivalent(samples)
    pair = [g for g in groups if "21" in g["ids"]]
    assert pair and "22" in pair[0]["ids"]


def test_equivalent_pair():
    a = pbdr.formulate([[5.4, 3.4], [1.7, 0.2]])
    b = pbdr.formulate([[5.1, 3.7], [1.5, 0.4]])
    assert pbdr.equivalent(a, b)
    assert not pbdr.equivalent(a, pbdr.formulate([[5.4, 3.0], [4.5, 1.5]]))


def test_separators():
    plane = pbdr.Hyperplane([85.0, -2.0, -1.0], -0.4)
    assert pbdr.confidence(plane, [0, 0, 0]) == pytest.approx(0.4 / math.sqrt(7230))
    xor = [[0, 0], [1, 1], [0, 1], [1, 0]]
    exact = pbdr.search_separator_exact(xor, [0, 0, 1, 1])
    assert exact["correct"] == 3
    pocket = pbdr.search_separator_pocket([[0, 0], [1, 1]], [0, 1])
    assert pocket["accuracy"] == 1.0
    with pytest.raises(pbdr.DegenerateInput):
        pbdr.search_separator_pocket(xor, [1, 1, 1, 1])


def test_wdbc_subset_search():
    loaded = pbdr.load_wdbc(str(DATA / "wdbc.data"))
    records = loaded["records"]
    assert len(records) == 569
    assert len(pbdr.enumerate_subsets(1, 10)) == 1023
    features = ["radius", "texture", "perimeter", "smoothness", "compactness", "concavity", "symmetry",
                "fractal_dimension"]
    result = pbdr.evaluate_subset(records, features)
    assert result["total"] == 569
    assert result["accuracy"] >= 0.90
    assert result["lossy_count"] == 0


def test_cli_in_process(tmp_path):
    code, out, err = pbdr.run_cli(["reduce", "--dataset", str(DATA / "iris.csv"), "--out", str(tmp_path)])
    assert code == 0, err
    lines = (tmp_path / "reduced.csv").read_text().splitlines()
    assert lines[0] == "id,label,c0,c1,lossy"
    assert len(lines) == 151
    code, _, err = pbdr.run_cli(["plot", "--input", str(tmp_path / "missing.csv")])
    assert code == 1
    assert err
