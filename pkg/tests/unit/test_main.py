# -*- coding: utf-8 -*-
"""
命令行入口与 JSON 文档单元测试

覆盖退出码（0 成功 / 1 领域错误 / 2 输入错误）、JSON 输出与 pretty 输出。
"""

import json
import sys
from pathlib import Path

# 添加src到路径
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

import pytest
from loguru import logger

from api.exceptions import FieldError, ParseError
from api.schemas import AlgebraDocument, MatrixDocument, parse_document
from main import main
from services.character_systems import build_d1_algebra
from services.exact_linalg import FieldSpec
from services.unified_config import reload_config


def _matrix_doc(entries, field=None) -> str:
    return json.dumps({"field": field or {"type": "rational"}, "entries": entries})


@pytest.fixture(autouse=True)
def isolated(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("IDEMSYS_CONFIG", raising=False)
    monkeypatch.delenv("IDEMSYS_OUTPUT_FORMAT", raising=False)
    yield
    logger.remove()
    reload_config()


def _run(capsys, tmp_path, argv, document=None):
    if document is not None:
        path = tmp_path / "input.json"
        path.write_text(document, encoding="utf-8")
        argv = argv + ["--input", str(path)]
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestDocuments:
    """输入文档解析"""

    def test_matrix_document(self):
        doc = parse_document(MatrixDocument, _matrix_doc([["1", "2"], ["1", "-1"]]))
        matrix = doc.to_matrix()
        assert matrix.d == 1
        assert MatrixDocument.from_matrix(matrix).entries == [["1", "2"], ["1", "-1"]]

    def test_prime_document_reduces_entries(self):
        doc = parse_document(MatrixDocument, _matrix_doc([["1", "4"], ["1", "-1"]], {"type": "prime", "p": 3}))
        assert doc.to_matrix().to_strings() == [["1", "1"], ["1", "2"]]

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            parse_document(MatrixDocument, "{")

    def test_missing_field(self):
        with pytest.raises(ParseError):
            parse_document(MatrixDocument, json.dumps({"entries": [["1"]]}))

    def test_non_square(self):
        doc = parse_document(MatrixDocument, _matrix_doc([["1", "2"]]))
        with pytest.raises(ParseError):
            doc.to_matrix()

    def test_bad_scalar(self):
        doc = parse_document(MatrixDocument, _matrix_doc([["x"]]))
        with pytest.raises(ParseError):
            doc.to_matrix()

    def test_composite_modulus(self):
        doc = parse_document(MatrixDocument, _matrix_doc([["1"]], {"type": "prime", "p": 9}))
        with pytest.raises(FieldError):
            doc.to_matrix()

    def test_algebra_document(self):
        alg = build_d1_algebra(FieldSpec.rational().scalar(2))
        doc = AlgebraDocument.from_algebra(alg)
        assert doc.pnum[1][1] == ["1", "1"]
        assert doc.to_algebra() == alg

    def test_algebra_document_shape(self):
        text = json.dumps({"field": {"type": "rational"}, "d": 1, "pnum": [[["1", "0"], ["0", "2"]]]})
        with pytest.raises(ParseError):
            parse_document(AlgebraDocument, text).to_algebra()


class TestCommands:
    """子命令与退出码"""

    def test_classify(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["classify"], _matrix_doc([["1", "2"], ["1", "-1"]]))
        assert code == 0
        data = json.loads(out)
        assert data["invertible"] and data["solid"] and data["normalized"] and data["ao"] and data["aon"]
        assert data["ao_witness"] is not None

    def test_normalize(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["normalize"], _matrix_doc([["1", "2"], ["3", "-3"]]))
        assert code == 0
        data = json.loads(out)
        assert data["normalized"]["entries"] == [["1", "2"], ["1", "-1"]]
        assert data["witness"]["h"] == ["1", "1/3"]

    def test_normalize_not_solid(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["normalize"], _matrix_doc([["1", "0"], ["0", "1"]]))
        assert code == 1
        assert json.loads(out)["error_code"] == "NOT_SOLID"

    def test_ao(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["ao"], _matrix_doc([["1", "1", "1"], ["1", "2", "1"], ["1", "1", "2"]]))
        assert code == 0
        assert json.loads(out) == {"ao": False, "witness": None}

    def test_eigendata(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["eigendata"], _matrix_doc([["1", "2"], ["1", "-1"]]))
        assert code == 0
        data = json.loads(out)
        assert data["nu"] == "3"
        assert data["m"] == ["1/3", "2/3"]
        assert data["k"] == ["1", "2"]
        assert data["pnum"][1][1][1] == "1"

    def test_eigendata_rejects_non_aon(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["eigendata"], _matrix_doc([["2", "2"], ["2", "-2"]]))
        assert code == 1
        assert json.loads(out)["error_code"] == "NOT_AON"

    def test_dual(self, capsys, tmp_path):
        doc = _matrix_doc([["1", "3", "6"], ["1", "1", "-2"], ["1", "-2", "1"]])
        code, out = _run(capsys, tmp_path, ["dual"], doc)
        assert code == 0
        assert json.loads(out)["entries"] == [["1", "5", "4"], ["1", "5/3", "-8/3"], ["1", "-5/3", "2/3"]]

    def test_dual_twice_is_identity(self, capsys, tmp_path):
        original = [["1", "3", "6"], ["1", "1", "-2"], ["1", "-2", "1"]]
        code, first = _run(capsys, tmp_path, ["dual"], _matrix_doc(original))
        assert code == 0
        code, second = _run(capsys, tmp_path, ["dual"], first)
        assert code == 0
        assert json.loads(second)["entries"] == original

    def test_dual_over_prime_field(self, capsys, tmp_path):
        doc = _matrix_doc([["1", "2"], ["1", "-1"]], {"type": "prime", "p": 5})
        code, out = _run(capsys, tmp_path, ["dual"], doc)
        assert code == 0
        assert json.loads(out) == {"field": {"type": "prime", "p": 5}, "entries": [["1", "2"], ["1", "4"]]}

    def test_character(self, capsys, tmp_path):
        doc = AlgebraDocument.from_algebra(build_d1_algebra(FieldSpec.rational().scalar(2))).model_dump_json()
        code, out = _run(capsys, tmp_path, ["character"], doc)
        assert code == 0
        data = json.loads(out)
        assert data["eigenmatrix"] == [["1", "2"], ["1", "-1"]]
        assert data["nu"] == "3"
        assert data["m"] == ["1/3", "2/3"]
        assert data["kstar"] == ["1", "2"]

    def test_character_not_split(self, capsys, tmp_path):
        """k = -1 时代数不半单"""
        doc = AlgebraDocument.from_algebra(build_d1_algebra(FieldSpec.rational().scalar(-1))).model_dump_json()
        code, out = _run(capsys, tmp_path, ["character"], doc)
        assert code == 1
        assert json.loads(out)["error_code"] == "NOT_SPLIT_SEMISIMPLE"

    def test_character_axiom_violation(self, capsys, tmp_path):
        text = json.dumps({"field": {"type": "rational"}, "d": 1,
                           "pnum": [[["1", "0"], ["0", "2"]], [["0", "1"], ["1", "5"]]]})
        code, out = _run(capsys, tmp_path, ["character"], text)
        assert code == 1
        data = json.loads(out)
        assert data["error_code"] == "AXIOM_VIOLATION"
        assert data["details"]["axiom"] == "homomorphism"

    def test_enumerate(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["enumerate", "--d", "1", "--p", "5"])
        assert code == 0
        data = json.loads(out)
        assert data["aon_count"] == 3
        assert data["candidates"] == 25

    def test_enumerate_budget(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["enumerate", "--d", "2", "--p", "5", "--budget", "10"])
        assert code == 1
        assert json.loads(out)["error_code"] == "BUDGET_EXCEEDED"

    def test_enumerate_budget_from_config_file(self, capsys, tmp_path):
        (tmp_path / "config.json").write_text(json.dumps({"enumerate_budget": "10"}), encoding="utf-8")
        code, out = _run(capsys, tmp_path, ["enumerate", "--d", "2", "--p", "5"])
        assert code == 1
        assert json.loads(out)["error_code"] == "BUDGET_EXCEEDED"

    def test_enumerate_composite(self, capsys, tmp_path):
        code, _ = _run(capsys, tmp_path, ["enumerate", "--d", "1", "--p", "6"])
        assert code == 2

    def test_verify(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["verify"], _matrix_doc([["1", "2"], ["1", "-1"]]))
        assert code == 0
        data = json.loads(out)
        assert data["passed"] is True
        assert all(check["status"] == "pass" for check in data["checks"])

    def test_verify_singular_fails(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["verify"], _matrix_doc([["1", "1"], ["1", "1"]]))
        assert code == 1
        assert json.loads(out)["passed"] is False

    # ============= 输入错误 =============

    def test_parse_error_exit_code(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["classify"], "not json")
        assert code == 2
        assert json.loads(out)["error_code"] == "PARSE_ERROR"

    def test_missing_file(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["classify", "--input", str(tmp_path / "missing.json")])
        assert code == 2
        assert json.loads(out)["error_code"] == "INPUT_FILE_ERROR"

    def test_modulus_too_large(self, capsys, tmp_path):
        doc = _matrix_doc([["1"]], {"type": "prime", "p": 18446744073709551629})
        code, out = _run(capsys, tmp_path, ["classify"], doc)
        assert code == 2
        assert json.loads(out)["error_code"] == "FIELD_ERROR"

    # ============= pretty 输出 =============

    def test_pretty_classify(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["--format", "pretty", "classify"], _matrix_doc([["1", "2"], ["1", "-1"]]))
        assert code == 0
        assert "field: Q" in out
        assert "aon: True" in out

    def test_pretty_verify(self, capsys, tmp_path):
        code, out = _run(capsys, tmp_path, ["verify", "--format", "pretty"], _matrix_doc([["1", "2"], ["1", "-1"]]))
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[-1] == "passed: True"
        assert lines[0].startswith("invertible")

    def test_pretty_error_goes_to_stderr(self, capsys, tmp_path):
        path = tmp_path / "input.json"
        path.write_text("{", encoding="utf-8")
        code = main(["classify", "--format", "pretty", "--input", str(path)])
        captured = capsys.readouterr()
        assert code == 2
        assert captured.out == ""
        assert "PARSE_ERROR" in captured.err

    # ============= 输出文档再解析 =============

    def test_emitted_matrix_documents_parse_back(self, capsys, tmp_path):
        """dual / normalize / enumerate 输出的矩阵都能作为 MatrixDocument 重新读入"""
        _, dual_out = _run(capsys, tmp_path, ["dual"], _matrix_doc([["1", "2"], ["1", "-1"]]))
        dual_doc = parse_document(MatrixDocument, dual_out)
        assert MatrixDocument.from_matrix(dual_doc.to_matrix()) == dual_doc

        _, normalize_out = _run(capsys, tmp_path, ["normalize"], _matrix_doc([["2", "4"], ["3", "-3"]]))
        normalized = json.loads(normalize_out)["normalized"]
        normalized_doc = parse_document(MatrixDocument, json.dumps(normalized))
        assert normalized_doc.to_matrix().to_strings() == [["1", "2"], ["1", "-1"]]

        _, census_out = _run(capsys, tmp_path, ["enumerate", "--d", "1", "--p", "5"])
        census = json.loads(census_out)
        for entry in census["matrices"]:
            doc = parse_document(MatrixDocument, _matrix_doc(entry["entries"], census["field"]))
            assert doc.to_matrix().to_strings() == entry["entries"]

    @pytest.mark.parametrize("spec", [FieldSpec.rational(), FieldSpec.prime(5), FieldSpec.prime(7)], ids=str)
    def test_algebra_document_parses_back(self, spec):
        alg = build_d1_algebra(spec.scalar(2))
        text = AlgebraDocument.from_algebra(alg).model_dump_json()
        assert parse_document(AlgebraDocument, text).to_algebra() == alg
