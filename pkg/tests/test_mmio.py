"""
Matrix Market 读写测试
"""

import numpy as np
import pytest

from src.errors import ParseError, UnsupportedFormat
from src.sparse_core import (
    csc_from_triplets,
    load_matrix,
    read_matrix_market,
    save_matrix,
    write_matrix_market,
)

SYMMETRIC_TEXT = """%%MatrixMarket matrix coordinate real symmetric
% 注释行
3 3 4
1 1 4.0
2 1 -1.0
2 2 4.0
3 3 2.5
"""


class TestRead:
    """读取测试"""

    def test_symmetric_expanded(self):
        """测试对称文件补全上三角"""
        a = read_matrix_market(SYMMETRIC_TEXT)
        assert a.n == 3
        assert a.nnz == 5
        assert a.symmetric is True
        assert a.to_dense()[0, 1] == -1.0
        assert a.to_dense()[1, 0] == -1.0

    def test_general(self):
        """测试 general 格式"""
        text = "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n2 1 5\n2 2 1\n"
        a = read_matrix_market(text)
        assert a.symmetric is False
        assert a.to_dense()[1, 0] == 5.0

    def test_integer_field(self):
        """测试 integer 字段"""
        text = "%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 3\n"
        assert read_matrix_market(text).val.tolist() == [3.0]

    @pytest.mark.parametrize(
        "header",
        [
            "%%MatrixMarket matrix coordinate pattern symmetric",
            "%%MatrixMarket matrix coordinate complex general",
            "%%MatrixMarket matrix array real general",
            "%%MatrixMarket matrix coordinate real hermitian",
        ],
    )
    def test_unsupported(self, header):
        """测试不支持的格式"""
        with pytest.raises(UnsupportedFormat):
            read_matrix_market(f"{header}\n1 1 1\n1 1 1\n")

    def test_missing_header(self):
        """测试缺少文件头"""
        with pytest.raises(ParseError) as exc:
            read_matrix_market("3 3 0\n")
        assert exc.value.line == 1

    def test_bad_entry_line_number(self):
        """测试错误行号"""
        text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 x 1.0\n"
        with pytest.raises(ParseError) as exc:
            read_matrix_market(text)
        assert exc.value.line == 4

    def test_count_mismatch(self):
        """测试元素个数不符"""
        text = "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n"
        with pytest.raises(ParseError):
            read_matrix_market(text)

    def test_upper_entry_in_symmetric_file(self):
        """测试对称文件中的上三角元素"""
        text = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n"
        with pytest.raises(ParseError):
            read_matrix_market(text)

    def test_rectangular(self):
        """测试非方阵"""
        with pytest.raises(UnsupportedFormat):
            read_matrix_market("%%MatrixMarket matrix coordinate real general\n2 3 0\n")

    def test_index_out_of_range(self):
        """测试索引越界"""
        text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n"
        with pytest.raises(ParseError):
            read_matrix_market(text)


class TestWrite:
    """写出测试"""

    def test_symmetric_written_lower(self):
        """测试对称矩阵只写下三角"""
        a = read_matrix_market(SYMMETRIC_TEXT)
        text = write_matrix_market(a)
        assert text.startswith("%%MatrixMarket matrix coordinate real symmetric")
        assert "3 3 4" in text.splitlines()[1]

    def test_exact_roundtrip(self, random_spd):
        """repr 输出保证逐位往返"""
        tricky = csc_from_triplets([(0, 0, 0.1 + 0.2), (1, 1, 1.0 / 3.0)], 2)
        assert read_matrix_market(write_matrix_market(tricky)) == tricky
        assert read_matrix_market(write_matrix_market(random_spd)) == random_spd

    def test_save_creates_parent(self, tmp_path, tridiagonal):
        """测试自动创建父目录"""
        path = save_matrix(tridiagonal, tmp_path / "nested" / "dir" / "t.mtx")
        assert path.exists()
        b = load_matrix(path)
        np.testing.assert_array_equal(b.to_dense(), tridiagonal.to_dense())
