"""
SuiteSparse 下载测试（MockTransport，不访问网络）
"""

import io
import tarfile

import httpx
import pytest

from src.errors import ChecksumOrParseError, NetworkError, exit_code_for
from src.utils.matrix_cache import MatrixCache
from src.utils.suitesparse import SuiteSparseFetcher, matrix_url

MTX = "%%MatrixMarket matrix coordinate real symmetric\n3 3 4\n1 1 4.0\n2 1 -1.0\n2 2 4.0\n3 3 4.0\n"


def make_tarball(members: dict[str, str]) -> bytes:
    buf = io.BytesIO()
    with tarfile.open(fileobj=buf, mode="w:gz") as tar:
        for name, text in members.items():
            data = text.encode()
            info = tarfile.TarInfo(name)
            info.size = len(data)
            tar.addfile(info, io.BytesIO(data))
    return buf.getvalue()


class Server:
    """记录请求的假服务器"""

    def __init__(self, status: int = 200, body: bytes = b""):
        self.status = status
        self.body = body
        self.requests: list[httpx.Request] = []

    def __call__(self, request: httpx.Request) -> httpx.Response:
        self.requests.append(request)
        return httpx.Response(self.status, content=self.body)


@pytest.fixture
def cache(tmp_path):
    return MatrixCache(tmp_path / "cache")


def _fetcher(cache, handler) -> SuiteSparseFetcher:
    return SuiteSparseFetcher(cache, "https://ss.example/", transport=httpx.MockTransport(handler))


class TestMatrixUrl:
    def test_trailing_slash(self):
        assert matrix_url("https://sparse.tamu.edu/", "HB", "1138_bus") == (
            "https://sparse.tamu.edu/MM/HB/1138_bus.tar.gz"
        )


class TestSuiteSparseFetcher:
    """下载与缓存测试"""

    async def test_download_then_cache_hit(self, cache):
        """测试下载后再次获取命中缓存"""
        server = Server(body=make_tarball({"tiny/tiny.mtx": MTX, "tiny/README": "x"}))
        fetcher = _fetcher(cache, server)
        path = await fetcher.fetch("Test", "tiny")
        assert path.read_text() == MTX
        assert str(server.requests[0].url) == "https://ss.example/MM/Test/tiny.tar.gz"
        assert cache.entry("tiny").group == "Test"

        again = await fetcher.fetch("Test", "tiny")
        assert again == path
        assert len(server.requests) == 1

    async def test_http_404(self, cache):
        """测试 HTTP 404"""
        fetcher = _fetcher(cache, Server(status=404))
        with pytest.raises(NetworkError) as exc:
            await fetcher.fetch("HB", "missing")
        assert exc.value.status == 404
        assert exit_code_for(exc.value) == 3
        assert cache.get("missing") is None

    async def test_connect_error(self, cache):
        """测试连接失败"""
        def refuse(request):
            raise httpx.ConnectError("connection refused", request=request)

        with pytest.raises(NetworkError) as exc:
            await _fetcher(cache, refuse).fetch("HB", "x")
        assert exc.value.status is None

    async def test_missing_member(self, cache):
        """测试压缩包缺少矩阵文件"""
        server = Server(body=make_tarball({"other/other.mtx": MTX}))
        with pytest.raises(ChecksumOrParseError):
            await _fetcher(cache, server).fetch("HB", "tiny")
        assert cache.list_entries() == []

    async def test_not_a_tarball(self, cache):
        """测试响应不是压缩包"""
        with pytest.raises(ChecksumOrParseError):
            await _fetcher(cache, Server(body=b"<html>oops</html>")).fetch("HB", "tiny")

    async def test_unparseable_matrix(self, cache):
        """测试矩阵文件无法解析"""
        server = Server(body=make_tarball({"tiny/tiny.mtx": "not a matrix market file\n"}))
        with pytest.raises(ChecksumOrParseError):
            await _fetcher(cache, server).fetch("HB", "tiny")
        assert cache.get("tiny") is None
