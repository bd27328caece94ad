"""
SuiteSparse 矩阵下载

下载 {base_url}/MM/{group}/{name}.tar.gz，解出 {name}/{name}.mtx，
校验能被 Matrix Market 解析后放入 MatrixCache。
"""

from __future__ import annotations

import logging
import tarfile
import tempfile
from pathlib import Path

import httpx

from src.errors import ChecksumOrParseError, NetworkError, SubmatrixError
from src.sparse_core.mmio import load_matrix

from .matrix_cache import MatrixCache

logger = logging.getLogger(__name__)

CONNECT_TIMEOUT = 10.0
DEFAULT_HEADERS = {"User-Agent": "submatrix-method/0.1 (+https://sparse.tamu.edu)"}


def create_httpx_client(
    timeout: float = 60.0,
    transport: httpx.AsyncBaseTransport | None = None,
) -> httpx.AsyncClient:
    """
    创建下载用的 httpx 客户端

    Args:
        timeout: 读写超时（秒）
        transport: 自定义传输层（测试时注入 MockTransport）
    """
    return httpx.AsyncClient(
        headers=DEFAULT_HEADERS,
        timeout=httpx.Timeout(connect=CONNECT_TIMEOUT, read=timeout, write=timeout, pool=timeout),
        follow_redirects=True,
        transport=transport,
    )


def matrix_url(base_url: str, group: str, name: str) -> str:
    return f"{base_url.rstrip('/')}/MM/{group}/{name}.tar.gz"


def _extract_member(archive: Path, name: str, dest: Path) -> Path:
    """从 tarball 中取出 <name>/<name>.mtx"""
    wanted = f"{name}/{name}.mtx"
    try:
        with tarfile.open(archive, mode="r:gz") as tar:
            try:
                member = tar.getmember(wanted)
            except KeyError:
                raise ChecksumOrParseError(
                    f"压缩包中没有 {wanted}", details={"archive": str(archive)}
                ) from None
            if not member.isfile():
                raise ChecksumOrParseError(f"{wanted} 不是普通文件")
            src = tar.extractfile(member)
            if src is None:
                raise ChecksumOrParseError(f"无法读取 {wanted}")
            out = dest / f"{name}.mtx"
            with src, open(out, "wb") as f:
                while block := src.read(1 << 20):
                    f.write(block)
            return out
    except (tarfile.TarError, EOFError, OSError) as e:
        raise ChecksumOrParseError(f"压缩包无法解压: {e}") from e


class SuiteSparseFetcher:
    """SuiteSparse 下载器（带缓存）"""

    def __init__(
        self,
        cache: MatrixCache,
        base_url: str,
        timeout: float = 60.0,
        transport: httpx.AsyncBaseTransport | None = None,
    ):
        self.cache = cache
        self.base_url = base_url
        self.timeout = timeout
        self._transport = transport

    async def fetch(self, group: str, name: str) -> Path:
        """
        获取矩阵文件路径，缓存命中时不访问网络

        Raises:
            NetworkError: HTTP 非 2xx 或传输错误
            ChecksumOrParseError: 压缩包或矩阵文件无法解析
        """
        cached = self.cache.get(name)
        if cached is not None:
            logger.debug("缓存命中", extra={"matrix_name": name, "path": str(cached)})
            return cached

        url = matrix_url(self.base_url, group, name)
        logger.info("下载 SuiteSparse 矩阵", extra={"url": url})
        with tempfile.TemporaryDirectory(prefix="submatrix-") as tmp:
            tmpdir = Path(tmp)
            archive = tmpdir / f"{name}.tar.gz"
            await self._download(url, archive)
            mtx = _extract_member(archive, name, tmpdir)
            try:
                matrix = load_matrix(mtx)
            except SubmatrixError as e:
                raise ChecksumOrParseError(f"矩阵文件无法解析: {e.message}", details=e.details) from e
            path = self.cache.put(group, name, url, mtx)
        logger.info("矩阵已缓存", extra={"matrix_name": name, "n": matrix.n, "nnz": matrix.nnz})
        return path

    async def _download(self, url: str, dest: Path) -> None:
        try:
            async with create_httpx_client(self.timeout, self._transport) as client:
                async with client.stream("GET", url) as resp:
                    if not resp.is_success:
                        raise NetworkError(
                            f"下载失败: HTTP {resp.status_code}",
                            status=resp.status_code,
                            url=url,
                        )
                    with open(dest, "wb") as f:
                        async for chunk in resp.aiter_bytes():
                            f.write(chunk)
        except httpx.HTTPError as e:
            raise NetworkError(f"网络错误: {e}", url=url) from e
