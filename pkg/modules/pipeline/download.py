import httpx
import logging
import time
from typing import Optional

from modules.config import DATA_RETRIES, DATA_TIMEOUT, DATA_VERIFY_SSL
from modules.reasoning.errors import DownloadError

logger = logging.getLogger(__name__)


def is_url(source: str) -> bool:
    return source.lower().startswith(("http://", "https://"))


def get_client_kwargs(timeout: Optional[float] = None):
    """Get httpx client configuration"""
    return {
        "timeout": DATA_TIMEOUT if timeout is None else timeout,
        "verify": DATA_VERIFY_SSL,
        "headers": {"Accept": "text/csv, text/plain, */*", "User-Agent": "reasonkit/1.0"},
        "follow_redirects": True,
        "trust_env": False,
    }


def _wait(attempt: int, retry_count: int, reason: str) -> bool:
    """Sleep before the next attempt; False when no attempts are left"""
    if attempt >= retry_count - 1:
        logger.error(f"{reason} after {retry_count} attempts")
        return False
    wait_time = min(2 ** attempt, 10)
    logger.info(f"{reason}, retrying in {wait_time} seconds...")
    time.sleep(wait_time)
    return True


def fetch_text(url: str, retry_count: Optional[int] = None, timeout: Optional[float] = None) -> str:
    """Download a dataset with retry logic; 5xx answers and connection problems are retried"""
    retry_count = DATA_RETRIES if retry_count is None else retry_count
    logger.info(f"Downloading dataset from: {url}")

    for attempt in range(retry_count):
        try:
            with httpx.Client(**get_client_kwargs(timeout)) as client:
                response = client.get(url)
                logger.debug(f"Response status: {response.status_code}")
                if response.status_code >= 500:
                    if _wait(attempt, retry_count, f"Server error {response.status_code}"):
                        continue
                    raise DownloadError(f"server error {response.status_code} for {url}")
                response.raise_for_status()
                if not response.text.strip():
                    raise DownloadError(f"empty response from {url}")
                return response.text

        except httpx.HTTPStatusError as e:
            raise DownloadError(f"HTTP error {e.response.status_code} for {url}") from None

        except (httpx.ConnectError, httpx.TimeoutException, httpx.RemoteProtocolError) as e:
            logger.error(f"{type(e).__name__} on attempt {attempt + 1}: {e}")
            if not _wait(attempt, retry_count, "Download failed"):
                raise DownloadError(f"could not download {url}: {e}") from None

    raise DownloadError(f"could not download {url}")
