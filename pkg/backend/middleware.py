"""
Request logging for the compute endpoints.
"""
import logging
import time

logger = logging.getLogger(__name__)


class RequestLoggingMiddleware:
    """
    Log method, path, status and wall time of every request.
    """
    def __init__(self, get_response):
        self.get_response = get_response

    def __call__(self, request):
        started = time.perf_counter()
        response = self.get_response(request)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        logger.info(
            "%s %s -> %s in %.1f ms",
            request.method, request.get_full_path(), response.status_code, elapsed_ms,
        )
        return response
