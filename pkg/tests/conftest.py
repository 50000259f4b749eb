import datetime as dt
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from fomc_dissent.classify import Granularity, ScoredUnit, Unit
from fomc_dissent.corpus import DocumentKind
from fomc_dissent.labels import Label

DATA = Path(__file__).parent / "data"
CORPUS = DATA / "corpus"

DAY = dt.date(2016, 1, 27)


def scored(labels, meeting=DAY, kind=DocumentKind.STATEMENT, granularity=Granularity.SENTENCE):
    return [
        ScoredUnit(Unit(meeting, kind, granularity, str(i), ""), lab)
        for i, lab in enumerate(labels)
    ]


class StubServer:
    """Serves canned (status, body) pairs keyed by path; records POST bodies."""

    def __init__(self):
        self.routes = {}
        self.posts = []
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def _reply(self):
                status, body = stub.routes.get(self.path, (404, b"not found"))
                if callable(body):
                    body = body()
                if isinstance(body, str):
                    body = body.encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_GET(self):
                self._reply()

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                stub.posts.append(
                    {"path": self.path, "headers": dict(self.headers), "body": json.loads(self.rfile.read(length))}
                )
                self._reply()

            def log_message(self, *args):
                pass

        self.httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.url = f"http://127.0.0.1:{self.httpd.server_address[1]}"
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self.thread.start()

    def close(self):
        self.httpd.shutdown()
        self.httpd.server_close()


@pytest.fixture
def stub_server():
    server = StubServer()
    yield server
    server.close()


@pytest.fixture
def corpus_root():
    return CORPUS


def chat_response(content):
    return json.dumps({"choices": [{"message": {"role": "assistant", "content": content}}]})


ALL_LABELS = list(Label)
