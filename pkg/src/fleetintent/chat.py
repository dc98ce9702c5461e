"""Minimal chat-completion HTTP client.

Speaks the ubiquitous /chat/completions wire shape against any
compatible endpoint. The credential is read from an environment
variable, never from config files. A semaphore caps in-flight requests;
the client itself is stateless otherwise.
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass
from typing import Any

import httpx


class BackendUnavailable(ConnectionError):
    """The chat-completion endpoint could not be reached."""


class MalformedResponse(ValueError):
    """A reply contained no parseable structured document."""


@dataclass(frozen=True)
class ChatEndpoint:
    base_url: str
    model: str
    api_key_env: str = "FLEETINTENT_API_KEY"
    timeout_seconds: float = 30.0
    max_inflight: int = 4


class ChatCompletionClient:
    def __init__(self, endpoint: ChatEndpoint, transport: httpx.BaseTransport | None = None):
        self.endpoint = endpoint
        self._semaphore = threading.Semaphore(endpoint.max_inflight)
        self._client = httpx.Client(
            base_url=endpoint.base_url,
            timeout=endpoint.timeout_seconds,
            transport=transport,
        )

    def complete(self, messages: list[dict[str, str]]) -> str:
        """POST the messages, return the assistant reply text."""
        headers = {}
        api_key = os.environ.get(self.endpoint.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        body = {"model": self.endpoint.model, "messages": messages}
        with self._semaphore:
            try:
                response = self._client.post("/chat/completions", json=body, headers=headers)
                response.raise_for_status()
            except httpx.HTTPError as exc:
                raise BackendUnavailable(f"chat endpoint unreachable: {exc}") from exc
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise MalformedResponse(f"reply is not a chat completion: {exc}") from exc

    def close(self) -> None:
        self._client.close()


_FENCED = re.compile(r"```(?:json)?\s*(\{.*?\})\s*```", re.DOTALL)


def extract_json_document(text: str) -> dict[str, Any]:
    """Pull the first JSON object out of a model reply.

    Prefers fenced ```json blocks, then falls back to the first balanced
    top-level object. Raises MalformedResponse when nothing parses.
    """
    fenced = _FENCED.search(text)
    candidates = [fenced.group(1)] if fenced else []
    start = text.find("{")
    if start != -1:
        depth = 0
        for i in range(start, len(text)):
            if text[i] == "{":
                depth += 1
            elif text[i] == "}":
                depth -= 1
                if depth == 0:
                    candidates.append(text[start : i + 1])
                    break
    for candidate in candidates:
        try:
            doc = json.loads(candidate)
        except json.JSONDecodeError:
            continue
        if isinstance(doc, dict):
            return doc
    raise MalformedResponse("no parseable document in reply")
