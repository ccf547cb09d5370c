"""Uniform access to chat-completion providers, gated by a cassette.

Provider configuration lives in the environment: <PROVIDER>_API_KEY and
<PROVIDER>_BASE_URL, with the provider name uppercased and non-alphanumerics
mapped to underscores. The wire format is the widely copied OpenAI chat
completion shape, which every provider in use here exposes natively or via
a gateway.
"""
from __future__ import annotations

import os
import re
import time

import requests

from .cassette import Cassette, CassetteMode

_RETRIES = 3
_BACKOFF_SECONDS = 0.5
_TIMEOUT_SECONDS = 120


class ProviderError(RuntimeError):
    """Transport or API failure that survived the retry budget."""


class UnconfiguredError(RuntimeError):
    """No endpoint/credential configured for the requested provider."""


def _env_name(provider: str, suffix: str) -> str:
    return re.sub(r"[^A-Za-z0-9]", "_", provider).upper() + suffix


def _call_live(provider: str, model: str, prompt: str) -> str:
    base_url = os.environ.get(_env_name(provider, "_BASE_URL"))
    if not base_url:
        raise UnconfiguredError(
            f"set {_env_name(provider, '_BASE_URL')} (and _API_KEY) to call {provider!r} live")
    api_key = os.environ.get(_env_name(provider, "_API_KEY"), "")
    headers = {"Content-Type": "application/json"}
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    body = {"model": model, "messages": [{"role": "user", "content": prompt}]}

    last_error: Exception | None = None
    for attempt in range(_RETRIES):
        try:
            response = requests.post(
                base_url.rstrip("/") + "/chat/completions",
                json=body, headers=headers, timeout=_TIMEOUT_SECONDS)
            if response.status_code >= 500:
                raise ProviderError(f"{provider} returned {response.status_code}")
            response.raise_for_status()
            payload = response.json()
            return payload["choices"][0]["message"]["content"]
        except (requests.RequestException, ProviderError, KeyError, ValueError) as exc:
            last_error = exc
            if attempt < _RETRIES - 1:
                time.sleep(_BACKOFF_SECONDS * (2 ** attempt))
    raise ProviderError(f"{provider} request failed after {_RETRIES} attempts: {last_error}")


def complete(provider: str, model: str, prompt: str, cassette: Cassette) -> str:
    """One completion, routed through the cassette per its mode."""
    if cassette.mode is CassetteMode.REPLAY:
        return cassette.lookup(provider, model, prompt)
    response = _call_live(provider, model, prompt)
    if cassette.mode is CassetteMode.RECORD:
        cassette.record(provider, model, prompt, response)
    return response
