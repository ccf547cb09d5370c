"""Provider-agnostic LLM gateway, prompt templates, and workflow engines."""
from .cassette import Cassette, CassetteMode, MissingCassetteEntryError, request_hash
from .providers import ProviderError, UnconfiguredError, complete
from .templates import (
    DEFAULT_BINDINGS,
    PromptTemplate,
    Role,
    UnboundPlaceholderError,
    render_prompt,
    template,
)

__all__ = [
    "Cassette",
    "CassetteMode",
    "MissingCassetteEntryError",
    "request_hash",
    "ProviderError",
    "UnconfiguredError",
    "complete",
    "DEFAULT_BINDINGS",
    "PromptTemplate",
    "Role",
    "UnboundPlaceholderError",
    "render_prompt",
    "template",
]
