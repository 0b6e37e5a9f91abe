"""Gateway to the three generation steps: questions, answer phrases, answers.

Each step is served either by a remote HTTP backend speaking the fixed JSON
wire protocol or, when no URL is configured, by a built-in deterministic
stub. Stub outputs are pure functions of their inputs so end-to-end runs are
reproducible offline.
"""

from __future__ import annotations

import string
import time
from dataclasses import dataclass

import requests

from .chunker import segment_sentences
from .ranker import content_token_list

DEFAULT_QUESTION_CAP = 5
DEFAULT_TIMEOUT_MS = 10_000
DEFAULT_MAX_RETRIES = 2
MAX_RETRY_LIMIT = 10
RETRY_BASE_DELAY_SECONDS = 0.2

# Version 1 stub question template; changing it changes every stub output.
QUESTION_TEMPLATE_V1 = "What does the passage state about {anchor}?"
ANSWER_PHRASE_TOKEN_LIMIT = 6

_TERMINALS = (".", "!", "?")


class GatewayError(Exception):
    """Base class for backend-related failures."""


class BackendUnavailable(GatewayError):
    """All attempts against a backend endpoint failed."""


class RequestRejected(GatewayError):
    """The backend rejected the request as invalid (non-retryable)."""


class EmptyGeneration(GatewayError):
    """A generation step produced nothing usable."""


@dataclass(frozen=True)
class BackendEndpointSet:
    """Endpoint URLs for the four model steps; an absent URL selects the stub."""

    domain_url: str | None = None
    questions_url: str | None = None
    answer_phrase_url: str | None = None
    complete_answer_url: str | None = None
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    max_retries: int = DEFAULT_MAX_RETRIES

    def __post_init__(self) -> None:
        if self.timeout_ms < 1:
            raise ValueError(f"timeout_ms must be >= 1, got {self.timeout_ms}")
        if not 0 <= self.max_retries <= MAX_RETRY_LIMIT:
            raise ValueError(
                f"max_retries must be in 0..{MAX_RETRY_LIMIT}, got {self.max_retries}"
            )


@dataclass(frozen=True)
class GeneratedQuestion:
    """A question generated for one chunk; (chunk_index, q_index) is unique."""

    chunk_index: int
    q_index: int
    text: str

    def __post_init__(self) -> None:
        if not self.text or not self.text.endswith("?"):
            raise ValueError(f"question text must end with '?': {self.text!r}")


@dataclass(frozen=True)
class AnswerPhrase:
    """The keyword or keyphrase answering a question."""

    text: str

    def __post_init__(self) -> None:
        if not self.text or self.text != self.text.strip():
            raise ValueError(f"answer phrase must be non-empty and trimmed: {self.text!r}")


@dataclass(frozen=True)
class CompletedAnswer:
    """A full-sentence, readable answer."""

    text: str

    def __post_init__(self) -> None:
        if not self.text or not self.text.endswith(_TERMINALS):
            raise ValueError(
                f"completed answer must end with terminal punctuation: {self.text!r}"
            )


def post_json(url: str, payload: dict, endpoints: BackendEndpointSet) -> dict:
    """POST *payload* as JSON, retrying transient failures with backoff.

    Connection errors, timeouts, 5xx responses and unparseable bodies are
    retried up to ``max_retries`` extra times; other non-200 statuses raise
    :class:`RequestRejected` immediately.
    """
    attempts = endpoints.max_retries + 1
    delay = RETRY_BASE_DELAY_SECONDS
    last_error: Exception | None = None
    for attempt in range(attempts):
        if attempt:
            time.sleep(delay)
            delay *= 2
        try:
            response = requests.post(
                url, json=payload, timeout=endpoints.timeout_ms / 1000.0
            )
        except requests.RequestException as exc:
            last_error = exc
            continue
        if response.status_code >= 500:
            last_error = RuntimeError(f"HTTP {response.status_code}")
            continue
        if response.status_code != 200:
            try:
                detail = response.json().get("error", "")
            except ValueError:
                detail = response.text[:200]
            raise RequestRejected(
                f"{url} rejected request: HTTP {response.status_code} {detail}".rstrip()
            )
        try:
            body = response.json()
        except ValueError as exc:
            last_error = exc
            continue
        if not isinstance(body, dict):
            last_error = RuntimeError("response body is not a JSON object")
            continue
        return body
    raise BackendUnavailable(f"{url} unavailable after {attempts} attempt(s): {last_error}")


def remote_domain(context: str, endpoints: BackendEndpointSet) -> str:
    """Fetch the raw domain label from the remote classifier."""
    body = post_json(endpoints.domain_url, {"context": context}, endpoints)
    label = body.get("domain")
    if not isinstance(label, str):
        raise BackendUnavailable(f"{endpoints.domain_url} returned malformed domain body")
    return label


# ---------------------------------------------------------------------------
# Deterministic stub logic (shared by the in-process path and the stub server)
# ---------------------------------------------------------------------------


def _plain_tokens(text: str) -> list[str]:
    # content_token_list minus the stopword filter; last-resort tokens only
    tokens = []
    for raw in text.split():
        token = raw.strip(string.punctuation).lower()
        if token:
            tokens.append(token)
    return tokens


def _anchor_token(question_text: str) -> str | None:
    tokens = content_token_list(question_text)
    return tokens[-1] if tokens else None


def _select_sentence(context: str, question_text: str) -> str:
    """The first context sentence containing the question's anchor token,
    or the first sentence when nothing matches."""
    sentences = segment_sentences(context)
    if not sentences:
        raise EmptyGeneration("context has no sentences")
    anchor = _anchor_token(question_text)
    if anchor is not None:
        for sentence in sentences:
            if anchor in content_token_list(sentence.text):
                return sentence.text
    return sentences[0].text


def stub_question_texts(context: str, cap: int) -> list[str]:
    """One templated question per content-bearing sentence among the first *cap*."""
    texts: list[str] = []
    for sentence in segment_sentences(context)[:cap]:
        tokens = content_token_list(sentence.text)
        if not tokens:
            continue
        texts.append(QUESTION_TEMPLATE_V1.format(anchor=tokens[0]))
    return texts


def stub_answer_phrase(context: str, question_text: str) -> str:
    """First six content tokens of the sentence matching the question's anchor."""
    sentence = _select_sentence(context, question_text)
    tokens = content_token_list(sentence)[:ANSWER_PHRASE_TOKEN_LIMIT]
    if not tokens:
        # stopword-only sentence: fall back to its plain tokens
        tokens = _plain_tokens(sentence)[:ANSWER_PHRASE_TOKEN_LIMIT]
    if not tokens:
        raise EmptyGeneration(f"no usable tokens in sentence {sentence!r}")
    return " ".join(tokens)


def stub_complete_answer(context: str, question_text: str) -> str:
    """The full source sentence the phrase was drawn from, punctuation ensured."""
    sentence = _select_sentence(context, question_text)
    if not sentence.endswith(_TERMINALS):
        sentence += "."
    return sentence


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def generate_questions(
    context: str,
    domain: str,
    chunk_index: int,
    cap: int = DEFAULT_QUESTION_CAP,
    endpoints: BackendEndpointSet | None = None,
) -> list[GeneratedQuestion]:
    """Generate up to *cap* questions for *context*, conditioned on *domain*.

    Remote path: POST to the questions endpoint, then trim, truncate to
    *cap* and drop exact-duplicate texts keeping the first occurrence.
    Raises :class:`EmptyGeneration` when a backend returns zero questions.
    """
    if not context.strip():
        raise ValueError("context must be non-empty")
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    endpoints = endpoints or BackendEndpointSet()
    if endpoints.questions_url:
        body = post_json(
            endpoints.questions_url,
            {"context": context, "domain": domain, "cap": cap},
            endpoints,
        )
        raw = body.get("questions")
        if not isinstance(raw, list) or not all(isinstance(q, str) for q in raw):
            raise BackendUnavailable(
                f"{endpoints.questions_url} returned malformed questions body"
            )
        texts = [q.strip() for q in raw if q.strip()][:cap]
        seen: set[str] = set()
        deduped = []
        for text in texts:
            if text not in seen:
                seen.add(text)
                deduped.append(text)
        texts = [t if t.endswith("?") else t + "?" for t in deduped]
        if not texts:
            raise EmptyGeneration(f"{endpoints.questions_url} returned zero questions")
    else:
        texts = stub_question_texts(context, cap)
    return [
        GeneratedQuestion(chunk_index=chunk_index, q_index=index, text=text)
        for index, text in enumerate(texts)
    ]


def extract_answer_phrase(
    context: str,
    question: GeneratedQuestion,
    endpoints: BackendEndpointSet | None = None,
) -> AnswerPhrase:
    """Extract the keyword/keyphrase answering *question* from *context*."""
    if not context.strip():
        raise ValueError("context must be non-empty")
    endpoints = endpoints or BackendEndpointSet()
    if endpoints.answer_phrase_url:
        body = post_json(
            endpoints.answer_phrase_url,
            {"context": context, "question": question.text},
            endpoints,
        )
        raw = body.get("answer_phrase")
        if not isinstance(raw, str):
            raise BackendUnavailable(
                f"{endpoints.answer_phrase_url} returned malformed answer_phrase body"
            )
        text = raw.strip()
        if not text:
            raise EmptyGeneration(f"{endpoints.answer_phrase_url} returned blank phrase")
    else:
        text = stub_answer_phrase(context, question.text)
    return AnswerPhrase(text=text)


def complete_answer(
    context: str,
    question: GeneratedQuestion,
    phrase: AnswerPhrase,
    endpoints: BackendEndpointSet | None = None,
) -> CompletedAnswer:
    """Elaborate *phrase* into a complete, readable answer sentence."""
    if not phrase.text:
        raise ValueError("phrase must be non-empty")
    endpoints = endpoints or BackendEndpointSet()
    if endpoints.complete_answer_url:
        body = post_json(
            endpoints.complete_answer_url,
            {"context": context, "question": question.text, "answer_phrase": phrase.text},
            endpoints,
        )
        raw = body.get("answer")
        if not isinstance(raw, str):
            raise BackendUnavailable(
                f"{endpoints.complete_answer_url} returned malformed answer body"
            )
        text = raw.strip()
        if not text:
            raise EmptyGeneration(f"{endpoints.complete_answer_url} returned blank answer")
        if not text.endswith(_TERMINALS):
            text += "."
    else:
        text = stub_complete_answer(context, question.text)
    return CompletedAnswer(text=text)
