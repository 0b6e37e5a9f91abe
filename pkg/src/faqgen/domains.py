"""The closed set of content domains and the keyword-lexicon classifier.

Classification routes to a remote backend when one is configured, otherwise
it falls back to counting lexicon term hits per domain, which keeps the whole
pipeline runnable offline.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping

if TYPE_CHECKING:
    from .gateway import BackendEndpointSet

# Canonical (alphabetical) order; ties in classification break toward the
# earlier entry.
DOMAINS: tuple[str, ...] = (
    "Arts and Culture",
    "Business and Entrepreneurs",
    "Celebrity and Fashion",
    "Diaries and Daily Life",
    "Family and Relationships",
    "Film, TV and Video",
    "Fitness and Health",
    "Food and Dining",
    "Gaming",
    "Learning and Educational",
    "Literature",
    "Music",
    "News and Social Concern",
    "Science and Technology",
    "Sports",
    "Travel and Adventure",
    "Youth and Student Life",
)

# Fallback when no lexicon term matches at all: the generic, non-technical
# domain.
GENERIC_DOMAIN = "News and Social Concern"

MIN_TERMS_PER_DOMAIN = 10

_DEFAULT_LEXICON_RESOURCE = "lexicon_v1.txt"


class EmptyContext(ValueError):
    """Classification was asked for blank input."""


class InvalidDomain(ValueError):
    """A domain label outside the closed set was encountered."""


class LexiconFormatError(ValueError):
    """A lexicon file failed to parse or violated the lexicon invariants."""


@dataclass(frozen=True)
class DomainLexicon:
    """Per-domain keyword terms used by the fallback classifier."""

    entries: Mapping[str, frozenset[str]]
    version: str

    def __post_init__(self) -> None:
        missing = [domain for domain in DOMAINS if domain not in self.entries]
        if missing:
            raise LexiconFormatError(f"lexicon missing domains: {missing}")
        unknown = [domain for domain in self.entries if domain not in DOMAINS]
        if unknown:
            raise LexiconFormatError(f"lexicon has unknown domains: {unknown}")
        for domain, terms in self.entries.items():
            if len(terms) < MIN_TERMS_PER_DOMAIN:
                raise LexiconFormatError(
                    f"domain {domain!r} has {len(terms)} terms, "
                    f"needs >= {MIN_TERMS_PER_DOMAIN}"
                )
            for term in terms:
                if not term or term != term.lower() or any(c.isspace() for c in term):
                    raise LexiconFormatError(
                        f"domain {domain!r} has invalid term {term!r}"
                    )


def list_domains() -> list[str]:
    """All 17 domain labels in canonical order."""
    return list(DOMAINS)


def parse_domain(name: str) -> str:
    """Validate *name* against the closed set and return it."""
    if name not in DOMAINS:
        raise InvalidDomain(f"not a known domain: {name!r}")
    return name


def _parse_lexicon_lines(lines: Iterable[str], version: str) -> DomainLexicon:
    entries: dict[str, set[str]] = {domain: set() for domain in DOMAINS}
    for number, raw_line in enumerate(lines, start=1):
        line = raw_line.rstrip("\n")
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise LexiconFormatError(f"line {number}: expected '<domain>\\t<term>'")
        domain, term = fields
        if domain not in DOMAINS:
            raise LexiconFormatError(f"line {number}: unknown domain {domain!r}")
        entries[domain].add(term)
    return DomainLexicon(
        entries={domain: frozenset(terms) for domain, terms in entries.items()},
        version=version,
    )


def load_lexicon(path: str | Path, version: str | None = None) -> DomainLexicon:
    """Load a tab-separated ``<domain>\\t<term>`` lexicon file."""
    file_path = Path(path)
    with open(file_path, encoding="utf-8") as fh:
        return _parse_lexicon_lines(fh, version or file_path.stem)


@lru_cache(maxsize=1)
def default_lexicon() -> DomainLexicon:
    """The lexicon shipped with the package."""
    resource = resources.files("faqgen").joinpath("data", _DEFAULT_LEXICON_RESOURCE)
    with resource.open("r", encoding="utf-8") as fh:
        return _parse_lexicon_lines(fh, Path(_DEFAULT_LEXICON_RESOURCE).stem)


def _tokenize(text: str) -> list[str]:
    tokens = []
    for raw in text.split():
        token = raw.strip(string.punctuation).lower()
        if token:
            tokens.append(token)
    return tokens


def lexicon_hits(context: str, lexicon: DomainLexicon) -> dict[str, int]:
    """Token-occurrence hit count per domain for *context*."""
    hits = {domain: 0 for domain in DOMAINS}
    for token in _tokenize(context):
        for domain in DOMAINS:
            if token in lexicon.entries[domain]:
                hits[domain] += 1
    return hits


def classify(
    context: str,
    lexicon: DomainLexicon | None = None,
    endpoints: BackendEndpointSet | None = None,
) -> str:
    """Assign *context* one of the 17 domains.

    With a configured remote domain endpoint the backend's answer is used
    (validated against the closed set). Otherwise the lexicon argmax wins,
    ties breaking by canonical order, and a context hitting no term at all
    lands in the generic domain.
    """
    if not context or not context.strip():
        raise EmptyContext("cannot classify blank context")
    if endpoints is not None and endpoints.domain_url:
        from . import gateway

        return parse_domain(gateway.remote_domain(context, endpoints))
    lexicon = lexicon or default_lexicon()
    hits = lexicon_hits(context, lexicon)
    best_domain = GENERIC_DOMAIN
    best_hits = 0
    for domain in DOMAINS:
        if hits[domain] > best_hits:
            best_domain = domain
            best_hits = hits[domain]
    return best_domain
