"""Metasearch merging: weighted Borda fuse over pluggable engine adapters.

Each component engine returns a ranked result list per query variant.
A list's Borda points (cap - rank + 1, within a top-``cap`` window) are
scaled by the weight of its (knowledge source, engine) pair, and the
per-URL totals define the fused order. The same machinery generates the
pseudo-relevance gold standard: fuse all six knowledge sources' expanded
queries across all engines and declare the top-k fused URLs relevant.

Engines are behind the EngineAdapter interface; the fixture adapter reads
recorded SERP files so entire runs are reproducible offline.
"""

from __future__ import annotations

import hashlib
import json
import urllib.parse
from dataclasses import dataclass, field
from pathlib import Path

import requests

from .expand import KNOWLEDGE_SOURCES, ExpansionResult, RankedTermList, rewrite

__all__ = [
    "FusionError",
    "EngineError",
    "EngineConfig",
    "KnowledgeWeights",
    "SearchHit",
    "ResultList",
    "FusedList",
    "MseResult",
    "normalize_url",
    "engine_weight",
    "wbf_merge",
    "run_mse",
    "gold_variants",
    "meta_prf_gold",
    "EngineAdapter",
    "FixtureEngineAdapter",
    "HttpEngineAdapter",
    "serp_fixture_name",
    "DEFAULT_ENGINES",
    "SIX_SOURCE_WEIGHTS",
    "GRAPH_TUNED_WEIGHTS",
]


class FusionError(Exception):
    """No usable result lists could be collected."""


class EngineError(Exception):
    """A single engine adapter failed for one query."""


def normalize_url(url: str) -> str:
    """Canonical URL for cross-engine dedup.

    Lowercases scheme and host, strips default ports and fragments, keeps
    path and query string untouched. Idempotent.
    """
    parts = urllib.parse.urlsplit(url.strip())
    scheme = parts.scheme.lower()
    host = parts.hostname.lower() if parts.hostname else ""
    netloc = host
    if parts.port is not None:
        default = {"http": 80, "https": 443}.get(scheme)
        if parts.port != default:
            netloc = f"{host}:{parts.port}"
    if parts.username:
        cred = parts.username + (f":{parts.password}" if parts.password else "")
        netloc = f"{cred}@{netloc}"
    return urllib.parse.urlunsplit((scheme, netloc, parts.path, parts.query, ""))


@dataclass(frozen=True)
class EngineConfig:
    engine_id: str
    confidence: int

    def __post_init__(self):
        if self.confidence <= 0:
            raise ValueError(f"engine confidence must be > 0, got {self.confidence}")


@dataclass(frozen=True)
class KnowledgeWeights:
    """Per-source weights used when fusing expanded-query result lists."""

    degree: int = 0
    closeness: int = 0
    pagerank: int = 0
    wordnet: int = 0
    wikisynonyms: int = 0
    moby: int = 0

    def __post_init__(self):
        values = self.as_map().values()
        if any(w < 0 for w in values):
            raise ValueError("knowledge weights must be >= 0")
        if not any(values):
            raise ValueError("at least one knowledge weight must be > 0")

    def as_map(self) -> dict[str, int]:
        return {source: getattr(self, source) for source in KNOWLEDGE_SOURCES}


# Reference set-ups: the five fixture engine ids with their confidence
# values, the six-source weight split, and the graph-only tuned triple.
DEFAULT_ENGINES = [
    EngineConfig("google", 30),
    EngineConfig("lycos", 25),
    EngineConfig("bing", 20),
    EngineConfig("ask", 15),
    EngineConfig("exalead", 10),
]
SIX_SOURCE_WEIGHTS = KnowledgeWeights(
    degree=30, closeness=20, pagerank=20, wordnet=10, wikisynonyms=10, moby=10
)
GRAPH_TUNED_WEIGHTS = KnowledgeWeights(degree=20, closeness=30, pagerank=20)


@dataclass(frozen=True)
class SearchHit:
    rank: int
    url: str
    title: str = ""


@dataclass
class ResultList:
    """One engine's ranked results for one query.

    Ranks must be contiguous from 1 and URLs unique after normalization;
    use ``from_raw`` to build a valid list from arbitrary SERP rows.
    """

    engine: str
    query: str
    entries: list[SearchHit]

    def __post_init__(self):
        seen = set()
        for i, hit in enumerate(self.entries, start=1):
            if hit.rank != i:
                raise ValueError(f"ranks must be contiguous from 1 (position {i} has rank {hit.rank})")
            if hit.url in seen:
                raise ValueError(f"duplicate URL in result list: {hit.url}")
            seen.add(hit.url)

    @classmethod
    def from_raw(cls, engine: str, query: str, rows: list[tuple[str, str]]) -> "ResultList":
        """Build from (url, title) rows: normalize, dedup keeping the first
        occurrence, renumber ranks."""
        entries = []
        seen = set()
        for url, title in rows:
            norm = normalize_url(url)
            if norm in seen:
                continue
            seen.add(norm)
            entries.append(SearchHit(rank=len(entries) + 1, url=norm, title=title))
        return cls(engine=engine, query=query, entries=entries)


@dataclass
class FusedList:
    """Merged ranking: (url, fused score) sorted by score descending."""

    entries: list[tuple[str, float]]
    contributing_lists: int = 0

    def urls(self) -> list[str]:
        return [url for url, _ in self.entries]

    def to_csv(self) -> str:
        lines = ["rank,url,score"]
        for rank, (url, score) in enumerate(self.entries, start=1):
            lines.append(f"{rank},{url},{score:.12g}")
        return "\n".join(lines) + "\n"


def engine_weight(w_source: float, se_conf: int) -> float:
    """Weight of one (knowledge source, engine) pair: w_source * conf / 100."""
    if w_source < 0 or se_conf < 0:
        raise ValueError("weights and confidences must be >= 0")
    return w_source * se_conf / 100


def wbf_merge(lists: list[tuple[ResultList, float]], cap: int = 200) -> FusedList:
    """Weighted Borda fuse of result lists.

    Every list is truncated to its top ``cap`` entries; a URL at rank r
    earns weight * (cap - r + 1) points from that list and nothing from
    lists it is absent from. Ties in the fused total break on the URL.
    """
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap}")
    scores: dict[str, float] = {}
    contributing = 0
    for result_list, weight in lists:
        if weight < 0:
            raise ValueError("list weight must be >= 0")
        window = result_list.entries[:cap]
        if window:
            contributing += 1
        for hit in window:
            scores[hit.url] = scores.get(hit.url, 0.0) + weight * (cap - hit.rank + 1)
    ordered = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    return FusedList(entries=ordered, contributing_lists=contributing)


# ---------------------------------------------------------------------------
# engine adapters
# ---------------------------------------------------------------------------

class EngineAdapter:
    """Fetch a ranked result list from one engine for one query."""

    def search(self, engine_id: str, query: str, limit: int) -> ResultList:
        raise NotImplementedError


def serp_fixture_name(engine_id: str, query: str) -> str:
    """Fixture filename for an (engine, query) pair: the query is hashed so
    arbitrary query strings stay filesystem-safe."""
    digest = hashlib.sha256(query.encode("utf-8")).hexdigest()[:16]
    return f"{engine_id}__{digest}.json"


class FixtureEngineAdapter(EngineAdapter):
    """Reads recorded SERP JSON files from a directory.

    One file per (engine, query) pair, named by ``serp_fixture_name``:
    ``{"engine": ..., "query": ..., "results": [{"rank": 1, "url": ...,
    "title": ...}, ...]}``.
    """

    def __init__(self, fixture_dir: str | Path):
        self.fixture_dir = Path(fixture_dir)

    def search(self, engine_id: str, query: str, limit: int) -> ResultList:
        path = self.fixture_dir / serp_fixture_name(engine_id, query)
        if not path.exists():
            raise EngineError(f"no SERP fixture for engine {engine_id!r}, query {query!r} ({path.name})")
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            rows = [(r["url"], r.get("title", "")) for r in payload["results"][:limit]]
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise EngineError(f"malformed SERP fixture {path.name}: {exc}") from exc
        return ResultList.from_raw(engine_id, query, rows)


class HttpEngineAdapter(EngineAdapter):
    """Generic JSON web-search endpoint client.

    Configured with the endpoint URL, the query/count parameter names and
    the response keys holding the result rows, so any engine with a JSON
    API can be plugged in. ``transport`` is injectable for tests.
    """

    def __init__(
        self,
        endpoint: str,
        api_key: str | None = None,
        query_param: str = "q",
        count_param: str | None = "count",
        results_key: str = "results",
        url_key: str = "url",
        title_key: str = "title",
        timeout: float = 10.0,
        transport=None,
    ):
        self.endpoint = endpoint
        self.api_key = api_key
        self.query_param = query_param
        self.count_param = count_param
        self.results_key = results_key
        self.url_key = url_key
        self.title_key = title_key
        self.timeout = timeout
        self._transport = transport or self._http_get

    def _http_get(self, params: dict, headers: dict) -> dict:
        response = requests.get(self.endpoint, params=params, headers=headers, timeout=self.timeout)
        response.raise_for_status()
        return response.json()

    def search(self, engine_id: str, query: str, limit: int) -> ResultList:
        params = {self.query_param: query}
        if self.count_param:
            params[self.count_param] = limit
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            payload = self._transport(params, headers)
            rows = [
                (row[self.url_key], row.get(self.title_key, ""))
                for row in payload[self.results_key][:limit]
            ]
        except Exception as exc:
            raise EngineError(f"engine {engine_id!r} query failed: {exc}") from exc
        return ResultList.from_raw(engine_id, query, rows)


# ---------------------------------------------------------------------------
# metasearch runs
# ---------------------------------------------------------------------------

@dataclass
class MseResult:
    fused: FusedList
    failures: list[str] = field(default_factory=list)


def run_mse(
    adapter: EngineAdapter,
    query_variants: dict[str, str],
    engines: list[EngineConfig],
    weights: KnowledgeWeights,
    cap: int = 200,
) -> MseResult:
    """Fetch every weighted source's expanded query on every engine and fuse.

    A failing fetch excludes just that list and is reported in
    ``failures``; if nothing at all could be fetched the run errors out.
    """
    weight_map = weights.as_map()
    active = [s for s in KNOWLEDGE_SOURCES if weight_map[s] > 0]
    missing = [s for s in active if s not in query_variants]
    if missing:
        raise FusionError(f"no query variant for weighted source(s): {', '.join(missing)}")
    if not engines:
        raise FusionError("no engines configured")

    collected: list[tuple[ResultList, float]] = []
    failures: list[str] = []
    for engine in engines:
        for source in active:
            try:
                result = adapter.search(engine.engine_id, query_variants[source], cap)
            except EngineError as exc:
                failures.append(f"{engine.engine_id}/{source}: {exc}")
                continue
            collected.append((result, engine_weight(weight_map[source], engine.confidence)))
    if not collected:
        raise FusionError(f"every engine fetch failed: {'; '.join(failures)}")
    return MseResult(fused=wbf_merge(collected, cap=cap), failures=failures)


def gold_variants(
    user_query: str, all_sources: list[RankedTermList], m: int = 10
) -> dict[str, str]:
    """One rewritten query per knowledge source, using its top-m terms."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    variants = {}
    for source_list in all_sources:
        expansion = ExpansionResult(user_query=user_query, qe_terms=source_list.terms[:m])
        variants[source_list.source] = rewrite(user_query, expansion)
    return variants


def meta_prf_gold(
    adapter: EngineAdapter,
    user_query: str,
    all_sources: list[RankedTermList],
    engines: list[EngineConfig],
    weights: KnowledgeWeights,
    k: int,
    m: int = 10,
    cap: int = 200,
) -> list[str]:
    """Pseudo-relevance gold standard via metasearch fusion.

    Rewrites the query once per knowledge source using that source's top-m
    candidate terms, fuses all (source x engine) result lists, and returns
    the top-k fused URLs as the assumed-relevant set.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    variants = gold_variants(user_query, all_sources, m)
    outcome = run_mse(adapter, variants, engines, weights, cap=cap)
    return outcome.fused.urls()[:k]
