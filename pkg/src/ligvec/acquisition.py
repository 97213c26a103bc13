"""Optional client for the interaction-acquisition workflow: structural
domain id -> protein accession -> interacting ligands with canonical
SMILES.

The HTTP layer is an injected transport (url, timeout) -> bytes so the
module never hard-depends on the network; responses are cached verbatim
on disk, keyed by query, and served from cache on repeat calls.

Wire formats:
  mapping service   GET {mapping_url}/{domain_id}
                    -> {"<domain_id>": ["ACCESSION", ...]}
  activity service  GET {activity_url}/{accession}?offset=0
                    -> {"activities": [{"molecule_chembl_id": ...,
                                        "canonical_smiles": ...}, ...],
                        "page_meta": {"next": "<url>" | null}}
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .corpus_io import LigandRecord

logger = logging.getLogger(__name__)

Transport = Callable[[str, float], bytes]

ENV_MAPPING_URL = "LIGVEC_MAPPING_URL"
ENV_ACTIVITY_URL = "LIGVEC_ACTIVITY_URL"
ENV_CACHE_DIR = "LIGVEC_CACHE_DIR"


class AccessionNotFoundError(LookupError):
    """The mapping service knows no accession for the domain id."""


class AcquisitionError(RuntimeError):
    """Transport failed after all retries."""


@dataclass(frozen=True)
class AcquisitionConfig:
    mapping_url: str
    activity_url: str
    cache_dir: Path
    timeout: float = 10.0
    retries: int = 2

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError(f"timeout must be > 0, got {self.timeout}")
        if self.retries < 0:
            raise ValueError(f"retries must be >= 0, got {self.retries}")
        object.__setattr__(self, "cache_dir", Path(self.cache_dir))

    @classmethod
    def from_env(cls, **overrides) -> "AcquisitionConfig":
        settings = {
            "mapping_url": os.environ.get(ENV_MAPPING_URL, ""),
            "activity_url": os.environ.get(ENV_ACTIVITY_URL, ""),
            "cache_dir": Path(os.environ.get(ENV_CACHE_DIR, ".ligvec_cache")),
        }
        settings.update(overrides)
        return cls(**settings)


def http_transport(url: str, timeout: float) -> bytes:
    """Default transport backed by requests; raises on HTTP errors."""
    import requests

    response = requests.get(url, timeout=timeout)
    response.raise_for_status()
    return response.content


def _atomic_write(path: Path, body: bytes) -> None:
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_bytes(body)
    os.replace(tmp, path)


def _cached_request(
    config: AcquisitionConfig, transport: Transport, url: str, cache_name: str, subject: str
) -> bytes:
    """Return the cached body for cache_name, fetching and caching it on a
    miss; transport errors are retried config.retries times."""
    cache_path = config.cache_dir / cache_name
    if cache_path.exists():
        return cache_path.read_bytes()
    last_error: Exception | None = None
    for _ in range(config.retries + 1):
        try:
            body = transport(url, config.timeout)
            break
        except Exception as exc:  # transport contract: any raise is retryable
            last_error = exc
    else:
        raise AcquisitionError(
            f"{subject}: transport failed after {config.retries + 1} attempts: {last_error}"
        ) from last_error
    config.cache_dir.mkdir(parents=True, exist_ok=True)
    _atomic_write(cache_path, body)
    return body


def resolve_accession(
    domain_id: str, config: AcquisitionConfig, transport: Transport | None = None
) -> str:
    """First accession the mapping service returns for a domain id."""
    transport = transport or http_transport
    url = f"{config.mapping_url.rstrip('/')}/{domain_id}"
    body = _cached_request(config, transport, url, f"map_{domain_id}.json", f"domain {domain_id!r}")
    mapping = json.loads(body)
    accessions = mapping.get(domain_id) or []
    if not accessions:
        raise AccessionNotFoundError(f"no accession found for domain {domain_id!r}")
    return accessions[0]


def fetch_ligands(
    accession: str, config: AcquisitionConfig, transport: Transport | None = None
) -> list[LigandRecord]:
    """All interacting ligands for an accession, across all activity pages.

    Records are deduplicated by ligand id (first SMILES wins); records
    without a SMILES are dropped and counted in a single warning.
    """
    transport = transport or http_transport
    records: dict[str, LigandRecord] = {}
    dropped = 0
    url: str | None = f"{config.activity_url.rstrip('/')}/{accession}?offset=0"
    page = 0
    while url:
        body = _cached_request(
            config, transport, url, f"activities_{accession}_page{page}.json", f"accession {accession!r}"
        )
        payload = json.loads(body)
        for activity in payload.get("activities", []):
            ligand_id = activity.get("molecule_chembl_id")
            smiles = activity.get("canonical_smiles")
            if not smiles:
                dropped += 1
                continue
            if ligand_id not in records:
                records[ligand_id] = LigandRecord(ligand_id, smiles)
        url = (payload.get("page_meta") or {}).get("next")
        page += 1
    if dropped:
        logger.warning("accession %s: dropped %d activity records without SMILES", accession, dropped)
    return list(records.values())
