"""On-disk certificate cache: one JSON file per (module, weights, kind)."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from . import __version__
from .algebra import ModuleSpec
from .search import ConstantCertificate, ConstantKind
from .weights import WeightConfig

log = logging.getLogger(__name__)

CACHE_ENV = "WZS_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "wzsconst"


def cache_key(module: ModuleSpec, cfg: WeightConfig, kind: ConstantKind) -> str:
    a = "-".join(str(v) for v in sorted(cfg.a_set))
    b = "none" if cfg.b_set is None else "-".join(str(v) for v in sorted(cfg.b_set))
    return f"{ConstantKind(kind).value}_m{module.modulus}_r{module.rank}_a{a}_b{b}"


class CertificateCache:
    def __init__(self, directory: Path | str | None = None, engine_version: str = __version__):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.engine_version = engine_version

    def path(self, module, cfg, kind) -> Path:
        return self.directory / (cache_key(module, cfg, kind) + ".json")

    def get(self, module, cfg, kind) -> Optional[ConstantCertificate]:
        p = self.path(module, cfg, kind)
        try:
            data = json.loads(p.read_text())
        except FileNotFoundError:
            return None
        except (OSError, ValueError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", p, exc)
            return None
        if data.get("engine_version") != self.engine_version:
            return None
        cert = ConstantCertificate.from_json(data)
        if (cert.module, cert.config, cert.kind) != (module, cfg, ConstantKind(kind)):
            log.warning("cache entry %s does not match its key", p)
            return None
        return cert

    def put(self, cert: ConstantCertificate) -> Path:
        """Write atomically (temp file + rename); only exhaustive results are stored."""
        p = self.path(cert.module, cert.config, cert.kind)
        if not cert.exhaustive:
            return p
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=p.stem, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(cert.to_json(), fh, indent=1)
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return p
