"""Pipeline assembly and configuration.

Configuration layers, lowest to highest precedence: bundled defaults,
a JSON config file (--config or STATVIZ_CONFIG), environment variables
(STATVIZ_MODEL, STATVIZ_ASSETS, STATVIZ_EMBEDDINGS, STATVIZ_CLUSTERS,
STATVIZ_PORT, STATVIZ_WEIGHTS, STATVIZ_TEMPLATES), then CLI flags.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

from .analyzer import Tagger
from .assets import AssetLibrary
from .crf import TaggerModel
from .embeddings import load_embeddings
from .errors import ParseError
from .facts import FactGroup, segment_facts
from .features import load_clusters
from .render import SvgDocument, render
from .resources import data_path
from .synth import Candidate, RankingWeights, synthesize


@dataclass(frozen=True)
class Config:
    model_path: Path
    assets_dir: Path
    embeddings_path: Path
    clusters_path: Path | None = None
    templates_path: Path = Path("statviz_templates.jsonl")
    port: int = 8040
    weights: tuple[float, float, float] = (0.25, 0.5, 0.25)

    @classmethod
    def default(cls) -> "Config":
        return cls(
            model_path=data_path("model.txt"),
            assets_dir=data_path(),
            embeddings_path=data_path("embeddings_50d.txt"),
        )


_ENV_KEYS = {
    "STATVIZ_MODEL": "model_path",
    "STATVIZ_ASSETS": "assets_dir",
    "STATVIZ_EMBEDDINGS": "embeddings_path",
    "STATVIZ_CLUSTERS": "clusters_path",
    "STATVIZ_TEMPLATES": "templates_path",
}


def parse_weights(text: str) -> tuple[float, float, float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ParseError(f"weights must be 'ws,wv,wi', got {text!r}")
    ws, wv, wi = (float(p) for p in parts)
    return ws, wv, wi


def load_config(config_file: str | None = None, overrides: dict | None = None) -> Config:
    cfg = Config.default()

    path = config_file or os.environ.get("STATVIZ_CONFIG")
    if path:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"config file {path}: {exc}") from exc
        fields = {}
        for key in ("model_path", "assets_dir", "embeddings_path", "clusters_path", "templates_path"):
            if key in raw:
                fields[key] = Path(raw[key])
        if "port" in raw:
            fields["port"] = int(raw["port"])
        if "weights" in raw:
            fields["weights"] = tuple(float(w) for w in raw["weights"])
        cfg = replace(cfg, **fields)

    env_fields = {}
    for env, field in _ENV_KEYS.items():
        if os.environ.get(env):
            env_fields[field] = Path(os.environ[env])
    if os.environ.get("STATVIZ_PORT"):
        env_fields["port"] = int(os.environ["STATVIZ_PORT"])
    if os.environ.get("STATVIZ_WEIGHTS"):
        env_fields["weights"] = parse_weights(os.environ["STATVIZ_WEIGHTS"])
    if env_fields:
        cfg = replace(cfg, **env_fields)

    clean = {k: v for k, v in (overrides or {}).items() if v is not None}
    if clean:
        cfg = replace(cfg, **clean)
    return cfg


class Pipeline:
    """Loaded model + assets; the one object requests share."""

    def __init__(self, config: Config):
        self.config = config
        self.embeddings = load_embeddings(config.embeddings_path)
        self.tagger = Tagger(
            TaggerModel.load(config.model_path),
            self.embeddings,
            load_clusters(config.clusters_path) if config.clusters_path else None,
        )
        self.assets = AssetLibrary.load(config.assets_dir, self.embeddings)

    def weights(self, override: tuple[float, float, float] | None = None) -> RankingWeights:
        ws, wv, wi = override or self.config.weights
        return RankingWeights(ws, wv, wi)

    def parse(self, statement: str) -> FactGroup:
        return segment_facts(statement, self.tagger)

    def generate(
        self,
        statement: str,
        weights: tuple[float, float, float] | None = None,
        top_n: int | None = None,
    ) -> tuple[FactGroup, list[Candidate]]:
        group = self.parse(statement)
        ranked = synthesize(group, self.assets, self.weights(weights), top_n)
        return group, ranked

    def render(self, candidate: Candidate, seed: int = 0) -> SvgDocument:
        return render(candidate, self.assets, seed)
