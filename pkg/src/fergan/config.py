"""Configuration dataclasses, YAML loading, and content digests.

A single YAML document configures the whole pipeline; each section maps to
one dataclass here. Command-line flags override individual keys. Every
config object validates itself before anything runs.
"""

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError

ADVERSARIAL_OBJECTIVES = ("saturating", "least-squares", "gradient-penalty")
OPTIMIZERS = ("adam", "sgd")
IDENTITY_SOURCE_KINDS = ("procedural", "corpus-sampler", "generative-model")


def config_digest(obj) -> str:
    """Stable content hash of a config (dataclass or plain dict)."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = dataclasses.asdict(obj)
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


@dataclass
class GanTrainConfig:
    """Hyperparameters of the expression translator and its training run.

    None of these values are prescribed by the problem; they are tunable
    choices with small-scale-friendly defaults (see README).
    """

    image_size: int = 64
    channels: int = 1
    latent_dim: int = 16
    steps: int = 2000
    batch_size: int = 16
    conv_dim: int = 16
    n_res_blocks: int = 2
    n_downsample: int = 2
    lr_generator: float = 1e-4
    lr_discriminator: float = 1e-4
    weight_adversarial: float = 1.0
    weight_classification: float = 1.0
    weight_reconstruction: float = 10.0
    adversarial_objective: str = "least-squares"
    n_critic: int = 1
    gradient_penalty_weight: float = 10.0
    identity_init: bool = False
    seed: int = 0

    def validate(self) -> "GanTrainConfig":
        _require(self.image_size >= 32 and (self.image_size & (self.image_size - 1)) == 0,
                 f"gan.image_size must be a power of two >= 32, got {self.image_size}")
        _require(self.channels in (1, 3), f"gan.channels must be 1 or 3, got {self.channels}")
        for name in ("latent_dim", "batch_size", "conv_dim", "n_critic"):
            _require(getattr(self, name) > 0, f"gan.{name} must be positive")
        _require(self.steps >= 0, "gan.steps must be nonnegative")
        _require(self.n_res_blocks >= 0, "gan.n_res_blocks must be nonnegative")
        _require(self.n_downsample >= 1, "gan.n_downsample must be >= 1")
        _require(self.lr_generator > 0 and self.lr_discriminator > 0,
                 "gan learning rates must be positive")
        for name in ("weight_adversarial", "weight_classification", "weight_reconstruction",
                     "gradient_penalty_weight"):
            _require(getattr(self, name) >= 0, f"gan.{name} must be nonnegative")
        _require(self.adversarial_objective in ADVERSARIAL_OBJECTIVES,
                 f"gan.adversarial_objective must be one of {ADVERSARIAL_OBJECTIVES}")
        _require(self.seed >= 0, "gan.seed must be nonnegative")
        return self

    def digest(self) -> str:
        return config_digest(self)


@dataclass
class FitConfig:
    """Classifier training hyperparameters (the problem prescribes none)."""

    epochs: int = 100
    batch_size: int = 64
    learning_rate: float = 1e-3
    optimizer: str = "adam"
    seed: int = 0
    patience: int | None = 15
    deterministic: bool = True

    def validate(self) -> "FitConfig":
        _require(self.epochs >= 0, "fit.epochs must be nonnegative")
        _require(self.batch_size > 0, "fit.batch_size must be positive")
        _require(self.learning_rate > 0, "fit.learning_rate must be positive")
        _require(self.optimizer in OPTIMIZERS, f"fit.optimizer must be one of {OPTIMIZERS}")
        _require(self.patience is None or self.patience > 0,
                 "fit.patience must be positive or null")
        _require(self.seed >= 0, "fit.seed must be nonnegative")
        return self


@dataclass
class SplitSpec:
    """Identity-level train/val/test split request.

    Each field is an int identity count, a float fraction of identities
    (rounded half-up), or "rest" (at most one field) absorbing whatever
    remains. The resolved counts must exactly cover the identity set.
    """

    train: int | float | str = "rest"
    val: int | float | str = 0
    test: int | float | str = 0
    seed: int = 0

    def validate(self) -> "SplitSpec":
        rest_fields = 0
        for name in ("train", "val", "test"):
            value = getattr(self, name)
            if isinstance(value, str):
                _require(value == "rest", f"split.{name} must be a count, fraction, or 'rest'")
                rest_fields += 1
            elif isinstance(value, bool):
                raise ConfigError(f"split.{name} must be numeric")
            elif isinstance(value, float):
                _require(0.0 <= value <= 1.0, f"split.{name} fraction must lie in [0, 1]")
            else:
                _require(int(value) >= 0, f"split.{name} count must be nonnegative")
        _require(rest_fields <= 1, "at most one split field may be 'rest'")
        _require(self.seed >= 0, "split.seed must be nonnegative")
        return self


@dataclass
class PreprocessConfig:
    """Face-chip preprocessing: crop, grayscale, resize to size x size x 1."""

    size: int = 64
    crop_fraction: float = 0.8

    def validate(self) -> "PreprocessConfig":
        _require(self.size > 0, "preprocess.size must be positive")
        _require(0.0 < self.crop_fraction <= 1.0,
                 "preprocess.crop_fraction must lie in (0, 1]")
        return self


@dataclass
class ClassifierSpecConfig:
    """Overridable classifier architecture knobs; defaults are the stock net."""

    kernel_size: int = 3
    input_size: int = 64
    conv_channels: tuple = (32, 64, 128, 128)
    dense_units: int = 1024

    def validate(self) -> "ClassifierSpecConfig":
        _require(self.kernel_size > 0 and self.kernel_size % 2 == 1,
                 "classifier.kernel_size must be odd and positive")
        _require(self.input_size > 0 and self.input_size % 8 == 0,
                 "classifier.input_size must be a positive multiple of 8")
        _require(len(tuple(self.conv_channels)) == 4 and all(int(c) > 0 for c in self.conv_channels),
                 "classifier.conv_channels must be four positive widths")
        _require(self.dense_units > 0, "classifier.dense_units must be positive")
        return self


@dataclass
class IdentitySourceConfig:
    kind: str = "procedural"
    image_size: int = 64
    channels: int = 1
    latent_dim: int = 16
    corpus_manifest: str | None = None   # corpus-sampler
    checkpoint: str | None = None        # generative-model

    def validate(self) -> "IdentitySourceConfig":
        _require(self.kind in IDENTITY_SOURCE_KINDS,
                 f"identity_source.kind must be one of {IDENTITY_SOURCE_KINDS}")
        _require(self.image_size > 0, "identity_source.image_size must be positive")
        _require(self.channels in (1, 3), "identity_source.channels must be 1 or 3")
        _require(self.latent_dim > 0, "identity_source.latent_dim must be positive")
        if self.kind == "corpus-sampler":
            _require(self.corpus_manifest, "corpus-sampler requires identity_source.corpus_manifest")
        if self.kind == "generative-model":
            _require(self.checkpoint, "generative-model requires identity_source.checkpoint")
        return self


@dataclass
class SweepConfig:
    k_values: tuple = (1, 2, 3, 4, 5, 6, 10, 15, 20)
    seeds: tuple | None = None           # default: (fit.seed,)
    forgetting_margin: float = 0.02

    def validate(self) -> "SweepConfig":
        ks = tuple(int(k) for k in self.k_values)
        _require(len(ks) > 0, "sweep.k_values must be nonempty")
        _require(all(k >= 0 for k in ks), "sweep.k_values must be nonnegative")
        _require(all(a < b for a, b in zip(ks, ks[1:])),
                 "sweep.k_values must be strictly increasing")
        if self.seeds is not None:
            _require(all(int(s) >= 0 for s in self.seeds), "sweep.seeds must be nonnegative")
        _require(self.forgetting_margin >= 0, "sweep.forgetting_margin must be nonnegative")
        return self


@dataclass
class PathsConfig:
    real_manifest: str | None = None
    generated_pool_manifest: str | None = None
    translator_checkpoint: str | None = None
    classifier_checkpoint: str | None = None
    heldout_manifests: dict = field(default_factory=dict)


@dataclass
class PipelineConfig:
    """The whole pipeline configuration document."""

    seed: int = 0
    output_dir: str = "runs/out"
    cache_dir: str | None = None
    paths: PathsConfig = field(default_factory=PathsConfig)
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    identity_source: IdentitySourceConfig = field(default_factory=IdentitySourceConfig)
    gan: GanTrainConfig = field(default_factory=GanTrainConfig)
    fit: FitConfig = field(default_factory=FitConfig)
    classifier: ClassifierSpecConfig = field(default_factory=ClassifierSpecConfig)
    split: SplitSpec = field(default_factory=SplitSpec)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    generate_identities: int = 100
    source_db_tag: str = "generated"

    def validate(self) -> "PipelineConfig":
        _require(self.seed >= 0, "seed must be nonnegative")
        _require(self.generate_identities > 0, "generate_identities must be positive")
        for sub in (self.preprocess, self.identity_source, self.gan, self.fit,
                    self.classifier, self.split, self.sweep):
            sub.validate()
        # Any configured input path must exist up front, before side effects.
        for label, value in self.input_paths().items():
            _require(Path(value).exists(), f"configured path {label} does not exist: {value}")
        return self

    def input_paths(self) -> dict:
        """All configured input paths (label -> path), for existence checks."""
        out = {}
        p = self.paths
        for name in ("real_manifest", "generated_pool_manifest",
                     "translator_checkpoint", "classifier_checkpoint"):
            value = getattr(p, name)
            if value:
                out[f"paths.{name}"] = value
        for tag, path in (p.heldout_manifests or {}).items():
            out[f"paths.heldout_manifests.{tag}"] = path
        if self.identity_source.corpus_manifest:
            out["identity_source.corpus_manifest"] = self.identity_source.corpus_manifest
        if self.identity_source.checkpoint:
            out["identity_source.checkpoint"] = self.identity_source.checkpoint
        return out

    def to_dict(self) -> dict:
        # JSON round-trip turns tuples into lists so the result is YAML-safe.
        return json.loads(json.dumps(dataclasses.asdict(self)))


_SECTION_TYPES = {
    "paths": PathsConfig,
    "preprocess": PreprocessConfig,
    "identity_source": IdentitySourceConfig,
    "gan": GanTrainConfig,
    "fit": FitConfig,
    "classifier": ClassifierSpecConfig,
    "split": SplitSpec,
    "sweep": SweepConfig,
}

_TUPLE_FIELDS = {("classifier", "conv_channels"), ("sweep", "k_values"), ("sweep", "seeds")}


def _build_section(section: str, cls, data: dict):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"config section '{section}' must be a mapping")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown key(s) in '{section}': {', '.join(sorted(unknown))}")
    kwargs = {}
    for key, value in data.items():
        if (section, key) in _TUPLE_FIELDS and value is not None:
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad '{section}' section: {exc}") from None


def pipeline_config_from_dict(data: dict) -> PipelineConfig:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config document must be a mapping")
    top_fields = {f.name for f in dataclasses.fields(PipelineConfig)}
    unknown = set(data) - top_fields
    if unknown:
        raise ConfigError(f"unknown top-level config key(s): {', '.join(sorted(unknown))}")
    kwargs = {}
    for key, value in data.items():
        if key in _SECTION_TYPES:
            kwargs[key] = _build_section(key, _SECTION_TYPES[key], value)
        else:
            kwargs[key] = value
    try:
        return PipelineConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad config document: {exc}") from None


def load_pipeline_config(path) -> PipelineConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file does not exist: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config file {path}: {exc}") from None
    return pipeline_config_from_dict(data)


def save_pipeline_config(config: PipelineConfig, path):
    """Write the resolved config document; embedding it in an output directory
    is what makes a run re-runnable."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        yaml.safe_dump(config.to_dict(), sort_keys=False, default_flow_style=False),
        encoding="utf-8",
    )


def apply_overrides(config: PipelineConfig, overrides: list[str]) -> PipelineConfig:
    """Apply `section.key=value` overrides (values parsed as YAML scalars)."""
    data = config.to_dict()
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key.path=value, got {item!r}")
        dotted, raw = item.split("=", 1)
        keys = dotted.strip().split(".")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError:
            value = raw
        node = data
        for key in keys[:-1]:
            if key not in node or not isinstance(node[key], dict):
                raise ConfigError(f"unknown config section in override: {dotted}")
            node = node[key]
        # heldout_manifests is an open mapping (tag -> path); new tags are fine.
        if keys[-1] not in node and keys[-2:-1] != ["heldout_manifests"]:
            raise ConfigError(f"unknown config key in override: {dotted}")
        node[keys[-1]] = value
    return pipeline_config_from_dict(data)
