"""Turn a complete, valid configuration into a deployable product.

The product is a directory with rendered smart-contract sources, gated
frontend stub pages, the generation context, a product readme and a manifest
with content digests. Generation is deterministic: identical inputs produce
identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Mapping, Optional, Union

from .assets import template_dir as bundled_template_dir
from .configurator import Configuration, State, serialize_configuration
from .errors import GenerationError
from .template import (
    PLAIN_DELIMITERS,
    SOLIDITY_DELIMITERS,
    collect_keys,
    parse_template,
    render,
)

MANIFEST_SCHEMA = 1

NETWORK_FEATURES = ("Testnet", "Mainnet")


class ContractRole(Enum):
    FACTORY = "factory"
    CONTROLLER = "controller"
    DATA = "data"


class ArtifactKind(Enum):
    CONTRACT_SOURCE = "contract_source"
    FRONTEND_STUB = "frontend_stub"
    CONTEXT_FILE = "context_file"
    README = "readme"


@dataclass(frozen=True)
class ContractSpec:
    name: str
    role: ContractRole
    gate: Optional[str]  # feature name, or None for always


@dataclass(frozen=True)
class PageSpec:
    name: str
    gate: Optional[str]


# One data/controller pair per traceability concern (plus the registry
# factory); the participants pair is part of every product.
CONTRACTS = (
    ContractSpec("Factory", ContractRole.FACTORY, None),
    ContractSpec("ParticipantsController", ContractRole.CONTROLLER, None),
    ContractSpec("ParticipantsData", ContractRole.DATA, None),
    ContractSpec("StateMachineController", ContractRole.CONTROLLER, "StateMachine"),
    ContractSpec("StateMachineData", ContractRole.DATA, "StateMachine"),
    ContractSpec("AssetsController", ContractRole.CONTROLLER, "AssetTracking"),
    ContractSpec("AssetsData", ContractRole.DATA, "AssetTracking"),
    ContractSpec("RecordsController", ContractRole.CONTROLLER, "RecordCollections"),
    ContractSpec("RecordsData", ContractRole.DATA, "RecordCollections"),
)

METHOD_GATES = ("StateMachine", "AssetTracking", "RecordCollections")

PAGES = (
    PageSpec("deployment", "DeploymentView"),
    PageSpec("participants", None),
    PageSpec("roles", "Roles"),
    PageSpec("statemachine", "StateMachine"),
    PageSpec("assets", "AssetTracking"),
    PageSpec("records", "RecordCollections"),
)


@dataclass(frozen=True)
class GenerationContext:
    """Flat boolean view of a configuration: one entry per concrete feature,
    plus the product name and the chosen network."""

    features: Mapping[str, bool]
    product_name: str
    network: Optional[str]

    def as_mapping(self) -> dict:
        out: dict = dict(self.features)
        out["product_name"] = self.product_name
        out["network"] = self.network or ""
        return out


@dataclass(frozen=True)
class ArchitecturePlan:
    contracts: tuple[ContractSpec, ...]

    def contract_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.contracts)


@dataclass(frozen=True)
class Artifact:
    path: str
    kind: ArtifactKind
    template: Optional[str]
    digest: str


@dataclass(frozen=True)
class ProductManifest:
    schema: int
    product: str
    artifacts: tuple[Artifact, ...]
    configuration: dict

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "product": self.product,
            "artifacts": [
                {
                    "path": a.path,
                    "kind": a.kind.value,
                    "template": a.template,
                    "digest": a.digest,
                }
                for a in self.artifacts
            ],
            "configuration": self.configuration,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProductManifest":
        try:
            artifacts = tuple(
                Artifact(a["path"], ArtifactKind(a["kind"]), a.get("template"), a["digest"])
                for a in data["artifacts"]
            )
            return cls(
                schema=data["schema"],
                product=data["product"],
                artifacts=artifacts,
                configuration=data["configuration"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise GenerationError(f"malformed manifest: {exc}") from exc


@dataclass
class VerificationReport:
    findings: list[str]

    @property
    def ok(self) -> bool:
        return not self.findings


def build_context(config: Configuration, product_name: Optional[str] = None) -> GenerationContext:
    status = config.status()
    if not status.valid:
        raise GenerationError("configuration is not valid")
    if not status.complete:
        raise GenerationError(
            "configuration is not complete; undecided: " + ", ".join(status.undecided)
        )
    model = config.model
    features = {
        name: config.state(name) is State.SELECTED for name in model.concrete_features()
    }
    network = None
    if all(n in model.features for n in NETWORK_FEATURES):
        chosen = [n for n in NETWORK_FEATURES if features.get(n)]
        if len(chosen) != 1:
            raise GenerationError(
                f"expected exactly one of {'/'.join(NETWORK_FEATURES)}, got {chosen}"
            )
        network = chosen[0]
    return GenerationContext(
        features=features,
        product_name=product_name or model.name,
        network=network,
    )


def plan_architecture(ctx: GenerationContext) -> ArchitecturePlan:
    included = tuple(
        spec for spec in CONTRACTS if spec.gate is None or ctx.features.get(spec.gate, False)
    )
    methods = [g for g in METHOD_GATES if ctx.features.get(g, False)]
    if not methods:
        raise GenerationError(
            "no traceability method selected; the configurator should have "
            "enforced at least one"
        )
    return ArchitecturePlan(contracts=included)


def _render_template(path: Path, context: dict) -> str:
    source = path.read_text(encoding="utf-8")
    delims = SOLIDITY_DELIMITERS if path.name.endswith(".sol.tpl") else PLAIN_DELIMITERS
    ast = parse_template(source, delims, trim_standalone=True)
    unknown = sorted(collect_keys(ast) - set(context))
    if unknown:
        raise GenerationError(
            f"template {path.name} uses keys missing from the context: {', '.join(unknown)}"
        )
    return render(ast, context)


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def generate_product(
    config: Configuration,
    out_dir: Union[str, Path],
    product_name: Optional[str] = None,
    template_dir: Union[str, Path, None] = None,
) -> ProductManifest:
    ctx = build_context(config, product_name)
    plan = plan_architecture(ctx)
    templates = Path(template_dir) if template_dir else bundled_template_dir()
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()):
        raise GenerationError(f"output directory {out} is not empty")
    (out / "contracts").mkdir(parents=True, exist_ok=True)
    (out / "frontend").mkdir(parents=True, exist_ok=True)

    rendering = ctx.as_mapping()
    artifacts: list[Artifact] = []

    def write(rel_path: str, kind: ArtifactKind, template: Optional[str], text: str) -> None:
        data = text.encode("utf-8")
        (out / rel_path).write_bytes(data)
        artifacts.append(Artifact(rel_path, kind, template, _digest(data)))

    for spec in plan.contracts:
        template_name = f"{spec.name}.sol.tpl"
        text = _render_template(templates / template_name, rendering)
        write(f"contracts/{spec.name}.sol", ArtifactKind.CONTRACT_SOURCE, template_name, text)

    for page in PAGES:
        if page.gate is not None and not ctx.features.get(page.gate, False):
            continue
        template_name = f"{page.name}.stub.tpl"
        text = _render_template(templates / template_name, rendering)
        write(f"frontend/{page.name}.stub", ArtifactKind.FRONTEND_STUB, template_name, text)

    write(
        "README.md",
        ArtifactKind.README,
        "readme.tpl",
        _render_template(templates / "readme.tpl", rendering),
    )

    context_doc = {
        "features": dict(sorted(ctx.features.items())),
        "product_name": ctx.product_name,
        "network": ctx.network,
    }
    write(
        "context.json",
        ArtifactKind.CONTEXT_FILE,
        None,
        json.dumps(context_doc, indent=2, sort_keys=True) + "\n",
    )

    manifest = ProductManifest(
        schema=MANIFEST_SCHEMA,
        product=ctx.product_name,
        artifacts=tuple(sorted(artifacts, key=lambda a: a.path)),
        configuration={
            **serialize_configuration(config),
            "features": dict(sorted(ctx.features.items())),
        },
    )
    (out / "manifest.json").write_text(
        json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


def load_manifest(out_dir: Union[str, Path]) -> ProductManifest:
    path = Path(out_dir) / "manifest.json"
    if not path.exists():
        raise GenerationError(f"no manifest.json in {out_dir}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GenerationError(f"malformed manifest: {exc}") from exc
    return ProductManifest.from_dict(data)


RESIDUE_MARKERS = ("/* #", "/* /", "/* ^")


def verify_product(
    manifest: ProductManifest,
    out_dir: Union[str, Path],
    template_dir: Union[str, Path, None] = None,
) -> VerificationReport:
    """Lexical well-formedness report for a previously generated product."""
    out = Path(out_dir)
    templates = Path(template_dir) if template_dir else bundled_template_dir()
    findings: list[str] = []
    features: Mapping[str, bool] = manifest.configuration.get("features", {})

    texts: dict[str, str] = {}
    for artifact in manifest.artifacts:
        path = out / artifact.path
        if not path.exists():
            findings.append(f"{artifact.path}: listed in manifest but missing")
            continue
        data = path.read_bytes()
        if _digest(data) != artifact.digest:
            findings.append(f"{artifact.path}: digest mismatch, file was modified")
        texts[artifact.path] = data.decode("utf-8", errors="replace")

    plan_names = {
        f"contracts/{s.name}.sol"
        for s in CONTRACTS
        if s.gate is None or features.get(s.gate, False)
    }
    controller_names = [s.name for s in CONTRACTS if s.role is ContractRole.CONTROLLER]

    for artifact in manifest.artifacts:
        text = texts.get(artifact.path)
        if text is None:
            continue
        if artifact.kind is ArtifactKind.CONTRACT_SOURCE:
            if artifact.path not in plan_names:
                findings.append(f"{artifact.path}: not part of the architecture plan")
            for marker in RESIDUE_MARKERS:
                if marker in text:
                    findings.append(f"{artifact.path}: residual template marker {marker!r}")
            for open_ch, close_ch in (("{", "}"), ("(", ")")):
                if text.count(open_ch) != text.count(close_ch):
                    findings.append(
                        f"{artifact.path}: unbalanced {open_ch}{close_ch} delimiters"
                    )
            name = Path(artifact.path).stem
            declarations = len(re.findall(rf"\bcontract\s+{name}\b", text))
            if declarations != 1:
                findings.append(
                    f"{artifact.path}: expected one 'contract {name}' declaration, "
                    f"found {declarations}"
                )
            spec = next((s for s in CONTRACTS if s.name == name), None)
            if spec is not None and spec.role is ContractRole.DATA:
                for controller in controller_names:
                    if controller in text:
                        findings.append(
                            f"{artifact.path}: data contract references controller "
                            f"'{controller}'"
                        )
            if spec is not None and spec.role is ContractRole.CONTROLLER:
                if "dataContract" not in text:
                    findings.append(
                        f"{artifact.path}: controller does not reference its data "
                        "contract address"
                    )
        elif artifact.kind is ArtifactKind.FRONTEND_STUB:
            if "{{" in text or "}}" in text:
                findings.append(f"{artifact.path}: residual template delimiters")

    markers_path = templates / "markers.json"
    markers: dict[str, list[dict]] = json.loads(markers_path.read_text(encoding="utf-8"))
    for feature, entries in markers.items():
        gate = bool(features.get(feature, False))
        for entry in entries:
            rel, symbol = entry["file"], entry["symbol"]
            text = texts.get(rel)
            if gate:
                if text is None:
                    findings.append(
                        f"{rel}: expected for selected feature '{feature}' but absent"
                    )
                elif symbol not in text:
                    findings.append(
                        f"{rel}: symbol {symbol!r} missing for selected feature '{feature}'"
                    )
            elif text is not None and symbol in text:
                findings.append(
                    f"{rel}: symbol {symbol!r} present although '{feature}' is deselected"
                )
    return VerificationReport(findings=findings)
