"""Scenario document loading, validation, unit normalization and serialization.

SECURITY: Uses yaml.safe_load() exclusively. Never use yaml.load().
JSON documents are accepted as well, since YAML is a superset of them.
"""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Any

import structlog
import yaml
from pydantic import ValidationError

from wsncalc.bounds.models import EffectiveBandwidthMode, PathScenario
from wsncalc.errors import HurstOutOfRange, ScenarioError, UnitError, UnknownIdError
from wsncalc.scenarios.builtin import BUILTIN_PREFIX, builtin_document
from wsncalc.scenarios.models import FlowRecord, FractalRecord, ScenarioDocument
from wsncalc.scheduling.models import Convention, NodeSpec
from wsncalc.traffic.models import (
    DEFAULT_FRACTAL,
    FlowSpec,
    FractalConstants,
    FractalRegulator,
    MicroFlowSpec,
    TokenBucketPiece,
    TokenBucketRegulator,
)

logger = structlog.get_logger()


def parse_scenario(text: str, *, source: str = "<document>") -> ScenarioDocument:
    """Parse, validate and normalize a scenario document to canonical units.

    Args:
        text: YAML or JSON document text.
        source: Name used in error locations (usually the file path).

    Returns:
        A validated ScenarioDocument in Mbps, Kb and ms.

    Raises:
        ScenarioError: malformed text or schema violation, located by line and field.
        UnitError: unsupported unit declaration.
        UnknownIdError: a path entry names no node.
        HurstOutOfRange: a Hurst parameter outside (0.5, 1).
    """
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        location = f"{source}:{mark.line + 1}" if mark is not None else source
        problem = getattr(exc, "problem", None) or str(exc)
        raise ScenarioError(f"Malformed document: {problem}", location) from exc

    if data is None:
        raise ScenarioError("Scenario document is empty", source)
    if not isinstance(data, dict):
        raise ScenarioError("Scenario document must be a mapping at the top level", source)

    try:
        doc = ScenarioDocument.model_validate(data)
    except ValidationError as exc:
        raise _scenario_error(exc, text, source) from exc
    return doc.normalized()


def load_scenario(path: str | Path) -> ScenarioDocument:
    """Read and parse a scenario file.

    Raises:
        ScenarioError: if the file cannot be read or fails validation.
    """
    file_path = Path(path)
    try:
        text = file_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"Cannot read scenario file: {exc.strerror}", str(file_path)) from exc

    doc = parse_scenario(text, source=str(file_path))
    logger.info(
        "scenario_loaded",
        file_path=str(file_path),
        name=doc.name,
        nodes=len(doc.nodes),
        flows=len(doc.flows),
        hops=len(doc.path),
    )
    return doc


def resolve_scenario(ref: str) -> ScenarioDocument:
    """A file path, or 'builtin:<name>' for an embedded replication scenario."""
    if ref.startswith(BUILTIN_PREFIX):
        return builtin_document(ref[len(BUILTIN_PREFIX):])
    return load_scenario(ref)


def dump_scenario(doc: ScenarioDocument) -> str:
    """Serialize a document as canonical YAML; parse_scenario reads it back unchanged."""
    payload = doc.model_dump(mode="json", exclude_none=True)
    return yaml.safe_dump(payload, sort_keys=False, allow_unicode=True)


def to_path_scenario(
    doc: ScenarioDocument,
    *,
    default_convention: Convention = Convention.PAPER_NUMERIC,
    default_ee_mode: EffectiveBandwidthMode = EffectiveBandwidthMode.AGGREGATE,
    default_gamma: float = DEFAULT_FRACTAL.gamma,
) -> PathScenario:
    """Build the PathScenario described by a document; every flow traverses every hop.

    Raises:
        ScenarioError: if the document does not describe a valid path.
    """
    canonical = doc.normalized()
    flows = tuple(_flow_spec(f) for f in canonical.flows)
    gamma = canonical.fractal_gamma if canonical.fractal_gamma is not None else default_gamma
    try:
        nodes = tuple(
            NodeSpec(
                id=record.id,
                service_rate=record.service_rate,
                latency=record.latency,
                flows=flows,
            )
            for record in (canonical.node(node_id) for node_id in canonical.path)
        )
        return PathScenario(
            nodes=nodes,
            fixed_delays=canonical.fixed_delays,
            convention=canonical.convention or default_convention,
            ee_mode=canonical.ee_mode or default_ee_mode,
            fractal=FractalConstants(gamma=gamma),
        )
    except ValidationError as exc:
        raise _scenario_error(exc, None, canonical.name) from exc


def _flow_spec(record: FlowRecord) -> FlowSpec:
    micro_flows = []
    for mf in record.micro_flows:
        if isinstance(mf, FractalRecord):
            regulator: TokenBucketRegulator | FractalRegulator = FractalRegulator(
                mean=mf.mean, std_dev=mf.std_dev, hurst=mf.hurst
            )
        else:
            regulator = TokenBucketRegulator(
                pieces=tuple(TokenBucketPiece(rate=r, burst=b) for r, b in mf.piece_list())
            )
        micro_flows.append(MicroFlowSpec(id=mf.id, regulator=regulator))
    return FlowSpec(id=record.id, micro_flows=tuple(micro_flows))


def _scenario_error(exc: ValidationError, text: str | None, source: str) -> ScenarioError:
    """Map the first pydantic error to the matching ScenarioError with a location."""
    errors = exc.errors()
    first = errors[0]
    loc: tuple[Any, ...] = tuple(first.get("loc", ()))
    field_path = ".".join(str(part) for part in loc) or "<document>"
    line = _line_of(text, loc) if text is not None else None
    location = f"{source}:{line} ({field_path})" if line is not None else f"{source} ({field_path})"
    message = str(first.get("msg", "invalid value"))
    if len(errors) > 1:
        message = f"{message} (+{len(errors) - 1} more)"

    cause = (first.get("ctx") or {}).get("error")
    if isinstance(cause, HurstOutOfRange):
        return HurstOutOfRange(cause.hurst, location)
    if isinstance(cause, UnknownIdError):
        return UnknownIdError(str(cause), location)
    if loc and loc[0] == "units":
        return UnitError(message, location)
    return ScenarioError(message, location)


def _line_of(text: str, loc: Sequence[Any]) -> int | None:
    """1-based line of the deepest YAML node reached by a pydantic error location."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return None
    if node is None:
        return None
    line = node.start_mark.line + 1
    for part in loc:
        child = None
        if isinstance(node, yaml.MappingNode):
            child = next((value for key, value in node.value if key.value == part), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int):
            if 0 <= part < len(node.value):
                child = node.value[part]
        if child is None:
            continue
        node = child
        line = node.start_mark.line + 1
    return line
