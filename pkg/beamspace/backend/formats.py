"""Reading and writing the on-disk documents.

All numbers are written with 12 significant digits and -0 folded into 0, and
no data file carries a timestamp, so equal inputs give byte-identical files.
"""

import json
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from .core import to_db
from .errors import FormatError
from .models import (
    BeamVector,
    DesignSpec,
    Family,
    FlipMask,
    RunManifest,
    validation_messages,
)


def rounded(x: float) -> float:
    """x rounded to 12 significant digits, with -0 mapped to 0."""
    return float(f"{float(x) + 0.0:.12g}") + 0.0


def fmt_number(x: float) -> str:
    return f"{float(x) + 0.0:.12g}"


def _invalid(path: Path | str, exc: ValidationError) -> FormatError:
    details = "; ".join(f"{field}: {msg}" for field, msg in validation_messages(exc).items())
    return FormatError(f"{path}: {details}")


def read_json(path: Path | str) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise FormatError(f"{path}: file not found") from e
    except (OSError, json.JSONDecodeError) as e:
        raise FormatError(f"{path}: {e}") from e


def write_text(path: Path | str, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")
    return path


def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2) + "\n"


def vector_document(w: BeamVector) -> dict[str, Any]:
    doc = w.to_document()
    doc["spacing"] = rounded(doc["spacing"])
    doc["re"] = [rounded(x) for x in doc["re"]]
    doc["im"] = [rounded(x) for x in doc["im"]]
    return doc


def parse_vector(doc: Any, source: Path | str = "<document>") -> BeamVector:
    try:
        return BeamVector.from_document(doc)
    except ValidationError as e:
        raise _invalid(source, e) from e


def read_beam_vector(path: Path | str) -> BeamVector:
    return parse_vector(read_json(path), path)


def write_beam_vector(path: Path | str, w: BeamVector) -> Path:
    return write_text(path, dump_json(vector_document(w)))


def write_vector_set(path: Path | str, vectors: Sequence[BeamVector]) -> Path:
    return write_text(path, dump_json({"vectors": [vector_document(v) for v in vectors]}))


def family_document(family: Family) -> dict[str, Any]:
    return {
        "distinct_count": family.distinct_count,
        "mother": vector_document(family.mother),
        "members": [
            {"mask": mask.to_bits(), "vector": vector_document(member)}
            for mask, member in zip(family.masks, family.members)
        ],
    }


def write_family(path: Path | str, family: Family) -> Path:
    return write_text(path, dump_json(family_document(family)))


def read_family(path: Path | str) -> Family:
    doc = read_json(path)
    if not isinstance(doc, dict) or not {"mother", "members"} <= doc.keys():
        raise FormatError(f"{path}: not a family document (needs 'mother' and 'members')")
    try:
        members = tuple(parse_vector(item["vector"], path) for item in doc["members"])
        masks = tuple(FlipMask.from_bits(item["mask"]) for item in doc["members"])
        return Family(
            mother=parse_vector(doc["mother"], path),
            members=members,
            masks=masks,
            distinct_count=doc.get("distinct_count", len(members)),
        )
    except FormatError:
        raise
    except ValidationError as e:
        raise _invalid(path, e) from e
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"{path}: malformed family member ({e})") from e


def read_vectors(path: Path | str) -> list[BeamVector]:
    """Every vector in a beam-vector, vector-set or family document."""
    doc = read_json(path)
    if isinstance(doc, dict) and "members" in doc:
        return list(read_family(path).members)
    if isinstance(doc, dict) and "vectors" in doc:
        return [parse_vector(item, path) for item in doc["vectors"]]
    return [parse_vector(doc, path)]


def read_design_spec(path: Path | str) -> DesignSpec:
    doc = read_json(path)
    try:
        return DesignSpec.model_validate(doc)
    except ValidationError as e:
        raise _invalid(path, e) from e


def table_csv(frame: pd.DataFrame) -> str:
    """CSV text with every float column in the fixed 12-digit format."""
    out = frame.copy()
    for column in out.columns:
        if pd.api.types.is_float_dtype(out[column]):
            out[column] = [fmt_number(x) for x in out[column]]
    return out.to_csv(index=False, lineterminator="\n")


def pattern_frame(angles: np.ndarray, patterns: Sequence[np.ndarray]) -> pd.DataFrame:
    """theta_deg, power_linear, power_db; columns get a _j suffix for several vectors."""
    columns: dict[str, Any] = {"theta_deg": np.asarray(angles, dtype=np.float64)}
    for j, powers in enumerate(patterns, start=1):
        suffix = "" if len(patterns) == 1 else f"_{j}"
        columns[f"power_linear{suffix}"] = np.asarray(powers, dtype=np.float64)
        columns[f"power_db{suffix}"] = np.asarray(to_db(powers), dtype=np.float64)
    return pd.DataFrame(columns)


def write_manifest(path: Path | str, manifest: RunManifest) -> Path:
    doc = manifest.model_dump(mode="json")
    doc["wall_time_s"] = rounded(doc["wall_time_s"])
    return write_text(path, dump_json(doc))


def read_manifest(path: Path | str) -> RunManifest:
    try:
        return RunManifest.model_validate(read_json(path))
    except ValidationError as e:
        raise _invalid(path, e) from e
