"""
Frozen calibration fixture.

The fixture records every convention-dependent table the library derives
(gauge eigenvalues, frame tables in both orders, branch probabilities, raw
branch overlaps and post-gate sectors) so that a change in conventions shows
up as a fixture mismatch instead of silently shifting results.
"""

import json
import logging
from cmath import phase
from pathlib import Path
from typing import Dict, List, Optional, Union

from .circuits import CIRCUIT_DEVIATIONS
from .config import get_settings
from .encoding import ENCODING_IDS, get_encoding, gauge_table
from .protocol import (
    branch_probabilities,
    build_protocol,
    match_reference_table,
    post_gate_sector,
    raw_overlap,
)

logger = logging.getLogger(__name__)

FIXTURE_VERSION = 1
NUMBER_TOLERANCE = 1e-9
CALIBRATED_GATES = ("S", "Sdg", "T", "Tdg", "RxxP", "RxxM")
OVERLAP_BRANCH = "111"

CONVENTIONS = {
    "qubit_order": "qubit 0 is the least significant bit; Pauli letter q acts on qubit q",
    "outcome_strings": "first measurement leftmost; bit 1 means eigenvalue -1",
    "logical_index": "a = sum a_k 2^k; label character k addresses logical qubit k",
    "frame_correction": "C = P*F, the fix-up F applied before the Pauli P",
    "raw_overlap": "<0_L| P_m ... P_1 |0_L> with projectors (I + s O)/2, not renormalized",
}


def _encoding_section(encoding_id: str) -> Dict[str, object]:
    encoding = get_encoding(encoding_id)
    return {
        "physical_qubits": encoding.physical_n,
        "logical_qubits": encoding.n_logical,
        "junction": encoding.junction.to_dict(),
        "gauge_links": dict(encoding.gauge_links),
        "logical_observables": [{axis: str(op) for axis, op in ops.items()} for ops in encoding.logical_ops],
        "gauge_table": gauge_table(encoding_id),
    }


def _protocol_section(gate_id: str) -> Dict[str, object]:
    protocol = build_protocol(gate_id)
    defaults = {op.name: op.expected for op in protocol.encoding.sector_ops}
    reference = match_reference_table(gate_id, protocol.frame_table)
    overlap = raw_overlap(gate_id, OVERLAP_BRANCH)
    post_sector = {}
    for outcomes in protocol.frame_table:
        sector = post_gate_sector(gate_id, outcomes)
        post_sector[outcomes] = {name: value for name, value in sector.items() if value != defaults[name]}
    return {
        "encoding": protocol.encoding.id,
        "axes": [axis.label() for axis in protocol.axes],
        "frames": {outcomes: str(c) for outcomes, c in sorted(protocol.frame_table.items())},
        "reference": {
            "column": reference.column,
            "bit_order": reference.bit_order,
            "letter_order": reference.letter_order,
            "matched": reference.matched,
            "mismatches": list(reference.mismatches),
            "reference_order": {reference.reference_key(outcomes): reference.reference_letters(c.pauli)
                                for outcomes, c in sorted(protocol.frame_table.items())},
        },
        "branch_probabilities": branch_probabilities(gate_id),
        "raw_overlap": {"branch": OVERLAP_BRANCH, "magnitude": abs(overlap), "phase": phase(overlap)},
        "post_sector": post_sector,
    }


def build_calibration() -> Dict[str, object]:
    """Compute the calibration document from the library."""
    return {
        "version": FIXTURE_VERSION,
        "conventions": dict(CONVENTIONS),
        "encodings": {encoding_id: _encoding_section(encoding_id) for encoding_id in ENCODING_IDS},
        "protocols": {gate_id: _protocol_section(gate_id) for gate_id in CALIBRATED_GATES},
        "circuit_deviations": dict(CIRCUIT_DEVIATIONS),
    }


def write_calibration(path: Union[str, Path], document: Optional[Dict[str, object]] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = document if document is not None else build_calibration()
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Wrote calibration fixture {path}")
    return path


def load_calibration(path: Union[str, Path, None] = None) -> Dict[str, object]:
    """Read a fixture (default: the configured fixture path)."""
    path = Path(path) if path is not None else get_settings().fixture
    try:
        with path.open(encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as e:
        raise ValueError(f"Calibration fixture {path} is not valid JSON: {e}")


def _is_number(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def compare_calibration(frozen: object, computed: object, path: str = "") -> List[str]:
    """
    Differences between a frozen and a computed document.

    Numbers agree within 1e-9; everything else must be equal. Each entry
    names the dotted path of the disagreeing value.
    """
    where = path or "<root>"
    if isinstance(frozen, dict) and isinstance(computed, dict):
        mismatches = []
        for key in sorted(set(frozen) | set(computed), key=str):
            child = f"{path}.{key}" if path else str(key)
            if key not in computed:
                mismatches.append(f"{child}: missing from computed document")
            elif key not in frozen:
                mismatches.append(f"{child}: missing from fixture")
            else:
                mismatches.extend(compare_calibration(frozen[key], computed[key], child))
        return mismatches
    if isinstance(frozen, list) and isinstance(computed, list):
        if len(frozen) != len(computed):
            return [f"{where}: length {len(frozen)} in fixture, {len(computed)} computed"]
        mismatches = []
        for k, (a, b) in enumerate(zip(frozen, computed)):
            mismatches.extend(compare_calibration(a, b, f"{path}[{k}]"))
        return mismatches
    if _is_number(frozen) and _is_number(computed):
        if abs(frozen - computed) > NUMBER_TOLERANCE:
            return [f"{where}: fixture {frozen!r}, computed {computed!r}"]
        return []
    if frozen != computed:
        return [f"{where}: fixture {frozen!r}, computed {computed!r}"]
    return []


def check_calibration(path: Union[str, Path, None] = None) -> List[str]:
    """Compare the fixture at `path` with a freshly computed document."""
    mismatches = compare_calibration(load_calibration(path), build_calibration())
    for mismatch in mismatches:
        logger.warning(f"Calibration mismatch {mismatch}")
    return mismatches
