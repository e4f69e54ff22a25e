"""Shared JSON wire formats.

Complex scalars are two-element ``[re, im]`` arrays, matrices are row-major
arrays of rows, and numbers are IEEE-754 doubles in decimal (Python's json
emits the shortest round-tripping decimal, so dump/load is bit-exact).

Documents:

* bipartite state   ``{"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}``
* density matrix    ``{"dim": d, "matrix": ...}``
* channel           ``{"dim": d, "kraus": [matrix, ...]}``
* superoperator     ``{"dim": d, "matrix": ...}``
* spectrum          ``{"values": [...], "sum": s, "rank": r, "threshold": t}``
"""

from __future__ import annotations

import numpy as np

from .channel import KrausChannel, Superoperator, make_channel
from .errors import FileFormatError
from .extraction import ExtractionResult
from .qstate import DEFAULT_TOL, BipartiteState, DensityMatrix, bipartite, validate_density
from .realignment import FaithfulnessVerdict, SingularSpectrum
from .tomography import ExperimentReport


def matrix_to_json(m: np.ndarray) -> list:
    a = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise FileFormatError("matrix must be a non-empty array of rows")
    try:
        rows = []
        for row in obj:
            rows.append([complex(z[0], z[1]) for z in row])
        a = np.array(rows, dtype=complex)
    except (TypeError, IndexError, ValueError) as exc:
        raise FileFormatError(f"malformed matrix entry: {exc}") from exc
    if a.ndim != 2:
        raise FileFormatError("matrix rows have inconsistent lengths")
    return a


def _require_keys(obj, keys, what: str) -> None:
    if not isinstance(obj, dict):
        raise FileFormatError(f"{what} document must be a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise FileFormatError(f"{what} document lacks keys {missing}")


def state_to_json(s: BipartiteState) -> dict:
    return {"dims": [s.dim_a, s.dim_b], "matrix": matrix_to_json(s.matrix)}


def state_from_json(obj, tol: float = DEFAULT_TOL) -> BipartiteState:
    _require_keys(obj, ("dims", "matrix"), "state")
    dims = obj["dims"]
    if not (isinstance(dims, list) and len(dims) == 2):
        raise FileFormatError("state 'dims' must be a two-element array")
    return bipartite(matrix_from_json(obj["matrix"]), int(dims[0]), int(dims[1]), tol=tol)


def density_to_json(rho: DensityMatrix) -> dict:
    return {"dim": rho.dim, "matrix": matrix_to_json(rho.matrix)}


def density_from_json(obj, tol: float = DEFAULT_TOL) -> DensityMatrix:
    _require_keys(obj, ("dim", "matrix"), "density")
    rho = validate_density(matrix_from_json(obj["matrix"]), tol=tol)
    if rho.dim != int(obj["dim"]):
        raise FileFormatError(f"declared dim {obj['dim']} != matrix dim {rho.dim}")
    return rho


def channel_to_json(ch: KrausChannel) -> dict:
    return {"dim": ch.dim, "kraus": [matrix_to_json(k) for k in ch.kraus]}


def channel_from_json(obj, tol: float = DEFAULT_TOL) -> KrausChannel:
    _require_keys(obj, ("dim", "kraus"), "channel")
    if not isinstance(obj["kraus"], list) or not obj["kraus"]:
        raise FileFormatError("channel 'kraus' must be a non-empty array")
    ch = make_channel([matrix_from_json(k) for k in obj["kraus"]], tol=tol)
    if ch.dim != int(obj["dim"]):
        raise FileFormatError(f"declared dim {obj['dim']} != Kraus dim {ch.dim}")
    return ch


def superop_to_json(m: Superoperator) -> dict:
    return {"dim": m.dim, "matrix": matrix_to_json(m.matrix)}


def superop_from_json(obj) -> Superoperator:
    _require_keys(obj, ("dim", "matrix"), "superoperator")
    a = matrix_from_json(obj["matrix"])
    d = int(obj["dim"])
    if a.shape != (d * d, d * d):
        raise FileFormatError(
            f"superoperator of dim {d} needs shape {(d * d, d * d)}, got {a.shape}"
        )
    return Superoperator(dim=d, matrix=a)


def spectrum_to_json(sp: SingularSpectrum) -> dict:
    return {
        "values": [float(v) for v in sp.values],
        "sum": sp.sum,
        "rank": sp.rank,
        "threshold": sp.threshold,
    }


def verdict_to_json(v: FaithfulnessVerdict) -> dict:
    return {
        "faithful": v.faithful,
        "spectrum": spectrum_to_json(v.spectrum),
        "requiredRank": v.required_rank,
        "kernelDimension": v.kernel_dimension,
        "dimsEqual": v.dims_equal,
    }


def extraction_to_json(res: ExtractionResult) -> dict:
    return {
        "m": superop_to_json(res.m),
        "mode": res.mode,
        "residual": res.residual,
        "truncatedCount": res.truncated_count,
        "inputSpectrum": spectrum_to_json(res.input_spectrum),
        "choiEigenvalues": [float(v) for v in res.choi_eigenvalues],
    }


def report_to_json(rep: ExperimentReport) -> dict:
    return {
        "shots": rep.shots,
        "batches": rep.batches,
        "seed": rep.seed,
        "exact": rep.exact,
        "noise": {
            "depolarizing1q": rep.noise.depolarizing_1q,
            "depolarizing2q": rep.noise.depolarizing_2q,
        },
        "rng": rep.rng_name,
        "fidelity_in": {"mean": rep.fidelity_in.mean, "band": rep.fidelity_in.band},
        "fidelity_out": {"mean": rep.fidelity_out.mean, "band": rep.fidelity_out.band},
        "probes": {
            name: {"mean": mb.mean, "band": mb.band}
            for name, mb in rep.probe_fidelities.items()
        },
        "batch_details": [
            {
                "batch": d.batch,
                "seed": d.seed,
                "status": d.status,
                "fidelity_in": d.fidelity_in,
                "fidelity_out": d.fidelity_out,
                "probes": dict(d.probe_fidelities),
                "rho_in": matrix_to_json(d.rho_in.matrix) if d.rho_in else None,
                "rho_out": matrix_to_json(d.rho_out.matrix) if d.rho_out else None,
            }
            for d in rep.batch_details
        ],
    }
