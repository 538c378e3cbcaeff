"""Evaluation records, reference constants, and deterministic serialization.

All floats in serialized reports are rounded to 15 significant digits so
that repeated runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .character import DirichletCharacter, product_character
from .charsum import CSV_COLUMNS, max_partial_sum
from .lfunction import (
    EXACT_FINITE,
    LValue,
    l1_exact,
    l1_exact_batch,
    l1_truncated_euler,
)

_E_GAMMA = math.exp(np.euler_gamma)

# Labeled comparison constants for plots of extreme |L(1,chi)| and M(chi):
# e_gamma scales the extreme |L(1,chi)| ~ e^gamma log log Q lines;
# the /pi variants are the conjectured M(chi)/(sqrt(q) log log q) densities,
# and the 2x variants the corresponding conditional upper bounds.
REFERENCE_CONSTANTS = {
    "e_gamma": _E_GAMMA,
    "e_gamma_over_pi": _E_GAMMA / math.pi,
    "e_gamma_over_pi_sqrt3": _E_GAMMA / (math.pi * math.sqrt(3.0)),
    "two_e_gamma_over_pi": 2.0 * _E_GAMMA / math.pi,
    "two_e_gamma_over_pi_sqrt3": 2.0 * _E_GAMMA / (math.pi * math.sqrt(3.0)),
}


@dataclass(frozen=True)
class EvalRecord:
    """Full evaluation of one character, as serialized into reports."""

    char_id: str
    modulus: int
    order: int
    parity: int
    conductor: int
    L1: LValue
    L1_euler: Optional[LValue]
    L1_twisted: Optional[LValue]  # L(1, chi*xi) when a companion xi is given
    xi_id: Optional[str]
    M: float
    argmax: int
    tau_abs: float
    ratio_odd: Optional[float]
    ratio_even: Optional[float]

    def to_json_dict(self) -> dict:
        return {
            "char_id": self.char_id,
            "modulus": self.modulus,
            "order": self.order,
            "parity": self.parity,
            "conductor": self.conductor,
            "L1": self.L1.as_dict(),
            "L1_euler": self.L1_euler.as_dict() if self.L1_euler else None,
            "L1_twisted": self.L1_twisted.as_dict() if self.L1_twisted else None,
            "xi_id": self.xi_id,
            "M": self.M,
            "argmax": self.argmax,
            "tau_abs": self.tau_abs,
            "ratio_odd": self.ratio_odd,
            "ratio_even": self.ratio_even,
            "references": dict(REFERENCE_CONSTANTS),
        }

    def csv_row(self) -> list:
        return [
            self.char_id,
            self.modulus,
            self.order,
            self.parity,
            _f15(self.M),
            self.argmax,
            _f15(abs(self.L1.value)),
            _f15(self.ratio_odd) if self.ratio_odd is not None else "",
            _f15(self.ratio_even) if self.ratio_even is not None else "",
        ]


def _fast_l1(chi: DirichletCharacter) -> LValue:
    """l1_exact through numpy dot products (for large family moduli)."""
    value = complex(l1_exact_batch([chi])[0])
    q = chi.modulus
    err = 32.0 * np.finfo(np.float64).eps * (1.0 + math.sqrt(q))
    return LValue(value, EXACT_FINITE, None, float(err), rigorous=False)


def evaluate_character(
    chi: DirichletCharacter,
    z: Optional[float] = None,
    xi: Optional[DirichletCharacter] = None,
    fast: bool = False,
) -> EvalRecord:
    """Evaluate L(1, chi) (exact and optionally Euler-truncated), M(chi),
    tau(chi), and optionally L(1, chi*xi) for a companion character xi."""
    msum = max_partial_sum(chi)
    l1 = _fast_l1(chi) if fast else l1_exact(chi)
    l1_euler = l1_truncated_euler(chi, z) if z is not None else None
    l1_twisted = None
    xi_id = None
    if xi is not None and not xi.is_principal:
        xi_id = xi.char_id
        twisted = product_character(chi, xi)
        l1_twisted = _fast_l1(twisted) if fast else l1_exact(twisted)
    # |tau| from the absolutely convergent defining sum; reuse the fast path
    from .lfunction import gauss_sum

    if fast:
        vals = chi.value_table()
        q = chi.modulus
        tau = np.dot(vals, np.exp((2j * math.pi / q) * np.arange(q)))
        tau_abs = float(abs(tau))
    else:
        tau_abs = abs(gauss_sum(chi))
    return EvalRecord(
        char_id=chi.char_id,
        modulus=chi.modulus,
        order=chi.order,
        parity=chi.parity(),
        conductor=chi.conductor,
        L1=l1,
        L1_euler=l1_euler,
        L1_twisted=l1_twisted,
        xi_id=xi_id,
        M=msum.M,
        argmax=msum.argmax,
        tau_abs=tau_abs,
        ratio_odd=msum.ratio_odd,
        ratio_even=msum.ratio_even,
    )


# ---------------------------------------------------------------------------
# deterministic serialization


def _f15(x: float) -> float:
    """Round to 15 significant digits (deterministic report floats)."""
    if x != x or x in (float("inf"), float("-inf")):
        return x
    return float(f"{x:.15g}")


def _round_floats(obj):
    if isinstance(obj, float):
        return _f15(obj)
    if isinstance(obj, complex):
        return {"re": _f15(obj.real), "im": _f15(obj.imag)}
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return _f15(float(obj))
    return obj


def canonical_json(obj) -> str:
    return json.dumps(_round_floats(obj), sort_keys=True, separators=(",", ":"))


def write_json(path, obj) -> None:
    Path(path).write_text(canonical_json(obj) + "\n")


def write_jsonl(path, dicts: Iterable[dict]) -> None:
    with open(path, "w") as fh:
        for d in dicts:
            fh.write(canonical_json(d) + "\n")


def write_csv(path, rows: Iterable[list], header=CSV_COLUMNS) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def file_fingerprint(path) -> Optional[str]:
    p = Path(path)
    if not p.is_file():
        return None
    return hashlib.sha256(p.read_bytes()).hexdigest()


@dataclass
class RunManifest:
    """Reproducibility envelope for one CLI run.  Two runs with the same
    manifest (timestamps excluded) produce byte-identical reports."""

    command: str
    params: dict
    version: str
    prime_cache_fingerprint: Optional[str]
    started_at: str
    finished_at: str
    output_paths: dict
    # the only seeded randomness in the library: the mixing constant of the
    # deterministic rho-factorization rng (and rng seeds recorded in params)
    rho_seed_constant: str = "0x9E3779B97F4A7C15"

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "version": self.version,
            "prime_cache_fingerprint": self.prime_cache_fingerprint,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "output_paths": self.output_paths,
            "rho_seed_constant": self.rho_seed_constant,
        }
