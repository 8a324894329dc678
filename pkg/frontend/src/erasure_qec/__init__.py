"""Thin scripting bindings over the cssdec decoding toolkit.

Everything delegates to the installed primary package; no decoding logic is
reimplemented here. `decode` runs the exact code path behind the CLI's
single-shot `decode` subcommand, so results agree byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

from cssdec import codes as _codes
from cssdec.channel import ErasureInstance
from cssdec.decoders import classify as _classify
from cssdec.gf2 import BitVector, bits_from_indices
from cssdec.sweep import DECODER_NAMES, decode_side

from .plotting import plot_results

__all__ = ["BoundCode", "DecodeOutput", "surface", "load", "decode", "plot_results"]

__version__ = "0.1.0"


@dataclass(frozen=True)
class BoundCode:
    """Opaque handle to a validated code; exposes n, k, and the name."""

    _code: "_codes.CssCode"

    @property
    def n(self) -> int:
        return self._code.n

    @property
    def k(self) -> int:
        return self._code.k

    @property
    def name(self) -> str:
        return self._code.name


@dataclass
class DecodeOutput:
    estimates: dict[str, list[int]]
    stats: dict[str, dict[str, int]]
    statuses: dict[str, str]
    outcomes: dict[str, str] | None

    def cli_lines(self) -> list[str]:
        """Render exactly what `cssdec decode` prints for the same inputs."""
        out = []
        for side in ("x", "z"):
            support = " ".join(str(i) for i in self.estimates[side])
            out.append(f"{side}: {support}".rstrip())
            out.append(f"{side}_status: {self.statuses[side]}")
        return out


def surface(d: int) -> BoundCode:
    """Planar surface code of the given distance."""
    return BoundCode(_codes.surface_code(d))


def load(path: str) -> BoundCode:
    """Read and validate a code bundle directory."""
    return BoundCode(_codes.load(path))


def decode(
    code: BoundCode,
    erased: list[int],
    sx: list[int],
    sz: list[int],
    decoder_name: str,
    truth_x: list[int] | None = None,
    truth_z: list[int] | None = None,
) -> DecodeOutput:
    """Single-shot decode of both sides from erasure and syndrome index lists.

    With `truth_x`/`truth_z` supplied, the four-way outcome of each side is
    reported as well.
    """
    if decoder_name not in DECODER_NAMES:
        raise ValueError(f"unknown decoder {decoder_name!r}; choose from {DECODER_NAMES}")
    inner = code._code
    n = inner.n
    erased = sorted(erased)
    instance = ErasureInstance(
        erased=erased,
        erased_bits=bits_from_indices(erased, n),
        x_error=BitVector.zeros(n),
        z_error=BitVector.zeros(n),
        s_x=BitVector.from_support(inner.hz.num_rows, sx),
        s_z=BitVector.from_support(inner.hx.num_rows, sz),
    )
    estimates: dict[str, list[int]] = {}
    stats: dict[str, dict[str, int]] = {}
    statuses: dict[str, str] = {}
    outcomes: dict[str, str] = {}
    truths = {"x": truth_x, "z": truth_z}
    for side in ("x", "z"):
        result = decode_side(inner, instance, side, decoder_name)
        estimates[side] = result.estimate.support()
        statuses[side] = result.status.value
        st = result.stats
        stats[side] = {
            "num_inactivations": st.num_inactivations,
            "core_dim": st.core_dim,
            "num_hard_guesses": st.num_hard_guesses,
            "num_fixed_bits": st.num_fixed_bits,
            "peel_steps": st.peel_steps,
        }
        if truths[side] is not None:
            truth = BitVector.from_support(n, truths[side])
            outcomes[side] = _classify(result.estimate, truth, inner, side, result.status).value
    has_truth = truth_x is not None or truth_z is not None
    return DecodeOutput(
        estimates=estimates,
        stats=stats,
        statuses=statuses,
        outcomes=outcomes if has_truth else None,
    )
