"""Polyphase interpolation on top of the shared filter bank.

An upsample-by-U interpolator with prototype ``h`` splits into U phase
filters ``h[u], h[u+U], h[u+2U], ...``.  Each phase runs at the input rate
and the commutator emits phase ``u`` at output index ``U*n + u``.  The
phases form a K=U filter bank, so coefficient sharing applies unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import FilterBank, GroupingPlan, validate_bank
from .errors import BadRatio
from .evaluate import SignalFrame, as_signal, direct_convolve, shared_evaluate


@dataclass(frozen=True, eq=False)
class PolyphaseSpec:
    prototype: np.ndarray
    U: int
    subfilters: FilterBank

    @property
    def phase_lengths(self) -> list[int]:
        return [int(n) for n in self.subfilters.real_taps.sum(axis=1)]

    def reconstruct(self) -> np.ndarray:
        """Interleave the phase taps back into the prototype."""
        h = np.zeros(self.prototype.size, dtype=np.int8)
        for u in range(self.U):
            n = self.phase_lengths[u]
            h[u :: self.U] = self.subfilters.coefficients[u, :n]
        return h


def _prototype(h) -> np.ndarray:
    bank = validate_bank([list(np.asarray(h).ravel())] if not isinstance(h, FilterBank) else h.tolist())
    if bank.K != 1:
        raise ValueError("prototype must be a single filter")
    return bank.coefficients[0]


def polyphase_decompose(h, U: int) -> PolyphaseSpec:
    if isinstance(U, bool) or int(U) != U or U < 1:
        raise BadRatio(f"upsampling ratio must be an integer >= 1, got {U!r}")
    U = int(U)
    proto = _prototype(h)
    M = proto.size
    L = -(-M // U)
    coeffs = np.zeros((U, L), dtype=np.int8)
    pad = np.ones((U, L), dtype=bool)
    for u in range(U):
        phase = proto[u::U]
        coeffs[u, : phase.size] = phase
        pad[u, : phase.size] = False
    bank = validate_bank(coeffs, padding=pad)
    return PolyphaseSpec(proto, U, bank)


def _stuff(x: np.ndarray, U: int) -> np.ndarray:
    v = np.zeros(x.size * U, dtype=np.int64)
    v[::U] = x
    return v


def interpolate_direct(h, U: int, signal) -> SignalFrame:
    """Oracle: zero-stuff by U, then convolve with the full prototype."""
    if isinstance(U, bool) or int(U) != U or U < 1:
        raise BadRatio(f"upsampling ratio must be an integer >= 1, got {U!r}")
    sig = as_signal(signal)
    proto = _prototype(h)
    up = SignalFrame(_stuff(sig.samples, int(U)), sig.sample_width)
    y = direct_convolve(validate_bank([proto.tolist()]), up)
    return SignalFrame(y.outputs[0], _out_width(sig, proto.size))


def _out_width(sig: SignalFrame, M: int) -> int:
    # wide enough for M accumulated samples
    return sig.sample_width + max(M - 1, 0).bit_length() + 1


def interpolate_shared(spec: PolyphaseSpec, plan: GroupingPlan, signal) -> SignalFrame:
    sig = as_signal(signal)
    phases = shared_evaluate(spec.subfilters, plan, sig).outputs
    out = np.empty(sig.samples.size * spec.U, dtype=np.int64)
    for u in range(spec.U):
        out[u :: spec.U] = phases[u]
    return SignalFrame(out, _out_width(sig, spec.prototype.size))
