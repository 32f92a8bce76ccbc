"""End-to-end link simulation and the deterministic goodput calculator.

A scenario run walks simulated seconds: draw one fading sample, update the
AGC against the multiplicative receiver plant, then push a handful of
frames through FEC -> modulation -> additive noise -> demodulation -> FEC
decode. Slot noise comes from the link margin through a single calibrated
offset (margin_db + snr_offset_db -> amplitude SNR), the one free constant
the field system never published.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from . import modem
from .agc import AgcState, ReceiverChain, agc_step
from .channel import (
    FadingSpec,
    LinkGeometry,
    NlosPath,
    WaterOptics,
    sample_fading_db,
    total_loss_db,
)
from .fec import ConcatCodecSpec
from .modem import DetectionParams, ModulationScheme

# Ethernet per-frame overhead: 14 header + 4 FCS + 8 preamble + 12 interframe gap
ETHERNET_OVERHEAD_BYTES = 38
MIN_PAYLOAD_BYTES = 46
MAX_PAYLOAD_BYTES = 1500


@dataclass(frozen=True)
class LinkSpec:
    """Everything needed to simulate or budget one directed optical link."""

    name: str
    tx_power_w: float
    water: WaterOptics
    geometry: LinkGeometry
    modulation: ModulationScheme
    budget_db: float
    receiver: ReceiverChain = field(default_factory=ReceiverChain)
    fading: FadingSpec = field(default_factory=FadingSpec)
    nlos: NlosPath | None = None
    sync_overhead_fraction: float = 0.0
    iface_cap_bps: float = 100e6
    frame_payload_bytes: int = 1500
    snr_offset_db: float = 0.0
    agc_window_v: tuple[float, float] = (0.5, 5.0)
    interleaver_depth: int = 8
    outer_words_per_frame: int = 4
    sim_frames_per_second: int = 6

    def __post_init__(self):
        if self.tx_power_w <= 0:
            raise ValueError("tx_power_w must be > 0")
        if self.budget_db <= 0:
            raise ValueError("budget_db must be > 0")
        if not 0.0 <= self.sync_overhead_fraction < 1.0:
            raise ValueError("sync_overhead_fraction must be in [0, 1)")
        if self.iface_cap_bps <= 0:
            raise ValueError("iface_cap_bps must be > 0")
        if not MIN_PAYLOAD_BYTES <= self.frame_payload_bytes <= MAX_PAYLOAD_BYTES:
            raise ValueError(
                f"frame_payload_bytes must be in "
                f"[{MIN_PAYLOAD_BYTES}, {MAX_PAYLOAD_BYTES}]"
            )
        lo, hi = self.agc_window_v
        if not 0 < lo < hi:
            raise ValueError("agc_window_v must satisfy 0 < low < high")
        if self.sim_frames_per_second < 1:
            raise ValueError("sim_frames_per_second must be >= 1")

    @property
    def codec(self) -> ConcatCodecSpec:
        return ConcatCodecSpec(
            interleaver_depth=self.interleaver_depth,
            outer_words_per_frame=self.outer_words_per_frame,
        )

    def fingerprint(self) -> str:
        """Stable short hash of the full configuration."""
        return hashlib.sha256(repr(self).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SimReport:
    """Per-run statistics; a pure function of (configuration, seed)."""

    name: str
    seed: int
    config_hash: str
    duration_s: int
    frames_sent: int
    bits_simulated: int
    payload_bits_simulated: int
    pre_fec_bit_errors: int
    pre_fec_ber: float
    post_fec_bit_errors: int
    post_fec_ber: float
    packet_loss_count: int
    decode_failures: int
    goodput_bps: float
    agc_saturated_seconds: int
    link_dark_seconds: int
    beps_series: tuple[int, ...]
    loss_series: tuple[int, ...]
    margin_trace_db: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "duration_s": self.duration_s,
            "frames_sent": self.frames_sent,
            "bits_simulated": self.bits_simulated,
            "payload_bits_simulated": self.payload_bits_simulated,
            "pre_fec_bit_errors": self.pre_fec_bit_errors,
            "pre_fec_ber": self.pre_fec_ber,
            "post_fec_bit_errors": self.post_fec_bit_errors,
            "post_fec_ber": self.post_fec_ber,
            "packet_loss_count": self.packet_loss_count,
            "decode_failures": self.decode_failures,
            "goodput_bps": self.goodput_bps,
            "agc_saturated_seconds": self.agc_saturated_seconds,
            "link_dark_seconds": self.link_dark_seconds,
            "beps_series": list(self.beps_series),
            "loss_series": list(self.loss_series),
            "margin_trace_db": list(self.margin_trace_db),
        }


def goodput_bps(line_rate_bps: float, fec_rate: float,
                sync_overhead_fraction: float, iface_cap_bps: float,
                frame_payload_bytes: int = 1500) -> float:
    """Usable Ethernet payload rate after coding, sync, cap, and framing."""
    if line_rate_bps < 0 or fec_rate < 0 or iface_cap_bps <= 0:
        raise ValueError("rates must be non-negative, iface cap positive")
    if not 0.0 <= sync_overhead_fraction < 1.0:
        raise ValueError("sync_overhead_fraction must be in [0, 1)")
    if not MIN_PAYLOAD_BYTES <= frame_payload_bytes <= MAX_PAYLOAD_BYTES:
        raise ValueError(
            f"frame_payload_bytes must be in [{MIN_PAYLOAD_BYTES}, {MAX_PAYLOAD_BYTES}]"
        )
    if line_rate_bps == 0:
        return 0.0
    carried = min(line_rate_bps * fec_rate * (1.0 - sync_overhead_fraction),
                  iface_cap_bps)
    efficiency = frame_payload_bytes / (frame_payload_bytes + ETHERNET_OVERHEAD_BYTES)
    return carried * efficiency


def goodput_for(spec: LinkSpec) -> float:
    return goodput_bps(
        spec.modulation.bit_rate_bps,
        spec.codec.code_rate(),
        spec.sync_overhead_fraction,
        spec.iface_cap_bps,
        spec.frame_payload_bytes,
    )


def initial_agc_state(spec: LinkSpec) -> AgcState:
    g_min, g_max = spec.receiver.pmt_gain_range
    return AgcState(
        lc_voltage=spec.receiver.lc_voltage_range[0],
        pmt_gain=math.sqrt(g_min * g_max),
        window_low_v=spec.agc_window_v[0],
        window_high_v=spec.agc_window_v[1],
    )


def margin_to_snr(margin_db: float, snr_offset_db: float) -> float:
    """Amplitude SNR from link margin through the calibrated offset."""
    return 10.0 ** ((margin_db + snr_offset_db) / 20.0)


def run_scenario(spec: LinkSpec, duration_s: int, seed: int) -> SimReport:
    """Simulate ``duration_s`` seconds of the link; deterministic per seed."""
    if duration_s <= 0:
        raise ValueError("duration_s must be > 0")
    rng = np.random.default_rng(seed)
    codec = spec.codec
    kind = spec.modulation.kind
    static = total_loss_db(spec.geometry, spec.water, spec.nlos)

    agc = initial_agc_state(spec)
    beps = []
    loss_series = []
    margins = []
    frames_sent = 0
    bits_sim = 0
    payload_bits_sim = 0
    pre_err_total = 0
    post_err_total = 0
    losses = 0
    failures = 0
    saturated_seconds = 0
    dark_seconds = 0

    for _ in range(duration_s):
        fading = sample_fading_db(spec.fading, rng)
        total = static.total_db + fading
        margin = spec.budget_db - total
        margins.append(margin)
        if static.link_dark:
            dark_seconds += 1
            snr = 0.0
        else:
            snr = margin_to_snr(margin, spec.snr_offset_db)
            p_rx = spec.tx_power_w * 10.0 ** (-total / 10.0)
            measured = spec.receiver.amplitude_v(p_rx, agc.lc_voltage, agc.pmt_gain)
            if measured > 0:
                agc = agc_step(spec.receiver, agc, measured)
                saturated_seconds += int(agc.saturated)
        sigma = 1.0 / max(snr, 1e-9)
        params = DetectionParams(noise_sigma=sigma)

        second_errors = 0
        second_losses = 0
        for _ in range(spec.sim_frames_per_second):
            payload = rng.integers(0, 2, codec.frame_payload_bits).astype(np.uint8)
            frame = codec.encode(payload)
            stream = modem.modulate(kind, frame, spec.modulation.slot_rate_hz)
            noisy = modem.add_noise(stream, sigma, rng)
            received = modem.demodulate(kind, noisy, params)
            pre_err = int(np.count_nonzero(received != frame))
            outcome = codec.decode(received)
            post_err = int(np.count_nonzero(outcome.message_bits != payload))

            frames_sent += 1
            bits_sim += codec.frame_bits
            payload_bits_sim += codec.frame_payload_bits
            second_errors += pre_err
            post_err_total += post_err
            failures += int(not outcome.ok)
            second_losses += int((not outcome.ok) or post_err > 0)
        pre_err_total += second_errors
        losses += second_losses
        beps.append(second_errors)
        loss_series.append(second_losses)

    return SimReport(
        name=spec.name,
        seed=seed,
        config_hash=spec.fingerprint(),
        duration_s=duration_s,
        frames_sent=frames_sent,
        bits_simulated=bits_sim,
        payload_bits_simulated=payload_bits_sim,
        pre_fec_bit_errors=pre_err_total,
        pre_fec_ber=pre_err_total / bits_sim if bits_sim else 0.0,
        post_fec_bit_errors=post_err_total,
        post_fec_ber=post_err_total / payload_bits_sim if payload_bits_sim else 0.0,
        packet_loss_count=losses,
        decode_failures=failures,
        goodput_bps=goodput_for(spec),
        agc_saturated_seconds=saturated_seconds,
        link_dark_seconds=dark_seconds,
        beps_series=tuple(beps),
        loss_series=tuple(loss_series),
        margin_trace_db=tuple(margins),
    )


def inject_errors_run(spec: LinkSpec, pre_fec_ber_target: float, n_bits: int,
                      seed: int = 0) -> SimReport:
    """Flip line bits i.i.d. at the target rate, bypassing the analog chain."""
    if not 0.0 <= pre_fec_ber_target < 0.5:
        raise ValueError("pre_fec_ber_target must be in [0, 0.5)")
    if n_bits <= 0:
        raise ValueError("n_bits must be > 0")
    rng = np.random.default_rng(seed)
    codec = spec.codec
    n_frames = -(-n_bits // codec.frame_bits)

    beps = []
    loss_series = []
    pre_err_total = 0
    post_err_total = 0
    losses = 0
    failures = 0
    second_errors = 0
    second_losses = 0
    for i in range(n_frames):
        payload = rng.integers(0, 2, codec.frame_payload_bits).astype(np.uint8)
        frame = codec.encode(payload)
        if pre_fec_ber_target > 0:
            flips = rng.random(codec.frame_bits) < pre_fec_ber_target
            received = frame ^ flips.astype(np.uint8)
            pre_err = int(np.count_nonzero(flips))
        else:
            received = frame
            pre_err = 0
        outcome = codec.decode(received)
        post_err = int(np.count_nonzero(outcome.message_bits != payload))
        pre_err_total += pre_err
        post_err_total += post_err
        failures += int(not outcome.ok)
        lost = int((not outcome.ok) or post_err > 0)
        losses += lost
        second_errors += pre_err
        second_losses += lost
        if (i + 1) % spec.sim_frames_per_second == 0:
            beps.append(second_errors)
            loss_series.append(second_losses)
            second_errors = 0
            second_losses = 0
    if n_frames % spec.sim_frames_per_second:
        beps.append(second_errors)
        loss_series.append(second_losses)

    bits_sim = n_frames * codec.frame_bits
    payload_bits_sim = n_frames * codec.frame_payload_bits
    return SimReport(
        name=spec.name,
        seed=seed,
        config_hash=spec.fingerprint(),
        duration_s=len(beps),
        frames_sent=n_frames,
        bits_simulated=bits_sim,
        payload_bits_simulated=payload_bits_sim,
        pre_fec_bit_errors=pre_err_total,
        pre_fec_ber=pre_err_total / bits_sim,
        post_fec_bit_errors=post_err_total,
        post_fec_ber=post_err_total / payload_bits_sim,
        packet_loss_count=losses,
        decode_failures=failures,
        goodput_bps=goodput_for(spec),
        agc_saturated_seconds=0,
        link_dark_seconds=0,
        beps_series=tuple(beps),
        loss_series=tuple(loss_series),
        margin_trace_db=(),
    )


def epoch_seed(master_seed: int, epoch_index: int) -> int:
    """Derived per-epoch seed, independent of evaluation order."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(epoch_index,))
    return int(ss.generate_state(1, np.uint64)[0])


def long_term_monitor(spec: LinkSpec, epochs: int, epoch_duration_s: int,
                      seed: int) -> list[SimReport]:
    """Independent seeded epochs standing in for day-by-day monitoring."""
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    return [
        run_scenario(spec, epoch_duration_s, epoch_seed(seed, i))
        for i in range(epochs)
    ]
