"""Cascaded free-space channel coefficients and received power.

The per-element coefficients split the received-power expression into a
tx-side factor g_nm and an rx-side factor h_nm, each carrying one 1/(4*pi),
a spherical-spreading term with obliquity z/r, the antenna gain, and one of
the two element-size sinc factors.  The x-direction sinc lives in g and the
y-direction sinc in h; both mix tx and rx direction cosines, so g depends on
the receiver position as well.  Everything is evaluated with per-element
distances, so near-field (spherical wavefront) cases need no special path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RisGeometry, Terminal, Wave

FOUR_PI = 4.0 * np.pi


def sinc(x):
    """sin(x)/x with a series branch near zero (numpy's sinc is normalized)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    x_safe = np.where(small, 1.0, x)
    x2 = x * x
    out = np.where(small, 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0), np.sin(x_safe) / x_safe)
    if np.ndim(x) == 0:
        return float(out)
    return out


def _terminal_grids(geom: RisGeometry, terminal: Terminal):
    """Per-element distance, obliquity and lateral offsets for one terminal.

    Returns (dist, obliquity, off_x, off_y), each of shape (N, M).
    """
    X, Y = geom.center_grids()
    off_x = terminal.x - X
    off_y = terminal.y - Y
    dist = np.sqrt(off_x**2 + off_y**2 + terminal.z**2)
    return dist, terminal.z / dist, off_x, off_y


def compute_g(geom: RisGeometry, wave: Wave, tx: Terminal, rx: Terminal) -> np.ndarray:
    """Tx-side coefficients g_nm (N x M complex)."""
    k = wave.wavenumber
    r_tx, obl_tx, offx_tx, _ = _terminal_grids(geom, tx)
    r_rx, _, offx_rx, _ = _terminal_grids(geom, rx)
    gain = np.sqrt(tx.gain_pattern.gain(obl_tx))
    arg_x = k * (offx_rx / r_rx + offx_tx / r_tx) * geom.pitch_x / 2.0
    return (
        gain
        * obl_tx
        * np.exp(-1j * k * r_tx)
        / r_tx
        * geom.pitch_x
        * sinc(arg_x)
        / FOUR_PI
    )


def compute_h(geom: RisGeometry, wave: Wave, tx: Terminal, rx: Terminal) -> np.ndarray:
    """Rx-side coefficients h_nm (N x M complex)."""
    k = wave.wavenumber
    r_tx, _, _, offy_tx = _terminal_grids(geom, tx)
    r_rx, obl_rx, _, offy_rx = _terminal_grids(geom, rx)
    gain = np.sqrt(rx.gain_pattern.gain(obl_rx))
    arg_y = k * (offy_rx / r_rx + offy_tx / r_tx) * geom.pitch_y / 2.0
    return (
        gain
        * obl_rx
        * np.exp(-1j * k * r_rx)
        / r_rx
        * geom.pitch_y
        * sinc(arg_y)
        / FOUR_PI
    )


@dataclass(frozen=True, eq=False)
class ChannelPair:
    """The g, h coefficient matrices for one fixed tx/rx placement."""

    g: np.ndarray
    h: np.ndarray
    geometry: RisGeometry
    wave: Wave
    tx: Terminal
    rx: Terminal

    @classmethod
    def compute(cls, geom: RisGeometry, wave: Wave, tx: Terminal, rx: Terminal):
        return cls(
            g=compute_g(geom, wave, tx, rx),
            h=compute_h(geom, wave, tx, rx),
            geometry=geom,
            wave=wave,
            tx=tx,
            rx=rx,
        )

    @property
    def gh(self) -> np.ndarray:
        return self.g * self.h


def field_sum(pair: ChannelPair, config) -> complex:
    """Coherent sum over elements of g_nm * gamma_nm * h_nm.

    Accepts a SurfaceConfig or a bare gamma matrix.  numpy's sum reduces
    pairwise, which keeps rounding bounded for the ~3e5-element grids that a
    lambda/32 pitch produces.
    """
    gamma = np.asarray(getattr(config, "gamma", config))
    if gamma.shape != pair.g.shape:
        raise ValueError(f"gamma shape {gamma.shape} != channel shape {pair.g.shape}")
    return complex(np.sum(pair.g * gamma * pair.h))


def received_power(pair: ChannelPair, config, p_tx: float = 1.0) -> float:
    """Received power p_tx * |sum g gamma h|^2 in watts."""
    return p_tx * abs(field_sum(pair, config)) ** 2


def achievable_rate(pair: ChannelPair, config, p_tx: float, noise_power: float) -> float:
    """Rate per unit bandwidth, log2(1 + SNR), in bits/s/Hz."""
    if noise_power <= 0:
        raise ValueError(f"noise power must be positive, got {noise_power}")
    return float(np.log2(1.0 + received_power(pair, config, p_tx) / noise_power))
