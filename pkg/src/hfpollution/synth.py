"""Seeded synthetic signals used as verification oracles.

Randomness comes from numpy's PCG64 bit generator seeded through
``SeedSequence(seed)``; child streams are derived with
``SeedSequence(seed, spawn_key=(i,))`` so a single seed can feed several
independent components. Gaussian variates are produced by pushing open
``(0, 1)`` uniforms through the inverse normal CDF, which is deterministic
and free of the data-dependent looping of rejection samplers.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtri

from .errors import ConfigError, NonStationaryPhi, SeriesTooShort, SubNyquistPeriod
from .series import UniformSeries

KINDS = ("ar1", "lognormal_ar1", "sine_mix", "one_over_f", "threshold_ar")


def make_rng(seed: int, stream: Optional[int] = None) -> np.random.Generator:
    key = () if stream is None else (stream,)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def uniform_open(rng, n):
    # random() yields k / 2**53; shifting by half a step keeps both ends out
    return rng.random(n) + 2.0**-54


def standard_normal(rng, n):
    return ndtri(uniform_open(rng, n))


def _check_phi(*phis):
    for phi in phis:
        if not abs(phi) < 1:
            raise NonStationaryPhi(f"|phi| must be < 1, got {phi}")


def _series(values, rate_hz, start_t):
    return UniformSeries(start_t=start_t, rate_hz=rate_hz, values=values, unit="ppm")


def _ar1_path(phi, sigma, n, rng):
    eps = sigma * standard_normal(rng, n)
    x0 = eps[0] / math.sqrt(1.0 - phi * phi)  # stationary start
    if n == 1:
        return np.array([x0])
    rest, _ = lfilter([1.0], [1.0, -phi], eps[1:], zi=[phi * x0])
    return np.concatenate([[x0], rest])


def gen_ar1(phi: float, sigma: float, n: int, seed: int, rate_hz: float = 1.0, start_t: float = 0.0) -> UniformSeries:
    """Zero-mean Gaussian AR(1) started from its stationary distribution."""
    _check_phi(phi)
    if sigma < 0:
        raise ConfigError("sigma must be non-negative")
    if n < 1:
        raise ConfigError("n must be >= 1")
    return _series(_ar1_path(phi, sigma, n, make_rng(seed)), rate_hz, start_t)


def gen_lognormal_ar1(phi: float, mu: float, sigma_log: float, n: int, seed: int, rate_hz: float = 1.0, start_t: float = 0.0) -> UniformSeries:
    """``exp(mu + z_t)`` where ``z_t`` is an AR(1) with stationary std ``sigma_log``."""
    _check_phi(phi)
    if not sigma_log > 0:
        raise ConfigError("sigma_log must be positive")
    z = gen_ar1(phi, sigma_log * math.sqrt(1.0 - phi * phi), n, seed, rate_hz, start_t).values
    return _series(np.exp(mu + z), rate_hz, start_t)


def gen_one_over_f(n: int, rate_hz: float, seed: int, start_t: float = 0.0) -> UniformSeries:
    """Pink noise by spectral synthesis.

    Each positive-frequency bin gets amplitude ``1 / sqrt(f)`` and an
    independent uniform phase; DC is zero. The result is scaled to unit
    population variance.
    """
    if n < 64:
        raise SeriesTooShort(f"1/f synthesis needs n >= 64, got {n}")
    rng = make_rng(seed)
    nbins = n // 2
    freqs = np.arange(1, nbins + 1) * (rate_hz / n)
    phases = 2.0 * np.pi * uniform_open(rng, nbins)
    spec = np.zeros(nbins + 1, dtype=complex)
    spec[1:] = np.exp(1j * phases) / np.sqrt(freqs)
    if n % 2 == 0:
        spec[-1] = spec[-1].real  # Nyquist bin of a real signal is real
    x = np.fft.irfft(spec, n)
    x -= x.mean()
    x /= math.sqrt(np.mean(x * x))
    return _series(x, rate_hz, start_t)


def gen_threshold_ar(phi_low: float, phi_high: float, quantile_q: float, sigma: float, n: int, seed: int, rate_hz: float = 1.0, start_t: float = 0.0) -> UniformSeries:
    """Two-regime AR(1).

    ``x_{t+1} = phi * x_t + e`` with ``phi = phi_low`` when ``x_t`` is at or
    below the threshold and ``phi_high`` above it. The threshold is the
    running ``quantile_q`` quantile of the path during a warm-up of
    ``min(n // 10, 1000)`` samples, then frozen.
    """
    _check_phi(phi_low, phi_high)
    if not 0 < quantile_q < 1:
        raise ConfigError("quantile_q must lie in (0, 1)")
    if n < 1:
        raise ConfigError("n must be >= 1")
    eps = sigma * standard_normal(make_rng(seed), n)
    x = np.empty(n)
    x[0] = eps[0] / math.sqrt(1.0 - phi_low * phi_low)
    warmup = max(1, min(n // 10, 1000))
    threshold = x[0]
    for t in range(n - 1):
        if t < warmup:
            threshold = float(np.quantile(x[: t + 1], quantile_q))
        phi = phi_low if x[t] <= threshold else phi_high
        x[t + 1] = phi * x[t] + eps[t + 1]
    return _series(x, rate_hz, start_t)


@dataclass
class SynthSpec:
    """Serializable recipe for one synthetic series."""

    kind: str
    params: dict = field(default_factory=dict)
    n: int = 3600
    rate_hz: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown synth kind {self.kind!r}")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if not self.rate_hz > 0:
            raise ConfigError("rate_hz must be positive")
        for key in ("phi", "phi_low", "phi_high"):
            if key in self.params:
                _check_phi(self.params[key])

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(**obj)


def gen_sine_mix(period_s: float, amplitude: float, background, seed: Optional[int] = None) -> UniformSeries:
    """Background plus ``amplitude * sin(2 pi t / period_s)``.

    ``background`` is a :class:`SynthSpec` (generated here, with ``seed``
    replacing its own seed when given) or an existing series.
    """
    if isinstance(background, SynthSpec):
        if seed is not None:
            background = SynthSpec(background.kind, background.params, background.n, background.rate_hz, seed)
        background = generate(background)
    if not period_s > 2.0 / background.rate_hz:
        raise SubNyquistPeriod(f"period {period_s} s is not above the Nyquist limit {2.0 / background.rate_hz} s")
    t = np.arange(len(background)) / background.rate_hz
    values = background.values + amplitude * np.sin(2.0 * np.pi * t / period_s)
    return UniformSeries(start_t=background.start_t, rate_hz=background.rate_hz, values=values, unit=background.unit)


def generate(spec: SynthSpec, start_t: float = 0.0) -> UniformSeries:
    p = spec.params
    try:
        if spec.kind == "ar1":
            return gen_ar1(p["phi"], p.get("sigma", 1.0), spec.n, spec.seed, spec.rate_hz, start_t)
        if spec.kind == "lognormal_ar1":
            return gen_lognormal_ar1(p["phi"], p["mu"], p["sigma_log"], spec.n, spec.seed, spec.rate_hz, start_t)
        if spec.kind == "one_over_f":
            return gen_one_over_f(spec.n, spec.rate_hz, spec.seed, start_t)
        if spec.kind == "threshold_ar":
            return gen_threshold_ar(p["phi_low"], p["phi_high"], p["quantile_q"], p.get("sigma", 1.0), spec.n, spec.seed, spec.rate_hz, start_t)
        # sine_mix: params carry the nested background recipe
        bg = p.get("background")
        if bg is None:
            background = UniformSeries(start_t=start_t, rate_hz=spec.rate_hz, values=np.zeros(spec.n))
        else:
            bg = dict(bg)
            bg.setdefault("n", spec.n)
            bg.setdefault("rate_hz", spec.rate_hz)
            bg.setdefault("seed", spec.seed)
            background = generate(SynthSpec(**bg), start_t)
        return gen_sine_mix(p["period_s"], p.get("amplitude", 1.0), background)
    except KeyError as exc:
        raise ConfigError(f"synth kind {spec.kind!r} is missing parameter {exc.args[0]!r}") from None
