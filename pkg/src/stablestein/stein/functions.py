#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Test functions g (for Stein operators) and h (for Stein equations)

A TestFunction bundles vectorised callables for the value and the first two
(optionally three) derivatives with the metadata the integrators rely on:

* decay_class, one of 'compact', 'gaussian', 'exponential', 'polynomial'
  (with decay_order k, |g(x)| = O(|x|^-k)) or 'none',
* support, the effective support outside of which g - level is negligible
  (the exact support for compact functions),
* level, the limit of g at +/- infinity,
* fourier, the transform xi -> int e^{-i xi x} (g(x) - level) dx when known.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.interpolate import CubicSpline

from stablestein.numerics.quadrature import panel_rule

__all__ = [
    "TestFunction",
    "gaussian_bump",
    "cosine_bump",
    "tanh_window",
    "compact_bump",
    "smoothed_min",
    "sine_wave",
    "cosine_wave",
    "scaled_tanh",
    "constant",
    "from_samples",
    "standard_dictionary",
    "w2_dictionary",
]

DECAY_CLASSES = ("compact", "gaussian", "exponential", "polynomial", "none")
_FD_STEP = 1e-4


def _as_array(x):
    return np.asarray(x, dtype=float)


@dataclass(frozen=True)
class TestFunction:
    """Bounded smooth function with derivatives and decay metadata

    Parameters
    ----------
    value, d1, d2 : callable
        Vectorised g, g' and g''
    d3 : callable, optional
        Vectorised g'''; a central difference of d2 is used when omitted
    decay_class : str
        One of DECAY_CLASSES
    decay_order : float
        k for polynomial decay
    support : tuple
        Effective support (lo, hi)
    level : float
        Limit of g at infinity
    fourier : callable, optional
        Transform of g - level with kernel e^{-i xi x}
    freq_cutoff : float
        Frequency beyond which the transform is negligible
    scale : float
        Characteristic width
    sup_norms : tuple, optional
        (||g||, ||g'||, ||g''||); measured on a sample grid when omitted
    derivative_decay : tuple, optional
        (decay_class, decay_order) of g', when it differs from that of g
    """
    value: object
    d1: object
    d2: object
    d3: object = None
    decay_class: str = "gaussian"
    decay_order: float = 0.0
    support: tuple = (-math.inf, math.inf)
    level: float = 0.0
    fourier: object = None
    freq_cutoff: float = math.inf
    scale: float = 1.0
    sup_norms: tuple = None
    derivative_decay: tuple = None
    name: str = "g"
    __test__ = False

    def __post_init__(self):
        if self.decay_class not in DECAY_CLASSES:
            raise ValueError(f"decay_class must be one of {DECAY_CLASSES}, got {self.decay_class}")
        if self.decay_class == "compact" and not self.has_finite_support:
            raise ValueError("compactly supported functions need a finite support")
        if not self.support[0] <= self.support[1]:
            raise ValueError(f"invalid support {self.support}")
        if self.sup_norms is None:
            object.__setattr__(self, "sup_norms", self.measure_norms())
        if not all(math.isfinite(v) for v in self.sup_norms):
            raise ValueError(f"{self.name}: sup norms must be finite, got {self.sup_norms}")

    def __call__(self, x):
        return self.value(x)

    @property
    def has_finite_support(self):
        return math.isfinite(self.support[0]) and math.isfinite(self.support[1])

    def sample_grid(self, n=20001):
        """Grid covering the effective support"""
        if self.has_finite_support:
            lo, hi = self.support
            pad = self.scale
        else:
            lo, hi, pad = -50.0 * self.scale, 50.0 * self.scale, 0.0
        return np.linspace(lo - pad, hi + pad, n)

    def measure_norms(self, grid=None):
        x = self.sample_grid() if grid is None else grid
        return tuple(float(np.max(np.abs(f(x)))) for f in (self.value, self.d1, self.d2))

    def third(self, x):
        """g''' from d3, or by central difference of d2"""
        if self.d3 is not None:
            return self.d3(x)
        x = _as_array(x)
        return (self.d2(x + _FD_STEP) - self.d2(x - _FD_STEP)) / (2 * _FD_STEP)

    def check_consistency(self, points=None, tol=1e-5):
        """Compare d1 and d2 with central differences of value

        Returns the largest deviation, raising ValueError above tol.
        """
        x = np.linspace(-10 * self.scale, 10 * self.scale, 401) if points is None else _as_array(points)
        h = _FD_STEP
        fd1 = (self.value(x + h) - self.value(x - h)) / (2 * h)
        fd2 = (self.value(x + h) - 2 * self.value(x) + self.value(x - h)) / (h * h)
        dev = max(float(np.max(np.abs(fd1 - self.d1(x)))), float(np.max(np.abs(fd2 - self.d2(x)))))
        if dev > tol:
            raise ValueError(f"{self.name}: derivatives inconsistent with value (deviation {dev:.3e})")
        return dev

    def derivative(self):
        """The test function whose value is g'"""
        kind, order = self.derivative_decay or (self.decay_class, self.decay_order)
        if kind == "polynomial" and self.derivative_decay is None:
            order = self.decay_order + 1
        fourier = None
        if self.fourier is not None:
            base = self.fourier
            fourier = lambda xi: 1j * _as_array(xi) * base(xi)
        return TestFunction(self.d1, self.d2, self.third, None, kind, order, self.support,
                            0.0, fourier, self.freq_cutoff, self.scale, name=f"{self.name}'")

    def _combine(self, other, a, b):
        rank = {k: i for i, k in enumerate(DECAY_CLASSES)}
        kind = max(self.decay_class, other.decay_class, key=rank.get)
        orders = [f.decay_order for f in (self, other) if f.decay_class == "polynomial"]
        support = (min(self.support[0], other.support[0]), max(self.support[1], other.support[1]))
        fourier = None
        if self.fourier is not None and other.fourier is not None:
            f1, f2 = self.fourier, other.fourier
            fourier = lambda xi: a * f1(xi) + b * f2(xi)
        d3 = None
        if self.d3 is not None and other.d3 is not None:
            d3 = lambda x: a * self.d3(x) + b * other.d3(x)
        return TestFunction(
            lambda x: a * self.value(x) + b * other.value(x),
            lambda x: a * self.d1(x) + b * other.d1(x),
            lambda x: a * self.d2(x) + b * other.d2(x),
            d3, kind, min(orders) if orders else 0.0, support,
            a * self.level + b * other.level, fourier,
            max(self.freq_cutoff, other.freq_cutoff), max(self.scale, other.scale),
            name=f"{a:g}*{self.name}+{b:g}*{other.name}")

    def __add__(self, other):
        return self._combine(other, 1.0, 1.0)

    def __sub__(self, other):
        return self._combine(other, 1.0, -1.0)

    def __mul__(self, c):
        c = float(c)
        fourier = None
        if self.fourier is not None:
            base = self.fourier
            fourier = lambda xi: c * base(xi)
        d3 = None if self.d3 is None else (lambda x: c * self.d3(x))
        return replace(self, value=lambda x: c * self.value(x), d1=lambda x: c * self.d1(x),
                       d2=lambda x: c * self.d2(x), d3=d3, level=c * self.level, fourier=fourier,
                       sup_norms=tuple(abs(c) * v for v in self.sup_norms), name=f"{c:g}*{self.name}")

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def numeric_fourier(self, n_panels=256, order=16):
        """Transform of g - level by fixed-rule quadrature over the support"""
        if not self.has_finite_support:
            raise ValueError(f"{self.name}: numeric transform needs a finite effective support")
        nodes, weights = panel_rule(self.support[0], self.support[1], n_panels, order)
        vals = (self.value(nodes) - self.level) * weights

        def transform(xi):
            xi = _as_array(xi)
            return np.exp(-1j * np.multiply.outer(xi, nodes)) @ vals
        return transform


def _gauss_parts(y, w):
    g = np.exp(-0.5 * (y / w) ** 2)
    return (g, -y / w ** 2 * g, (y * y / w ** 4 - 1 / w ** 2) * g,
            (-y ** 3 / w ** 6 + 3 * y / w ** 4) * g)


def _product(p, q, k):
    # Leibniz rule for (p q)^{(k)}, k <= 3
    coeffs = {0: (1,), 1: (1, 1), 2: (1, 2, 1), 3: (1, 3, 3, 1)}[k]
    return sum(c * p[k - j] * q[j] for j, c in enumerate(coeffs))


def gaussian_bump(centre=0.0, width=1.0, height=1.0):
    """h exp(-(x - c)^2 / 2w^2)"""
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")

    def part(k):
        return lambda x: height * _gauss_parts(_as_array(x) - centre, width)[k]

    def fourier(xi):
        xi = _as_array(xi)
        return (height * width * math.sqrt(2 * math.pi)
                * np.exp(-0.5 * (width * xi) ** 2 - 1j * xi * centre))

    norms = (abs(height), abs(height) * math.exp(-0.5) / width, abs(height) / width ** 2)
    return TestFunction(part(0), part(1), part(2), part(3), "gaussian",
                        support=(centre - 12 * width, centre + 12 * width), fourier=fourier,
                        freq_cutoff=9.0 / width, scale=width, sup_norms=norms,
                        name=f"gaussian_bump({centre:g},{width:g})")


def cosine_bump(omega=1.0, centre=0.0, width=1.0, height=1.0):
    """Gaussian bump modulated by cos(omega (x - c))"""
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")

    def part(k):
        def fn(x):
            y = _as_array(x) - centre
            wave = (np.cos(omega * y), -omega * np.sin(omega * y),
                    -omega ** 2 * np.cos(omega * y), omega ** 3 * np.sin(omega * y))
            return height * _product(wave, _gauss_parts(y, width), k)
        return fn

    def fourier(xi):
        xi = _as_array(xi)
        amp = 0.5 * height * width * math.sqrt(2 * math.pi)
        return amp * np.exp(-1j * xi * centre) * (np.exp(-0.5 * (width * (xi - omega)) ** 2)
                                                  + np.exp(-0.5 * (width * (xi + omega)) ** 2))

    return TestFunction(part(0), part(1), part(2), part(3), "gaussian",
                        support=(centre - 12 * width, centre + 12 * width), fourier=fourier,
                        freq_cutoff=abs(omega) + 9.0 / width, scale=width,
                        name=f"cosine_bump({omega:g},{centre:g},{width:g})")


def tanh_window(centre=0.0, width=2.0, height=1.0):
    """tanh(x - c) damped by a Gaussian window of the given width"""
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")

    def part(k):
        def fn(x):
            y = _as_array(x) - centre
            t = np.tanh(y)
            t1 = 1 - t * t
            t2 = -2 * t * t1
            t3 = -2 * t1 * t1 + 4 * t * t * t1
            return height * _product((t, t1, t2, t3), _gauss_parts(y, width), k)
        return fn

    g = TestFunction(part(0), part(1), part(2), part(3), "gaussian",
                     support=(centre - 12 * width, centre + 12 * width), scale=width,
                     freq_cutoff=40.0, name=f"tanh_window({centre:g},{width:g})")
    return replace(g, fourier=g.numeric_fourier())


def compact_bump(centre=0.0, width=1.0, height=1.0):
    """h exp(1 - 1/(1 - r^2)) for r = (x - c)/w in (-1, 1), zero outside"""
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")

    def part(k):
        def fn(x):
            r = (_as_array(x) - centre) / width
            inside = np.abs(r) < 1
            r = np.where(inside, r, 0.0)
            q = 1 - r * r
            phi = np.exp(1 - 1 / q)
            a = -2 * r / q ** 2
            b = -2 / q ** 2 - 8 * r * r / q ** 3
            db = -24 * r / q ** 3 - 48 * r ** 3 / q ** 4
            poly = (1.0, a, a * a + b, a ** 3 + 3 * a * b + db)[k]
            return np.where(inside, height * phi * poly / width ** k, 0.0)
        return fn

    g = TestFunction(part(0), part(1), part(2), part(3), "compact",
                     support=(centre - width, centre + width), scale=width,
                     freq_cutoff=400.0 / width, name=f"compact_bump({centre:g},{width:g})")
    return replace(g, fourier=g.numeric_fourier())


def smoothed_min(scale=1.0, height=1.0):
    """h (1 - exp(-x^2 / 2 s^2)), a smooth member of the Wasserstein-delta class

    With height <= 1 and height <= s e^{1/2} it satisfies
    |h(x) - h(y)| <= min(|x - y|, |x - y|^delta) for every delta in (0, 1).
    """
    bump = gaussian_bump(0.0, scale, height)
    base = constant(height)
    g = base - bump
    return replace(g, decay_class="none", derivative_decay=("gaussian", 0.0),
                   support=bump.support, freq_cutoff=bump.freq_cutoff, scale=scale,
                   sup_norms=(abs(height), bump.sup_norms[1], bump.sup_norms[2]),
                   name=f"smoothed_min({scale:g})")


def _wave(kind, omega, amplitude):
    fn, dfn = (np.sin, np.cos) if kind == "sin" else (np.cos, lambda y: -np.sin(y))

    def value(x):
        return amplitude * fn(omega * _as_array(x))

    def d1(x):
        return amplitude * omega * dfn(omega * _as_array(x))

    def d2(x):
        return -amplitude * omega ** 2 * fn(omega * _as_array(x))

    def d3(x):
        return -amplitude * omega ** 3 * dfn(omega * _as_array(x))

    norms = (abs(amplitude), abs(amplitude * omega), abs(amplitude) * omega ** 2)
    return TestFunction(value, d1, d2, d3, "none", scale=1.0 / max(abs(omega), 1e-12),
                        sup_norms=norms, name=f"{kind}_wave({omega:g})")


def sine_wave(omega=1.0, amplitude=None):
    """amplitude sin(omega x); amplitude defaults to 1/max(1, omega^2)"""
    amplitude = 1.0 / max(1.0, omega * omega) if amplitude is None else amplitude
    return _wave("sin", omega, amplitude)


def cosine_wave(omega=1.0, amplitude=None):
    """amplitude cos(omega x); amplitude defaults to 1/max(1, omega^2)"""
    amplitude = 1.0 / max(1.0, omega * omega) if amplitude is None else amplitude
    return _wave("cos", omega, amplitude)


def scaled_tanh(scale=1.0, amplitude=None):
    """amplitude tanh(x/s) with amplitude defaulting to the largest value that
    keeps ||h||, ||h'|| and ||h''|| at most 1"""
    s = float(scale)
    c2 = 4 / (3 * math.sqrt(3))
    amplitude = min(1.0, s, s * s / c2) if amplitude is None else amplitude

    def part(k):
        def fn(x):
            t = np.tanh(_as_array(x) / s)
            t1 = 1 - t * t
            return amplitude * (t, t1 / s, -2 * t * t1 / s ** 2,
                                (-2 * t1 * t1 + 4 * t * t * t1) / s ** 3)[k]
        return fn

    norms = (abs(amplitude), abs(amplitude) / s, abs(amplitude) * c2 / s ** 2)
    return TestFunction(part(0), part(1), part(2), part(3), "none", scale=s, sup_norms=norms,
                        derivative_decay=("exponential", 0.0), support=(-40 * s, 40 * s),
                        name=f"scaled_tanh({s:g})")


def constant(c=1.0):
    """The constant function c"""
    zero = lambda x: np.zeros_like(_as_array(x))
    return TestFunction(lambda x: np.full_like(_as_array(x), c), zero, zero, zero, "none",
                        level=float(c), fourier=lambda xi: np.zeros_like(_as_array(xi), dtype=complex),
                        freq_cutoff=0.0, sup_norms=(abs(c), 0.0, 0.0), name=f"constant({c:g})")


def from_samples(x, values, level=0.0, tail_power=None, name="sampled"):
    """Cubic-spline test function through grid samples

    Beyond the grid the function tends to level as c |x|^-tail_power, with c
    matched to the end samples; without tail_power it is held at the end
    values.
    """
    x = _as_array(x)
    values = _as_array(values)
    spline = CubicSpline(x, values)
    lo, hi = float(x[0]), float(x[-1])
    if tail_power is not None and not lo < 0 < hi:
        raise ValueError("power-law tails need a grid straddling the origin")
    p = 0.0 if tail_power is None else float(tail_power)
    c_lo = (values[0] - level) * abs(lo) ** p
    c_hi = (values[-1] - level) * abs(hi) ** p

    def part(k):
        inner = spline.derivative(k) if k else spline

        def fn(y):
            y = _as_array(y)
            r = np.abs(np.where((y < lo) | (y > hi), y, 1.0))
            c = np.where(y > hi, c_hi, c_lo)
            sgn = np.where(y > hi, 1.0, -1.0)
            tail = (c * r ** -p, -sgn * p * c * r ** (-p - 1), p * (p + 1) * c * r ** (-p - 2),
                    -sgn * p * (p + 1) * (p + 2) * c * r ** (-p - 3))[k]
            if k == 0:
                tail = tail + level
            return np.where((y < lo) | (y > hi), tail, inner(np.clip(y, lo, hi)))
        return fn

    kind = "none" if tail_power is None or level != 0 else "polynomial"
    return TestFunction(part(0), part(1), part(2), part(3), kind, p, (lo, hi), level,
                        scale=(hi - lo) / 100, name=name)


def standard_dictionary():
    """Decaying test functions used for characterising-identity checks"""
    return [gaussian_bump(-2.0), gaussian_bump(0.0), gaussian_bump(2.0),
            tanh_window(), compact_bump(0.5, 1.5), cosine_bump(1.0, 0.0, 1.5)]


def w2_dictionary():
    """Low-frequency functions with ||h||, ||h'||, ||h''|| <= 1"""
    out = []
    for omega in (0.25, 0.5, 1.0, 2.0):
        out.append(sine_wave(omega))
        out.append(cosine_wave(omega))
    out.append(scaled_tanh(1.0))
    out.append(scaled_tanh(2.0))
    for centre in (-1.0, 0.0, 1.0):
        out.append(gaussian_bump(centre, 1.0, 1.0))
    return out
