from typing import Any, Callable, Union

import numpy as np

from .profiles import profile

S_MAX = 0.5
MAX_AMPLITUDE = 1.0

_Scalar = Union[float, np.ndarray]


class MetricFamily:
    """
    A one-parameter family s -> g(x, s) of 2x2 symmetric positive-definite
    matrices, i.e., the tangential part of a metric ds^2 + g(x, s) in Fermi
    coordinates. Subclasses implement ``evaluate``; families with closed
    form s-derivatives also override ``s_derivatives``.
    """

    name = "base"
    closed_form = False
    s_max = S_MAX
    max_jet_order = 3

    # Finite-difference steps for the numeric fallback. Orders three and four
    # use a larger step to keep the roundoff in check.
    fd_step_low = 1e-3
    fd_step_high = 1e-2

    def evaluate(self, points: np.ndarray, s: _Scalar) -> np.ndarray:
        """
        Evaluates g(x, s) at points of shape (N, 2). ``s`` is a scalar or an
        array of shape (N,). Returns an array of shape (N, 2, 2).
        """
        raise NotImplementedError

    def s_derivatives(
        self, points: np.ndarray, s: _Scalar = 0.0, order: int = 4
    ) -> np.ndarray:
        """
        Returns d^n g / ds^n for n = 0, ..., order, shape (order + 1, N, 2, 2).
        The default implementation uses centered finite differences in s:
        fourth-order stencils for n <= 2 and second-order stencils beyond.
        """
        s = np.broadcast_to(np.asarray(s, dtype=float), (len(points),))
        derivs = [self.evaluate(points, s)]

        for n in range(1, order + 1):
            eta = self.fd_step_low if n <= 2 else self.fd_step_high
            f = {k: self.evaluate(points, s + k * eta) for k in (-2, -1, 1, 2)}
            f[0] = derivs[0]

            if n == 1:
                val = (-f[2] + 8 * f[1] - 8 * f[-1] + f[-2]) / (12 * eta)
            elif n == 2:
                val = -f[2] + 16 * f[1] - 30 * f[0] + 16 * f[-1] - f[-2]
                val = val / (12 * eta**2)
            elif n == 3:
                val = (f[2] - 2 * f[1] + 2 * f[-1] - f[-2]) / (2 * eta**3)
            elif n == 4:
                val = f[2] - 4 * f[1] + 6 * f[0] - 4 * f[-1] + f[-2]
                val = val / eta**4
            else:
                raise ValueError("Jets beyond order four are not supported.")

            derivs.append(val)

        return np.stack(derivs)

    def parameters(self) -> dict[str, Any]:
        return {}

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.parameters().items())
        return f"{type(self).__name__}({params})"


class EuclideanFamily(MetricFamily):
    name = "euclidean"
    closed_form = True

    def evaluate(self, points, s):
        return np.broadcast_to(np.eye(2), (len(points), 2, 2)).copy()

    def s_derivatives(self, points, s=0.0, order=4):
        derivs = np.zeros((order + 1, len(points), 2, 2))
        derivs[0] = np.eye(2)
        return derivs


def _exp_derivatives(c: np.ndarray, order: int) -> list[np.ndarray]:
    """
    Returns the s-derivatives of exp(c(s)) up to ``order`` given the
    derivatives c = [c, c', c'', c''', c''''] by Faa di Bruno's formula.
    """
    c0, c1, c2, c3, c4 = c
    e = np.exp(c0)
    derivs = [
        e,
        c1 * e,
        (c2 + c1**2) * e,
        (c3 + 3 * c1 * c2 + c1**3) * e,
        (c4 + 4 * c1 * c3 + 3 * c2**2 + 6 * c1**2 * c2 + c1**4) * e,
    ]
    return derivs[: order + 1]


def _polynomial_derivatives(coeffs, s: np.ndarray) -> np.ndarray:
    """
    Derivatives of sum_k coeffs[k] s^k up to order four, shape (5, N).
    """
    poly = np.polynomial.Polynomial(coeffs)
    return np.stack([poly.deriv(n)(s) if n else poly(s) for n in range(5)])


def _check_amplitudes(**amplitudes: float):
    for key, value in amplitudes.items():
        if abs(value) > MAX_AMPLITUDE:
            msg = f"Amplitude {key} = {value} exceeds {MAX_AMPLITUDE}."
            raise ValueError(msg)


class ExponentialFamily(MetricFamily):
    """
    g = diag(exp(p(x)(alpha s + beta s^2 + gamma1 s^3)),
             exp(p(x)(-alpha s + beta s^2 + gamma2 s^3))).

    The alpha terms cancel in the trace, so the family is minimal, with
    h1 = 4 beta p, h2 = 6 (gamma1 + gamma2) p and k1 = diag(-alpha, alpha) p.
    """

    name = "exponential"
    closed_form = True

    def __init__(
        self,
        alpha: float = 0.5,
        beta: float = 0.25,
        gamma1: float = 0.2,
        gamma2: float = 0.1,
        profile: str = "constant",
    ):
        _check_amplitudes(
            alpha=alpha, beta=beta, gamma1=gamma1, gamma2=gamma2
        )
        self.alpha = alpha
        self.beta = beta
        self.gamma1 = gamma1
        self.gamma2 = gamma2
        self.profile = profile

    def parameters(self):
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "profile": self.profile,
        }

    def evaluate(self, points, s):
        return self.s_derivatives(points, s, order=0)[0]

    def s_derivatives(self, points, s=0.0, order=4):
        s = np.broadcast_to(np.asarray(s, dtype=float), (len(points),))
        p = profile(self.profile, points)

        first = (0, self.alpha, self.beta, self.gamma1)
        second = (0, -self.alpha, self.beta, self.gamma2)
        a = p * _polynomial_derivatives(first, s)
        b = p * _polynomial_derivatives(second, s)

        derivs = np.zeros((order + 1, len(points), 2, 2))
        derivs[:, :, 0, 0] = np.stack(_exp_derivatives(a, order))
        derivs[:, :, 1, 1] = np.stack(_exp_derivatives(b, order))
        return derivs


class ConformalFamily(MetricFamily):
    """
    g = exp(2 sigma) I with sigma = p(x)(beta s^2 + gamma s^3). Minimal with
    k1 = 0, h1 = 8 beta p and h2 = 24 gamma p.
    """

    name = "conformal"
    closed_form = True

    def __init__(
        self, beta: float = 0.25, gamma: float = 0.1, profile: str = "bump"
    ):
        _check_amplitudes(beta=beta, gamma=gamma)
        self.beta = beta
        self.gamma = gamma
        self.profile = profile

    def parameters(self):
        return {
            "beta": self.beta,
            "gamma": self.gamma,
            "profile": self.profile,
        }

    def evaluate(self, points, s):
        return self.s_derivatives(points, s, order=0)[0]

    def s_derivatives(self, points, s=0.0, order=4):
        s = np.broadcast_to(np.asarray(s, dtype=float), (len(points),))
        p = profile(self.profile, points)
        c = 2 * p * _polynomial_derivatives((0, 0, self.beta, self.gamma), s)

        derivs = np.zeros((order + 1, len(points), 2, 2))
        scale = np.stack(_exp_derivatives(c, order))
        derivs[:, :, 0, 0] = scale
        derivs[:, :, 1, 1] = scale
        return derivs


class ShearFamily(MetricFamily):
    """
    g = [[exp(beta p s^2), tau p s], [tau p s, exp(beta p s^2)]]. The first
    s-derivative is off-diagonal, so k1 = -[[0, tau], [tau, 0]] p is
    trace-free and the family is minimal.
    """

    name = "shear"
    closed_form = True

    def __init__(
        self, tau: float = 0.5, beta: float = 0.25, profile: str = "constant"
    ):
        _check_amplitudes(tau=tau, beta=beta)
        self.tau = tau
        self.beta = beta
        self.profile = profile

    def parameters(self):
        return {"tau": self.tau, "beta": self.beta, "profile": self.profile}

    def evaluate(self, points, s):
        return self.s_derivatives(points, s, order=0)[0]

    def s_derivatives(self, points, s=0.0, order=4):
        s = np.broadcast_to(np.asarray(s, dtype=float), (len(points),))
        p = profile(self.profile, points)
        c = p * _polynomial_derivatives((0, 0, self.beta), s)
        shear = p * _polynomial_derivatives((0, self.tau), s)

        derivs = np.zeros((order + 1, len(points), 2, 2))
        diag = np.stack(_exp_derivatives(c, order))
        derivs[:, :, 0, 0] = diag
        derivs[:, :, 1, 1] = diag
        derivs[:, :, 0, 1] = shear[: order + 1]
        derivs[:, :, 1, 0] = shear[: order + 1]
        return derivs


class NonminimalFamily(MetricFamily):
    """
    g = diag(exp(trace p(x) s), 1); h = trace p at s = 0, so u = 0 is not a
    solution unless ``trace`` vanishes. Used as a negative control.
    """

    name = "nonminimal"
    closed_form = True

    def __init__(self, trace: float = 1.0, profile: str = "constant"):
        self.trace = trace
        self.profile = profile

    def parameters(self):
        return {"trace": self.trace, "profile": self.profile}

    def evaluate(self, points, s):
        return self.s_derivatives(points, s, order=0)[0]

    def s_derivatives(self, points, s=0.0, order=4):
        s = np.broadcast_to(np.asarray(s, dtype=float), (len(points),))
        p = profile(self.profile, points)
        c = p * _polynomial_derivatives((0, self.trace), s)

        derivs = np.zeros((order + 1, len(points), 2, 2))
        derivs[:, :, 0, 0] = np.stack(_exp_derivatives(c, order))
        derivs[0, :, 1, 1] = 1.0
        return derivs


class NumericMetricFamily(MetricFamily):
    """
    Wraps a callable (points, s) -> g of shape (N, 2, 2); jets are computed
    by centered finite differences in s.
    """

    name = "numeric"
    closed_form = False

    def __init__(self, func: Callable[[np.ndarray, np.ndarray], np.ndarray]):
        self.func = func

    def evaluate(self, points, s):
        s = np.broadcast_to(np.asarray(s, dtype=float), (len(points),))
        return np.asarray(self.func(points, s), dtype=float)


METRIC_CATALOG: dict[str, type] = {
    "euclidean": EuclideanFamily,
    "exponential": ExponentialFamily,
    "conformal": ConformalFamily,
    "shear": ShearFamily,
    "nonminimal": NonminimalFamily,
}


def make_family(name: str, params: dict[str, Any] = None) -> MetricFamily:
    """
    Instantiates a catalog family by name.

    Parameters
    ----------
    name
        One of the keys of ``METRIC_CATALOG``.
    params
        Keyword parameters of the family.

    Returns
    -------
    MetricFamily
        The family instance.
    """
    if name not in METRIC_CATALOG:
        msg = f"Unknown metric family {name!r}; use {list(METRIC_CATALOG)}."
        raise ValueError(msg)

    try:
        return METRIC_CATALOG[name](**(params or {}))
    except TypeError as err:
        msg = f"Invalid parameters {params} for metric family {name!r}."
        raise ValueError(msg) from err
