"""One-dimensional comparator-adaptive online linear optimisation.

The learner bets with the exponential potential
``eps * exp(S**2 / (2 V))`` where ``S`` is the negated gradient sum and
``V = 2 (G**2 + G * sum |c|)`` grows with the absolute gradient mass, which
gives the first-order (``sum |c|`` rather than ``G**2 T``) adaptivity. The
prediction is the derivative of the potential in ``S``.

``ScalarLearner`` is a single instance; ``ScalarLearnerBank`` runs many
independent instances as numpy arrays and is what the matrix learner uses.
"""

import math

import numpy as np

EXP_CAP = 700.0


class GradientOutOfRange(ValueError):
    pass


def bet(neg_grad_sum, abs_sum, eps, G):
    """Prediction for the given sufficient statistics (vectorised)."""
    V = 2.0 * (G * G + G * abs_sum)
    S = neg_grad_sum
    return eps * (S / V) * np.exp(np.minimum(S * S / (2.0 * V), EXP_CAP))


def regret_guarantee(abs_sum, u, eps, G):
    """Regret guarantee against comparator ``u`` after gradient mass ``abs_sum``."""
    u = abs(u)
    scale = math.sqrt(G * G + G * abs_sum)
    log_term = math.sqrt(math.log1p(u / (math.sqrt(2.0) * eps)))
    return scale * (2.0 * eps + 2.0 * math.sqrt(2.0) * u * log_term + 4.0 * math.sqrt(2.0) * u)


class ScalarLearner:
    def __init__(self, eps=1.0, G=1.0):
        if eps <= 0 or G <= 0:
            raise ValueError("eps and G must be positive")
        self.eps = float(eps)
        self.G = float(G)
        self.grad_sum = 0.0
        self.abs_sum = 0.0
        self.round = 0

    def predict(self):
        return float(bet(-self.grad_sum, self.abs_sum, self.eps, self.G))

    def update(self, c):
        if not abs(c) <= self.G + 1e-12:
            raise GradientOutOfRange(f"|{c}| exceeds G={self.G}")
        self.grad_sum += c
        self.abs_sum += abs(c)
        self.round += 1

    def exponent(self):
        V = 2.0 * (self.G ** 2 + self.G * self.abs_sum)
        return self.grad_sum ** 2 / (2.0 * V)

    def guarantee(self, u):
        return regret_guarantee(self.abs_sum, u, self.eps, self.G)


class ScalarLearnerBank:
    """``len(eps)`` independent scalar learners sharing one Lipschitz constant."""

    def __init__(self, eps, G=2.0):
        self.eps = np.asarray(eps, dtype=float).copy()
        if np.any(self.eps <= 0):
            raise ValueError("every eps must be positive")
        self.G = float(G)
        self.grad_sum = np.zeros_like(self.eps)
        self.abs_sum = np.zeros_like(self.eps)
        self.round = 0

    def __len__(self):
        return self.eps.shape[0]

    def predict(self):
        return bet(-self.grad_sum, self.abs_sum, self.eps, self.G)

    def update(self, c):
        c = np.asarray(c, dtype=float)
        worst = np.max(np.abs(c)) if c.size else 0.0
        if not worst <= self.G + 1e-12:
            i = int(np.argmax(np.abs(c)))
            raise GradientOutOfRange(f"learner {i} got gradient {c[i]}, |c| > G={self.G}")
        self.grad_sum += c
        self.abs_sum += np.abs(c)
        self.round += 1

    def exponents(self):
        V = 2.0 * (self.G ** 2 + self.G * self.abs_sum)
        return self.grad_sum ** 2 / (2.0 * V)
