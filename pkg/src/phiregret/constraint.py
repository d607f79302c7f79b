"""Two-stage projection onto stochastic matrices and the matching gradient map.

Stage 1 clips negative entries to zero; stage 2 normalises each row by its
L1 norm (a zero row becomes uniform). Gradients travel back the other way:
each row is centred against the proper prediction's row, then entries that
were clipped in stage 1 only keep their negative part.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class ProjectionRecord:
    phi_improper: np.ndarray
    phi_plus: np.ndarray
    phi_proper: np.ndarray

    @property
    def kept(self):
        """Entries that stage 1 left untouched."""
        return self.phi_improper >= 0.0


def project(phi_improper):
    phi_improper = np.asarray(phi_improper, dtype=float)
    n = phi_improper.shape[0]
    phi_plus = np.maximum(phi_improper, 0.0)
    norms = phi_plus.sum(axis=1)
    zero = norms == 0.0
    safe = np.where(zero, 1.0, norms)
    proper = phi_plus / safe[:, None]
    proper[zero] = 1.0 / n
    return ProjectionRecord(phi_improper, phi_plus, proper)


def process_gradient(g_bar, rec):
    """Map the proper-domain gradient to the one seen by the improper learner."""
    g_bar = np.asarray(g_bar, dtype=float)
    centre = np.einsum("ij,ij->i", g_bar, rec.phi_proper)
    g_plus = g_bar - centre[:, None]
    return np.where(rec.kept, g_plus, np.minimum(g_plus, 0.0))
