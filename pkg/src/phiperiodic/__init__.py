"""Variational multiplicity toolkit for periodic phi-Laplacian problems.

Discrete action functionals on slope-bounded periodic trajectories, a
multi-start minimizer with a two-minima certificate, hypothesis checks and
a supergradient search for perturbations producing two global minima.
"""
__version__ = "0.1.0"

from ._kernels import BACKEND
from .action import (Objective, PerturbCoeffs, SaddleProblem, J_eval, J_grad, action_I,
                     cell_pairing, g_pairing)
from .errors import *  # noqa: F401,F403
from .expr import Expression, parse
from .minimize import Options, local_min, multi_start
from .potentials import KineticPotential, PerturbShape, TimePotential, check_class_A, phi_inverse
from .saddle import PerturbFamily, minimax_gap, outer_value, prop2A_check, saddle_search
from .trajectory import Trajectory, make_constant, random_k_member
from .verify import convergence_study, el_residual
