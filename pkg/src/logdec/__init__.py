"""logdec: split-operator toolkit for 1-D quantum-decoherence models.

Propagates the logarithmic Schrodinger equation (nonlinear wavefunction
surrogate) and the Joos-Zeh master equation (reduced density matrix) with a
shared spectral Strang integrator, and compares them through ensemble width,
coherence length, fringe visibility, relative L2 error, breakdown time, and
zero-pinning diagnostics.
"""

from . import coupling, grid, jzme, logse, moments, observables, reglog, states, zeropin
from .coupling import (
    ConstantSchedule,
    InterpLinearSchedule,
    TabulatedSchedule,
    characteristic_time,
    fit_c0,
    gamma_from_width,
    gamma_interp,
    sigmoid_blend,
)
from .grid import Grid1D, dft_forward, dft_inverse, make_grid, quadrature
from .jzme import DensityState, JZMEConfig, from_wavefunction
from .logse import LogSEConfig, NumericalBreakdownError, PropagationResult
from .moments import GaussianMoments, free_width, minimum_uncertainty, step_moments
from .observables import ObservableRecord, ObservableSeries
from .reglog import DEFAULT_SCHEME, RegLogScheme, reg_ln, rel_distance
from .states import WaveState, gaussian, lorentzian, sech, twin_gaussian
from .zeropin import PinningRecord, RefillResult, pinning_witness, refill_exponent

__version__ = "0.1.0"
