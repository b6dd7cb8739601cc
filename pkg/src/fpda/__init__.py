"""Bit-exact simulator of a reconfigurable distributed-arithmetic DSP fabric.

One shared pool of computational modules (LUTs, adders, multipliers, ...)
is reconfigured by a one-hot control word into a FIR, IIR, DWT, FFT or DCT
datapath.  Arithmetic is two's-complement fixed point throughout.
"""

from .da import DaPlan, da_eval, da_eval_batch, da_plan
from .dct import DctConfig, dct16
from .errors import CapacityError, ConfigurationError, FpdaError, FrameFormatError, OccupancyError
from .fft import FftConfig, Twiddle, complex_multiply, fft16, fft_scale
from .filters import (
    DwtConfig,
    FirConfig,
    IirConfig,
    daubechies8,
    dwt_pyramid,
    dwt_step,
    fir_filter,
    fir_step,
    iir_filter,
    iir_step,
    load_coefficients,
    qmf_holds,
)
from .fixed import Q15, CFx, Fx, FxFormat, Overflow, fx_add, fx_mul, fx_sub, quantize
from .modules import CmInventory, CmKind, lut_build, scaling_accumulate
from .reconfig import (
    ControlWord,
    Fabric,
    Function,
    RunReport,
    build_configuration,
    configure,
    decode,
    encode,
    function_inventory,
    pool_requirement,
    run,
    teardown,
)
from .signals import Channel, SignalFrame, read_signal, write_signal

__version__ = "0.1.0"
