"""Capacity-distortion limits of a representation-limited ISAC transmitter
paired with a port-selection fluid-antenna receiver.

Core pieces: the budget-to-noise equivalence (`bottleneck`), spatially
correlated channel synthesis and port selection (`channel`, `kernels`),
Monte Carlo and quadrature metrics (`metrics`), spatial degrees of freedom
and diversity fits (`dof`), fixed-antenna baselines (`baselines`), and sweep
orchestration with CSV emission (`experiments`, `cli`).
"""

__version__ = "0.1.0"

from .bottleneck import (  # noqa: F401
    AiBudget,
    SystemParams,
    ai_distortion_floor,
    ai_rate_ceiling,
    ai_snr_ceiling,
    effective_snr,
    representation_noise_variance,
)
from .channel import (  # noqa: F401
    ChannelDraw,
    FasGeometry,
    PortSelection,
    SpatialCorrelation,
    build_jakes_correlation,
    draw_channels,
    select_port,
)
from .metrics import (  # noqa: F401
    MonteCarloEstimate,
    RegionPoint,
    distortion_of_draw,
    estimate_region_point,
    independent_ports_quadrature,
    mmse_oracle,
    rate_of_draw,
)
