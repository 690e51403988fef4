"""Two-photon polarization tomography, Bell tests and source calibration."""

from .bell import BellRecord, BellResult, chsh_s, correlation_e, visibility
from .errors import TomoError
from .measures import MeasuresReport, measures_report, report_with_uncertainty
from .mle import MleOptions, MleResult, mle_fit
from .polarization import ProjectiveSetting, standard_settings
from .tomography import CountRecord, TomographyInput, linear_reconstruct

__version__ = "0.1.0"
