"""Physical constants and fixed experiment parameters."""

import math

from scipy import constants

# CODATA values
PLANCK_CONSTANT = constants.h
SPEED_OF_LIGHT = constants.c

# Noise-only readings are zero-mean amplitude-SNR estimates. The averaged
# floor has relative power scatter 1/sqrt(N), i.e. 1/(2 sqrt(N)) in
# amplitude; in sqrt(N)-scaled RMS units that is 1/(2 sqrt(2)).
NOISE_ONLY_AMPLITUDE_MEAN = 0.0
NOISE_ONLY_AMPLITUDE_STD = 1.0 / (2.0 * math.sqrt(2.0))

MIN_FIT_POINTS = 5
MIN_VALIDATION_TRIALS = 10

# Per-sample probe mean used when the ramp draws a stochastic series
STOCHASTIC_SAMPLE_MEAN = 1.0e6
STOCHASTIC_SERIES_SAMPLES = 2 ** 14

# Single-modulation demonstrations and the analyzer used for them
DEMO_MODULATIONS_RIU = (1.6e-7, 8.2e-9)
DEMO_RBW_HZ = 10.0
DEMO_VBW_HZ = 1.0
DEMO_TRACE_AVERAGES = 50
DEMO_BANDWIDTH_HZ = 10.0
