"""Double-precision constants shared by both scan kernels."""

import math

from .numkernel import bernoulli

MAX_TERMS = 40

# B_2k / (2k)!, index 0 unused
BERN_OVER_FACT = [0.0] + [float(bernoulli(2 * k) / math.factorial(2 * k)) for k in range(1, MAX_TERMS + 1)]
