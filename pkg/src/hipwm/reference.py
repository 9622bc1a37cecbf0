"""Published reference values for the test motor and the truncated-carrier tables.

Used by the reproduction report and the acceptance tests. Hardware
measurements are kept for side-by-side display only.
"""

import math

# K -> (t1 in ms, A_M for M_bar=11, A_M for M_bar=15, A_M (1-K) for M_bar=15)
AMPLITUDE_TABLE = {
    0.2: (3.5242, 32.4700, 44.27732, 35.4218),
    0.3: (3.1550, 40.4314, 55.13370, 38.5935),
    0.4: (2.8207, 51.8016, 70.63850, 42.3831),
    0.45: (2.6599, 59.4751, 81.10240, 44.6063),
    0.5: (2.5000, 22 * math.pi, 30 * math.pi, 47.1239),
    0.55: (2.3426, 81.5109, 111.1513, 50.0181),
    0.6: (2.1835, 97.9098, 133.5134, 53.4054),
    0.7: (1.8480, 152.6484, 208.1569, 62.4471),
    0.8: (1.5153, 283.9854, 387.2528, 77.4506),
}

# stator radial frequencies (Hz): m=0 breathing, then flexural and upper branches for m=1..5
STATOR_MODES_HZ = {
    "m0": 2920.6,
    "lower": (45.0, 229.0, 547.0, 995.0, 1571.0),
    "upper": (2921.0, 4619.0, 6533.0, 8519.0),
}

# measured on hardware at 220 V RMS fundamental: (THD %, V_RMS with 75 V DC links)
MEASURED_STRATEGIES = {
    "SPWM_I": (15.0, 187.0),
    "SPWM_II": (4.52, 190.0),
    "SPWM_III": (5.73, 226.0),
}
MEASURED_TRUNCATED = {
    0.3: (8.58, 220.0),
    0.4: (7.05, 223.0),
    0.45: (4.01, 226.0),
    0.5: (4.25, 231.0),
    0.55: (4.51, 229.0),
    0.6: (5.03, 228.0),
    0.65: (5.24, 230.0),
    0.7: (5.52, 230.0),
    0.75: (6.87, 231.0),
    0.8: (7.39, 231.0),
}

# observed structural resonances of the test motor, Hz
MEASURED_RESONANCES = (1500.0, 1600.0)
