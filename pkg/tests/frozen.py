"""Frozen reference values shared by the test modules.

Every constant here was computed with an independent route before the
library code existed and then frozen: 50 digit mpmath evaluations of the
alternating series, the closed form transforms, and the crossing
equation.  The tests compare library output against these numbers, never
against other library output, so a regression in one module cannot hide
behind a matching regression in another.
"""

import math

# Boundary kernel a(t) and its shifted companion a_s = a + 1/pi.
A_AT_1 = -0.09569216445851733452527
A_AT_2 = -0.2323663214225111041389
AS_AT_QUARTER = 0.318193159452254303864
AS_AT_1 = 0.2226177217252733370125
ASP_AT_QUARTER = -0.004374733190111706348298
ASP_AT_1 = -0.1882648746964470186644

# Fourier transform of a_s (convention: integral of a_s(t) e^{-i omega t}).
FOURIER_AS = {
    0.0: complex(0.5235987755982988730771, 0.0),
    0.5: complex(0.3985368153383866804336, -0.2380829570291946626419),
    1.0: complex(0.2139123232460865607221, -0.2868429493971940510157),
    5.0: complex(-0.005370816765484084534834, -0.06681255880502140386027),
}

# Laplace transform of a, closed form -1 / (sqrt(s) sinh(pi sqrt(s))).
LAPLACE_A = {
    1.0: complex(-0.08658953753004694182846, 0.0),
    4.0: complex(-0.001867449244142835984216, 0.0),
    0.1 + 2.0j: complex(0.04383679051149199172361, -0.03564080895858945857716),
}

# Imaginary-axis crossing of the boundary transfer function.
OMEGA0 = 1.133443881782732355503
BETA0 = 5.66545200562703210804
G_AT_I_OMEGA0 = -0.1765084231596669489991

# Later real-axis crossings and the gains they would require.  The gain
# alternates in sign; only the first one is a positive feedback gain.
OMEGA_CROSSINGS = (1.133443881782732355503,
                   6.125037378082704864844,
                   15.12500010969146578473)
CROSSING_GAINS = (5.66545200562703210804,
                  -302.1275162504660869687,
                  10986.33112107272862775)

SIX_OVER_PI = 1.909859317102744029227
FOUR_OVER_PI = 1.273239544735162686151

# Characteristic function z sin(pi z), z = sqrt(-lambda).
PHI_AT_MINUS_2 = -1.363164034762074293064
PHI_AT_1 = -11.54873935725774837798

# Linearized eigenvalues (leading conjugate pair) at two gains that
# bracket the crossing, frozen from the argument-principle search after
# verifying the residuals at 50 digits.
EIG_BETA_5 = complex(-0.039346212438680174, 1.0778255678277031)
EIG_BETA_6 = complex(0.01883191270725618, 1.1591704567162442)

# All six roots of Phi(lambda) = 2 with Re lambda > -30: below the
# crossing gain the second conjugate pair has already collided on the
# real axis and split, so four of the roots are real.
EIG_BETA_2 = (
    -23.6696768464537781851,
    -17.30274565715334893504,
    -7.504810081658069864499,
    -5.423296563083317323257,
    complex(-0.2624746156629566012428, -0.6862733208253993401402),
    complex(-0.2624746156629566012428, 0.6862733208253993401402),
)

# Fixed point of mu = r_alpha(mu) at alpha = 1.4.
LYAPUNOV_FP_1_4 = 0.3514042809976101234508

PI = math.pi
INV_PI = 1.0 / math.pi
