"""物理常数（取自 scipy.constants）"""

from scipy import constants as _c

HBAR = _c.hbar
K_B = _c.k
C = _c.c
TWO_PI = 2.0 * _c.pi
