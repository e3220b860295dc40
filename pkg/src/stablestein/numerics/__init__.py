from stablestein.numerics.quadrature import *
from stablestein.numerics.fourier import *
from stablestein.numerics.streams import *
