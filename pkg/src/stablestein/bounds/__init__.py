from stablestein.bounds.dna import *
from stablestein.bounds.kernels import *
from stablestein.bounds.distances import *
from stablestein.bounds.bounds import *
