from stablestein.semigroup.context import *
from stablestein.semigroup.semigroup import *
from stablestein.semigroup.solve import *
