from stablestein.stable.params import *
from stablestein.stable.levy import *
from stablestein.stable.cf import *
from stablestein.stable.density import *
from stablestein.stable.sample import *
