from stablestein.stein.functions import *
from stablestein.stein.operators import *
from stablestein.stein.identity import *
