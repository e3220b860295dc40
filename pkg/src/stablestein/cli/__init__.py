from stablestein.cli.config import *
from stablestein.cli.output import *
from stablestein.cli.commands import *
