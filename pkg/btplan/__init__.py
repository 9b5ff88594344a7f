"""
The btplan package provides tools for working with behavior trees written by large
language models: parsing and checking their XML, repairing common defects, executing
them against scripted robots, and evaluating models on a suite of planning tasks.
"""

# initialize the configuration
from .tools.config import Config

config = Config()  # initialize the default configuration
del Config  # clean the name space

# import all other modules that should occupy the main name space
from .analysis import *  # @UnusedWildImport
from .engine import *  # @UnusedWildImport
from .harness import *  # @UnusedWildImport
from .models import *  # @UnusedWildImport
from .prompts import *  # @UnusedWildImport
from .tasks import *  # @UnusedWildImport
from .tools.config import check_package_version  # temporary import, deleted below
from .tools.config import environment
from .tools.parameters import Parameter
from .trees import *  # @UnusedWildImport
from .version import __version__

# The code below is generated by scripts/create_requirements.txt
# GENERATED CODE – anything you modify below might be overwritten automatically
check_package_version("lxml", "4.6.0")
check_package_version("numpy", "1.18.0")
check_package_version("openai", "1.0.0")
check_package_version("pydantic", "2.0.0")
check_package_version("yaml", "5.3")
del check_package_version
