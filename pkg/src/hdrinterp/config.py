""" Define and create an hdrinterp configuration

Importing this loads configuration data for hdrinterp runs. Default settings
come from the `data/defaults.yaml` file shipped with the package. If a project
file named 'hdrinterp.yaml' is found in the current working directory or its
parent, its sections override the defaults. A different file can be given
later with `conf.get_config(path)` (the CLI does this for `--config`). This
should be imported to all hdrinterp modules that need default parameters.

Creates a 'conf' object (HdrConfig class) containing one dictionary per
configuration section:
    radiometry (dict): camera response settings (gamma)
    tonemap (dict): mu-law and Reinhard parameters
    merge (dict): attention weight floor and saturation/dark thresholds
    flow (dict): pyramid optical flow and visibility settings
    metrics (dict): PSNR cap for identical frames
    dataset (dict): default bit depth, patch size and sensor noise
    run (dict): seed, worker threads and verbosity
    cpath (string): path of the user configuration file, if any

Messages go to stderr so that stdout and output files stay clean.
"""

import os
import sys
import copy
from ruamel.yaml import YAML
yaml = YAML(typ='safe')

from hdrinterp.errors import ConfigError

# Initialize some default path names
conf_file_default = "hdrinterp.yaml"
defaults_path = os.path.join(os.path.dirname(os.path.abspath(__file__)),
        'data', 'defaults.yaml')

sections = ('radiometry', 'tonemap', 'merge', 'flow', 'metrics', 'dataset',
        'run')

# Get the user configuration path. If `hdrinterp.yaml` is in the cwd or its
# parent, it is loaded on top of the defaults.
if os.path.isfile(conf_file_default):
    parent_cpath = os.path.join(os.getcwd(), conf_file_default)
elif os.path.isfile(os.path.join('..', conf_file_default)):
    parent_cpath = os.path.join(os.path.dirname(os.getcwd()),
            conf_file_default)
else:
    parent_cpath = None


# Class for color terminal output
class tcol:
    """
    Simple class defining terminal colors for hdrinterp messages
    """
    OKGREEN = '\033[92m'
    WARNING = '\033[93m'
    FAIL = '\033[91m'
    ENDC = '\033[0m'


def read_yaml(path):
    """
    Load a YAML file into a dictionary (empty files give an empty dict)
    """
    with open(path, 'r') as stream:
        loaded = yaml.load(stream)
    if loaded is None:
        return {}
    if not isinstance(loaded, dict):
        raise ConfigError('YAML file {0} does not contain a mapping'.format(
            path))
    return loaded


class HdrConfig(object):
    """
    hdrinterp configuration class
    """

    def __init__(self, *args):
        """
        Create an HdrConfig object holding the packaged defaults
        """
        self.defaults = read_yaml(defaults_path)
        self.cpath = None
        self.reset()
        if len(args) > 0:
            self.cpath = args[0]
        elif parent_cpath is not None:
            self.cpath = parent_cpath

    def reset(self):
        """
        Restore every section to the packaged defaults
        """
        for s in sections:
            setattr(self, s, copy.deepcopy(self.defaults[s]))

    def get_config(self, *args):
        """
        Method to assign the class 'cpath' variable and fetch the configuration
        """
        if len(args) > 0:
            self.cpath = args[0]
        if self.cpath is not None:
            self.fetch_config()

    def fetch_config(self):
        """
        Method to merge the user configuration at 'cpath' over the defaults
        """
        if not os.path.isfile(self.cpath):
            raise ConfigError('Configuration file {0} not found'.format(
                self.cpath))
        user_c = read_yaml(self.cpath)
        self.reset()
        for s, items in user_c.items():
            if s not in sections:
                raise ConfigError('Unknown configuration section "{0}" in '
                        '{1}'.format(s, self.cpath))
            if items is None:
                continue
            unknown = [k for k in items if k not in self.defaults[s]]
            if unknown:
                raise ConfigError('Unknown keys {0} in section "{1}"'.format(
                    unknown, s))
            getattr(self, s).update(items)
        message('Configuration loaded from {0}'.format(self.cpath), level=2)

    @property
    def verbosity(self):
        return int(self.run['verbosity'])

    @property
    def threads(self):
        """
        Worker count for frame-level maps ('auto' uses every CPU)
        """
        n = self.run['threads']
        if n in (None, 'auto'):
            return os.cpu_count() or 1
        n = int(n)
        if n < 1:
            raise ConfigError('threads must be a positive integer or auto')
        return n


def message(text, level=1, color=None):
    """
    Print a progress message to stderr if verbosity allows it
    """
    if conf.verbosity < level:
        return
    if color is not None and sys.stderr.isatty():
        text = color + text + tcol.ENDC
    print(text, file=sys.stderr)


def warn(text):
    message(text, level=0, color=tcol.WARNING)


def error(text):
    """Errors print at any verbosity"""
    if sys.stderr.isatty():
        text = tcol.FAIL + text + tcol.ENDC
    print(text, file=sys.stderr)


# Create the HdrConfig object
conf = HdrConfig()
conf.get_config()
