import sys
import configparser
import hashlib
import json
import logging
import math
import os.path
import re
import platform
if platform.system() != 'Windows':
    import fcntl

import numpy as np
import pandas as pd

from common.errors import UnsupportedParameterError

ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA_DIR = os.path.join(ROOT_DIR, 'data', 'tables')
SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 12
THREADS_ENV = 'KLEINIAN_THREADS'

LOGGER = logging.getLogger('kleinian')


def set_logging(verbose=True):
    """
    Configures the root logger the same way for the CLI and the batch scripts

    Input:
        verbose: INFO level when True, WARNING otherwise
    """
    logging.basicConfig(
        format="%(message)s",
        level=logging.INFO if verbose else logging.WARN)


def readConfig(path, configFile=None):
    """
    Reads the settings.ini file located at the specified directory path
    If no file is found the system is exited

    Input:
        path: String path to the directory
        configFile: Optional explicit path, overrides path

    Output:
        config: A ConfigParser holding the configuration settings
    """

    config = configparser.ConfigParser(inline_comment_prefixes='#')
    if configFile is None:
        configFile = os.path.join(path, 'settings.ini')

    if(os.path.isfile(configFile)):
        config.read(configFile)
        return config
    else:
        print("Error loading configuration file:\n{0}\n Exiting....".format(configFile), file=sys.stderr)
        sys.exit(2)


def writeConfig(path, updateValues, cfgFile=None):
    """
    Writes to the settings.ini file located at the specified directory path
    If no file is found the system is exited

    Input:
        path: String path to the directory
        updateValues: List of (section, key, value) tuples. (section, None, None) clears the section
        cfgFile: Optional explicit path, overrides path
    """
    config = configparser.ConfigParser(inline_comment_prefixes='#')
    if cfgFile is not None:
        configFile = cfgFile
    else:
        configFile = os.path.join(path, 'settings.ini')
    if(os.path.isfile(configFile)):
        config.read(configFile)

        for values in updateValues:
            if (values[1] is None) and (values[2] is None):
                config.remove_section(values[0])
                config.add_section(values[0])
            else:
                if values[0] != 'DEFAULT' and not config.has_section(values[0]):
                    config.add_section(values[0])
                config.set(values[0], values[1], str(values[2]))
        with open(configFile, 'w') as configfile:
            if sys.platform == 'linux':
                fcntl.flock(configfile.fileno(), fcntl.LOCK_EX)
            config.write(configfile)

        LOGGER.info("Updated configuration file: {}".format(configFile))
    else:
        print("Error loading configuration file:\n{0}\n Exiting....".format(configFile), file=sys.stderr)
        sys.exit(2)


def getSetting(config, section, key, cast=float, fallback=None):
    """
    Typed lookup in a ConfigParser, falling back when the section or key is absent
    """
    if config is None or not config.has_option(section, key):
        return fallback
    raw = config.get(section, key)
    if cast is bool:
        return raw.strip().lower() in ('1', 'true', 'yes', 'on')
    return cast(raw)


def threadCount():
    """
    Number of worker processes, from the KLEINIAN_THREADS variable or the core count
    """
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            LOGGER.warning("Ignoring malformed {0}={1}".format(THREADS_ENV, raw))
    return os.cpu_count() or 1


def fmt12(x):
    """
    Rounds a float to 12 significant digits so printed output is stable
    """
    x = float(x)
    if x == 0.0 or not math.isfinite(x):
        return x
    return float('{0:.{1}g}'.format(x, SIGNIFICANT_DIGITS))


def toJsonable(obj):
    """
    Recursively converts numpy scalars, complex numbers and containers into JSON friendly objects
    """
    if hasattr(obj, 'toDict'):
        return toJsonable(obj.toDict())
    if isinstance(obj, dict):
        return {str(k): toJsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [toJsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [toJsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": toJsonable(float(obj.real)), "im": toJsonable(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        value = fmt12(obj)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return None
        return value
    return obj


def dumpJson(obj, command=None):
    """
    Serialises a result into the versioned JSON document printed by the CLI
    """
    doc = {"schema_version": SCHEMA_VERSION}
    if command is not None:
        doc["command"] = command
    doc["result"] = toJsonable(obj)
    return json.dumps(doc, sort_keys=True, indent=1)


def parseComplex(text):
    """
    Parses a complex number written with either i or j as the imaginary unit

    Example: parseComplex("-1.5+0.6066i") -> (-1.5+0.6066j)
    """
    if isinstance(text, (int, float, complex, np.number)):
        return complex(text)
    s = re.sub(r'\s+', '', str(text)).replace('I', 'j').replace('i', 'j')
    s = re.sub(r'(^|[+-])j', r'\g<1>1j', s)
    try:
        return complex(s)
    except ValueError:
        raise UnsupportedParameterError("Cannot parse complex number: {0}".format(text))


def parseFloatList(text, sep=','):
    try:
        return [float(v) for v in str(text).split(sep) if v.strip() != '']
    except ValueError:
        raise UnsupportedParameterError("Cannot parse number list: {0}".format(text))


def formatComplex(z, digits=SIGNIFICANT_DIGITS):
    z = complex(z)
    sign = '+' if z.imag >= 0 else '-'
    return "{0:.{2}g}{1}{3:.{2}g}i".format(z.real, sign, digits, abs(z.imag))


def readTable(name, dataDir=None):
    """
    Loads one of the shipped reference tables

    Input:
        name: Table file name without the .csv suffix
        dataDir: Optional directory, defaults to data/tables

    Output:
        df: pandas DataFrame with all columns read as strings
    """
    path = os.path.join(dataDir or DATA_DIR, name + '.csv')
    if not os.path.isfile(path):
        raise FileNotFoundError("Reference table not found: {0}".format(path))
    return pd.read_csv(path, dtype=str, keep_default_na=False)


def writeCsv(df, path=None):
    """
    Writes a DataFrame with a header row. Returns the CSV text when path is None
    """
    if path is None:
        return df.to_csv(index=False, lineterminator='\n')
    df.to_csv(path, index=False, lineterminator='\n')
    return path


def tableDigest(name, dataDir=None):
    """
    SHA-256 hex digest of a shipped table file
    """
    path = os.path.join(dataDir or DATA_DIR, name + '.csv')
    with open(path, 'rb') as f:
        return hashlib.sha256(f.read()).hexdigest()


def listTables(dataDir=None):
    return sorted(f[:-4] for f in os.listdir(dataDir or DATA_DIR) if f.endswith('.csv'))


def verifyChecksums(dataDir=None):
    """
    Compares every table against the digests pinned in checksums.json

    Output:
        report: dict table -> {"expected", "actual", "ok"}
    """
    dataDir = dataDir or DATA_DIR
    with open(os.path.join(dataDir, 'checksums.json')) as f:
        pinned = json.load(f)
    report = {}
    for name in sorted(set(pinned) | set(listTables(dataDir))):
        actual = tableDigest(name, dataDir) if os.path.isfile(os.path.join(dataDir, name + '.csv')) else None
        report[name] = {"expected": pinned.get(name), "actual": actual, "ok": actual is not None and actual == pinned.get(name)}
        if not report[name]["ok"]:
            LOGGER.warning("Checksum mismatch for table {0}".format(name))
    return report
