import json
import logging
import numpy as np
from PIL import Image
from joblib import Parallel, delayed
from tqdm import tqdm
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import UnsupportedParameterError
from common.utility import toJsonable, readTable, listTables, SCHEMA_VERSION
from modules.arithmetic.VerifyTables import read_gamma
from modules.exclusion.GammaBattery import get_battery, EXCLUDED, FREE, UNKNOWN, MARKED, VERDICT_NAMES

LOGGER = logging.getLogger('kleinian')

PALETTE = np.array([[255, 0, 0],        # excluded
                    [0, 0, 255],        # free product
                    [255, 255, 255],    # unknown
                    [0, 0, 0]],         # marked discrete
                   dtype=np.uint8)


class SliceSpec:
    """
    A window of the gamma plane at fixed beta and beta'

    Input:
        beta: beta(f)
        window: (xmin, xmax, ymin, ymax) in the gamma plane
        resolution: (width, height) in pixels
        beta_prime: beta(g), -4 for an involution
        words: Optional good words for the battery
        depth: nesting depth of word compositions
        marked: Optional gamma values painted as marked_discrete
    """

    def __init__(self, beta, window, resolution, beta_prime=-4, words=None, depth=2, marked=None):
        self.beta = complex(beta)
        self.beta_prime = complex(beta_prime)
        xmin, xmax, ymin, ymax = [float(v) for v in window]
        if xmax < xmin or ymax < ymin:
            raise UnsupportedParameterError("Window {0} is inverted".format(window))
        self.window = (xmin, xmax, ymin, ymax)
        width, height = [int(v) for v in resolution]
        if width <= 0 or height <= 0:
            raise UnsupportedParameterError("Resolution must be positive, got {0}".format(resolution))
        self.resolution = (width, height)
        self.words = None if words is None else [str(w) for w in words]
        self.depth = int(depth)
        self.marked = [complex(z) for z in (marked or [])]

    @property
    def empty(self):
        xmin, xmax, ymin, ymax = self.window
        return xmax == xmin or ymax == ymin

    @property
    def shape(self):
        if self.empty:
            return (0, 0)
        return (self.resolution[1], self.resolution[0])

    def rowGammas(self, row):
        """
        Pixel centers of one row, row 0 at the top of the window
        """
        xmin, xmax, ymin, ymax = self.window
        width, height = self.resolution
        xs = xmin + (np.arange(width) + 0.5)*(xmax - xmin)/width
        y = ymax - (row + 0.5)*(ymax - ymin)/height
        return xs + 1j*y

    def pixelOf(self, z):
        """
        (row, column) of the pixel containing z, None outside the window
        """
        xmin, xmax, ymin, ymax = self.window
        width, height = self.resolution
        if self.empty or not (xmin <= z.real <= xmax and ymin <= z.imag <= ymax):
            return None
        col = min(width - 1, int((z.real - xmin)/(xmax - xmin)*width))
        row = min(height - 1, int((ymax - z.imag)/(ymax - ymin)*height))
        return row, col

    def toDict(self):
        return {"beta": self.beta, "beta_prime": self.beta_prime, "window": list(self.window),
                "resolution": list(self.resolution), "words": self.words, "depth": self.depth,
                "marked": self.marked}


class SliceRaster:
    """
    Per-pixel verdicts of a slice with the SliceSpec that produced them
    """

    def __init__(self, spec, status, disks=None, overlay_conflicts=None):
        if status.shape != spec.shape:
            raise UnsupportedParameterError("Raster shape {0} does not match {1}".format(status.shape, spec.shape))
        self.spec = spec
        self.status = status
        self.disks = disks or []
        self.overlay_conflicts = overlay_conflicts or []

    def counts(self):
        return {VERDICT_NAMES[code]: int(np.sum(self.status == code)) for code in (EXCLUDED, FREE, UNKNOWN, MARKED)}

    def toRGB(self):
        return PALETTE[self.status]

    def write_ppm(self, path):
        """
        Writes the raster as a binary PPM and returns the path of the JSON sidecar written next to it
        """
        if self.status.size == 0:
            with open(path, 'wb') as f:
                f.write(b"P6\n0 0\n255\n")
        else:
            Image.fromarray(self.toRGB()).save(path, format="PPM")
        sidecar = path + ".json"
        with open(sidecar, 'w') as f:
            json.dump({"schema_version": SCHEMA_VERSION, "spec": toJsonable(self.spec),
                       "disks": toJsonable(self.disks), "counts": self.counts(),
                       "overlay_conflicts": toJsonable(self.overlay_conflicts)},
                      f, sort_keys=True, indent=1)
        return sidecar

    def toDict(self):
        return {"spec": self.spec, "counts": self.counts(), "disks": self.disks,
                "overlay_conflicts": self.overlay_conflicts}


def _rasterRow(spec, row):
    battery = get_battery(spec.beta, spec.words, spec.beta_prime, spec.depth)
    return battery.verdicts(spec.rowGammas(row))


def marked_from_table(table_id):
    """
    Gamma values of a shipped table, painted as marked_discrete by rasterize_slice

    Input:
        table_id: name of a table with a gamma column, e.g. plane23 or gamma3

    Output:
        gammas: list of complex values, blank cells skipped
    """
    if table_id not in listTables():
        raise UnsupportedParameterError("Unknown table {0}, choose from {1}".format(table_id, listTables()))
    frame = readTable(table_id)
    if "gamma" not in frame.columns:
        raise UnsupportedParameterError("Table {0} has no gamma column".format(table_id))
    return [read_gamma(text)[0] for text in frame.gamma if text.strip()]


def rasterize_slice(spec, n_jobs=1, verbose=False):
    """
    Runs the exclusion battery on every pixel center of the slice

    Rows are independent and are assembled in row order, so the raster does not
    depend on n_jobs.

    Input:
        spec: SliceSpec
        n_jobs: Number of joblib workers
        verbose: Show a progress bar over rows

    Output:
        raster: SliceRaster
    """
    if spec.empty:
        LOGGER.info("Empty window, nothing to render")
        return SliceRaster(spec, np.zeros((0, 0), dtype=np.uint8))

    height = spec.resolution[1]
    rows = tqdm(range(height), desc="Slice rows", disable=not verbose)
    if n_jobs == 1:
        results = [_rasterRow(spec, r) for r in rows]
    else:
        results = Parallel(n_jobs=n_jobs)(delayed(_rasterRow)(spec, r) for r in rows)
    status = np.vstack(results).astype(np.uint8)

    battery = get_battery(spec.beta, spec.words, spec.beta_prime, spec.depth)
    conflicts = []
    for z in spec.marked:
        pix = spec.pixelOf(z)
        if pix is None:
            continue
        previous = int(status[pix])
        if previous != UNKNOWN and previous != MARKED:
            conflicts.append({"gamma": z, "pixel": list(pix), "verdict": VERDICT_NAMES[previous]})
            LOGGER.warning("Marked value {0} falls on a pixel rendered {1}".format(z, VERDICT_NAMES[previous]))
        status[pix] = MARKED
    return SliceRaster(spec, status, battery.disks(), conflicts)
