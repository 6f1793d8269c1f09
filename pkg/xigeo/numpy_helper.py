"""
API for reading/writing sampled surfaces to/from SurfaceFile documents

A SurfaceFile is a JSON object {"nu", "nv", "period_u", "period_v", "x"} where x is the flat array of
4 * nu * nv reals, row-major over (u, v), component order (Re z1, Im z1, Re z2, Im z2).
"""
import json
import logging

import numpy as np

from xigeo import constants, grid, surfaces
from xigeo.exceptions import GridError, SurfaceFileError

log = logging.getLogger(__name__)

_KEYS = ("nu", "nv", "period_u", "period_v", "x")


def to_document(m):
    """
    Converts an ImmersionGrid to a SurfaceFile document

    Args:
        :m: the ImmersionGrid

    Returns:
        a dict with the SurfaceFile keys in stable order
    """
    return {
        "nu": int(m.spec.nu),
        "nv": int(m.spec.nv),
        "period_u": float(m.spec.period_u),
        "period_v": float(m.spec.period_v),
        "x": [float(value) for value in np.ravel(m.x, order="C")],
    }


def from_document(document, provenance=None):
    """
    Builds an ImmersionGrid from a SurfaceFile document

    Args:
        :document: dict with the SurfaceFile keys
        :provenance: provenance dict for the surface, {"family": "external"} when omitted

    Returns:
        an ImmersionGrid

    Raises:
        :SurfaceFileError: if keys are missing, the array has the wrong length or holds non-finite values
    """
    if not isinstance(document, dict):
        raise SurfaceFileError("SurfaceFile must be a JSON object, got: {}".format(type(document).__name__))
    missing = [key for key in _KEYS if key not in document]
    if missing:
        raise SurfaceFileError("SurfaceFile is missing keys: {}".format(missing))
    try:
        nu, nv = int(document["nu"]), int(document["nv"])
        spec = grid.GridSpec(nu, nv, float(document["period_u"]), float(document["period_v"]))
        x = np.asarray(document["x"], dtype=float)
    except (TypeError, ValueError, GridError) as err:
        raise SurfaceFileError("Malformed SurfaceFile header or array: {}".format(err))
    if x.ndim != 1 or x.size != 4 * nu * nv:
        raise SurfaceFileError("SurfaceFile array must hold 4*nu*nv = {} values, got: {}".format(4 * nu * nv, x.size))
    if not np.all(np.isfinite(x)):
        raise SurfaceFileError("SurfaceFile array holds non-finite values at flat index {}".format(
            int(np.argmin(np.isfinite(x)))))
    provenance = provenance or {"family": constants.FAMILIES.EXTERNAL}
    return surfaces.ImmersionGrid(spec, x.reshape(nu, nv, 4), provenance)


def save(filename, m):
    """
    Saves an ImmersionGrid to a SurfaceFile

    Args:
        :filename: path of the JSON file to write
        :m: the ImmersionGrid
    """
    with open(filename, "w", encoding="utf8") as f:
        json.dump(to_document(m), f)
        f.write("\n")
    log.info("Saved {}x{} surface to {}".format(m.spec.nu, m.spec.nv, filename))


def load(filename):
    """
    Reads a SurfaceFile into an ImmersionGrid

    Args:
        :filename: path of the JSON file

    Returns:
        an ImmersionGrid with provenance {"family": "external", "source": filename}

    Raises:
        :SurfaceFileError: if the file cannot be read or is malformed
    """
    try:
        with open(filename, "r", encoding="utf8") as f:
            document = json.load(f)
    except (IOError, OSError) as err:
        raise SurfaceFileError("Could not read SurfaceFile {}: {}".format(filename, err))
    except ValueError as err:
        raise SurfaceFileError("SurfaceFile {} is not valid JSON: {}".format(filename, err))
    return from_document(document, {"family": constants.FAMILIES.EXTERNAL, "source": str(filename)})
