"""
API for writing and reading the CSV artifacts of xigeo with Pandas: family scans, curve samples and plot data.

Every CSV uses LF line endings, '.' as decimal separator, 17 significant digits and lowercase booleans.
"""
import logging

import numpy as np
import pandas as pd

from xigeo import constants

log = logging.getLogger(__name__)


def _format_booleans(df):
    df = df.copy()
    for column in df.columns:
        if df[column].dtype == bool:
            df[column] = df[column].map({True: "true", False: "false"})
    return df


def to_csv(df, filename=None):
    """
    Writes a dataframe in the xigeo CSV dialect

    Args:
        :df: the dataframe
        :filename: path to write to, when omitted the CSV text is returned

    Returns:
        the CSV text if no filename was given, else None
    """
    return _format_booleans(df).to_csv(filename, index=False, float_format=constants.CSV.FLOAT_FORMAT,
                                       lineterminator=constants.CSV.LINE_TERMINATOR)


def read_csv(filename, **kwds):
    """
    Reads a CSV written by to_csv back into a dataframe, with "true"/"false" parsed as booleans

    Args:
        :filename: path of the CSV
        :**kwds: You can add any additional args found in pandas.read_csv(...)

    Returns:
        A pandas dataframe
    """
    return pd.read_csv(filename, true_values=["true"], false_values=["false"], **kwds)


def scan_frame(rows):
    """
    Args:
        :rows: list of dicts keyed by constants.CSV.SCAN_COLUMNS, in scan order

    Returns:
        the scan dataframe with columns in constants.CSV.SCAN_COLUMNS order
    """
    df = pd.DataFrame(rows, columns=constants.CSV.SCAN_COLUMNS)
    for column in ("c1", "c2", "c3", "c4", "region"):
        df[column] = df[column].astype(bool)
    return df


def curve_frame(curve):
    """
    Samples of a plane curve: arclength s, position (x, y), unit tangent (tx, ty) and curvature k
    """
    return pd.DataFrame({
        "s": curve.arclength_points(),
        "x": curve.gamma[:, 0],
        "y": curve.gamma[:, 1],
        "tx": curve.tangent[:, 0],
        "ty": curve.tangent[:, 1],
        "k": curve.curvature,
    })


def plot_frame(spec, fields):
    """
    Long-form plot data: one (u, v, field, value) row per grid point and field

    Args:
        :spec: the GridSpec
        :fields: dict name -> (nu, nv) array, written in key order

    Returns:
        A pandas dataframe
    """
    u, v = spec.mesh()
    frames = []
    for name, values in fields.items():
        frames.append(pd.DataFrame({
            "u": np.ravel(u),
            "v": np.ravel(v),
            "field": name,
            "value": np.ravel(np.asarray(values, dtype=float)),
        }))
    if not frames:
        return pd.DataFrame(columns=["u", "v", "field", "value"])
    return pd.concat(frames, ignore_index=True)
