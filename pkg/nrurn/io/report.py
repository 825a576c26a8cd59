import json
import os

import numpy as np
import pandas as pd

META_PREFIX = "#>META> "


def to_jsonable(obj):
    """Nested lists/dicts of plain numbers; complex as {re, im}, non finite floats as null"""

    if isinstance(obj, dict):
        return dict((str(k), to_jsonable(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {'re': to_jsonable(float(np.real(obj))), 'im': to_jsonable(float(np.imag(obj)))}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    return obj


def flatten(record, prefix=""):
    """
    Flatten a report into one row: nested keys joined with '.', matrices and vectors
    as indexed columns name_i / name_ij (1-based)
    """

    row = {}
    for key, value in record.items():
        name = prefix + key
        if isinstance(value, dict):
            row.update(flatten(value, name + "."))
        elif isinstance(value, list):
            for i, item in enumerate(value):
                if isinstance(item, list):
                    for j, entry in enumerate(item):
                        row["{0}_{1}{2}".format(name, i + 1, j + 1)] = entry
                elif isinstance(item, dict):
                    row.update(flatten(item, "{0}_{1}.".format(name, i + 1)))
                else:
                    row["{0}_{1}".format(name, i + 1)] = item
        else:
            row[name] = value
    return row


def write_json(json_file, data, meta):

    print("Writing {0}".format(json_file))

    doc = {'meta': to_jsonable(meta)}
    doc.update(to_jsonable(data))
    with open(json_file, "w") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")


def read_json(json_file):
    """
    :return: data and meta dict
    """

    if not os.path.exists(json_file):
        raise IOError("JSON file " + str(json_file) + " cannot be found.")

    with open(json_file) as f:
        data = json.load(f)

    meta = data.pop('meta', {})
    return data, meta


def write_csv(csv_file, df, meta):
    """Write a data frame with the meta data as leading #>META> line"""

    print("Writing {0}".format(csv_file))

    with open(csv_file, "w") as f:
        f.write(META_PREFIX + json.dumps(to_jsonable(meta), sort_keys=True) + "\n")
        df.to_csv(f, index=False)


def read_csv(csv_file):
    """
    :return: data frame and meta dict
    """

    if not os.path.exists(csv_file):
        raise IOError("CSV file " + str(csv_file) + " cannot be found.")

    df = pd.read_csv(csv_file, comment="#")

    meta = {}
    with open(csv_file) as f:
        for line in f:
            if line.startswith(META_PREFIX):
                meta = json.loads(line[len(META_PREFIX):])

    if len(meta) == 0:
        print(str(csv_file) + " does not contain META info. (Line must start with #>META>)")

    return df, meta


def write_table(basename, record, df, meta, emit="both"):
    """
    Write a result as basename.json and/or basename.csv

    :param record: dict written to JSON
    :param df:     data frame written to CSV (flattened record if None)
    :param emit:   json, csv or both
    :return: list of written files
    """

    written = []
    if emit in ("json", "both"):
        write_json(basename + ".json", record, meta)
        written.append(basename + ".json")
    if emit in ("csv", "both"):
        if df is None:
            df = pd.DataFrame([flatten(to_jsonable(record))])
        write_csv(basename + ".csv", df, meta)
        written.append(basename + ".csv")
    return written
