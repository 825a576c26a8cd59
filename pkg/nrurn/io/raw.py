import json

import msgpack
import numpy as np

from nrurn.io.report import to_jsonable


def _pack_array(a):
    a = np.ascontiguousarray(a)
    return {b'dtype': a.dtype.str.encode(), b'shape': list(a.shape), b'data': a.tobytes()}


def _unpack_array(d):
    return np.frombuffer(d[b'data'], dtype=np.dtype(d[b'dtype'].decode())).reshape(d[b'shape'])


class UrnRaw(object):
    """Final states of every replica of an ensemble"""

    def __init__(self, Y, Y_tilde, N, meta):
        self.Y = Y
        self.Y_tilde = Y_tilde
        self.N = N
        self.meta = meta

    @property
    def replicas(self):
        return self.Y.shape[0]


def write_msgpack(outmsgpackfile, res):
    """
    :param outmsgpackfile: path to output file
    :param res: UrnRaw
    """

    out = {
        b'format': b'nrurn-raw/1',
        b'Y': _pack_array(res.Y),
        b'Y_tilde': _pack_array(res.Y_tilde),
        b'N': _pack_array(res.N),
        b'meta': json.dumps(to_jsonable(res.meta)).encode('utf-8')
    }

    with open(outmsgpackfile, 'wb') as f:
        f.write(msgpack.packb(out, use_bin_type=True))


def parse_msgpack(f):
    """
    :param f: path to a file written by write_msgpack
    :return: UrnRaw
    """

    with open(f, 'rb') as fh:
        x = msgpack.unpackb(fh.read(), raw=True)

    if x.get(b'format') != b'nrurn-raw/1':
        raise IOError("{0} is not a nrurn raw file".format(f))

    return UrnRaw(_unpack_array(x[b'Y']), _unpack_array(x[b'Y_tilde']), _unpack_array(x[b'N']),
                  json.loads(x[b'meta'].decode('utf-8')))
