import sys

import nrurn.logo

#rows printed between two repetitions of the header
HEADER_EVERY = 100


class Progress():
    """
    Print the progress of a long running loop as a table

    Every keyword passed to log_progress becomes a column; the values are kept
    in optimization_log for later inspection.
    """

    def __init__(self, title=None, verbose=True, index_name='iter'):

        self.optimization_log = {}
        self.title = title
        self.verbose = verbose
        self.index_name = index_name
        self.rows = 0

    def print_header(self):

        if not self.verbose:
            return

        headerline = "{0:>10s}".format(self.index_name)
        headerline += "".join("{0:>15s}".format(name) for name in sorted(self.optimization_log))

        if nrurn.logo.is_tty:
            print("\x1b[2;37m{0}\x1b[0m".format(headerline))
        else:
            print(headerline)

    def log_progress(self, index, **metrics):

        if self.rows == 0:
            if self.title is not None and self.verbose:
                print(self.title)
            self.optimization_log = dict((name, []) for name in metrics)
            self.print_header()
        elif self.rows % HEADER_EVERY == 0:
            self.print_header()

        line = "{0:>10g}".format(index)
        for name, value in sorted(metrics.items()):
            self.optimization_log[name].append(value)
            line += "{0:>15g}".format(value)
        self.rows += 1

        if self.verbose:
            print(line)
            sys.stdout.flush()
