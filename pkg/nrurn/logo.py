import sys

import nrurn

is_tty = (sys.stdin.isatty()) and (sys.stdout.isatty())


def logo(color=is_tty):
    version = nrurn.__version__

    if color:
        print(" _   _ ____  \x1b[30;42m_   _\x1b[0m")
        print("| \\ | |  _ \\\x1b[30;42m| | | |\x1b[0m_ __ _ __")
        print("|  \\| | |_) \x1b[30;42m| | | |\x1b[0m '__| '_ \\")
        print("| |\\  |  _ <\x1b[30;42m| |_| |\x1b[0m |  | | | |")
        print("|_| \\_|_| \\_\\\x1b[30;44m\\___/|_|  |_| |_|\x1b[0m version {0}\n".format(version))
    else:
        print(" _   _ ____  _   _")
        print("| \\ | |  _ \\| | | |_ __ _ __")
        print("|  \\| | |_) | | | | '__| '_ \\")
        print("| |\\  |  _ <| |_| | |  | | | |")
        print("|_| \\_|_| \\_\\\\___/|_|  |_| |_| version {0}\n".format(version))
