import nrurn.io.config
import nrurn.io.report
import nrurn.io.raw
