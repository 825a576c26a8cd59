__version__ = '1.0.0'

import datetime
import os

import nrurn.io as io
from nrurn.asymptotics import classify_regime
from nrurn.dynamics import run_trajectory
from nrurn.errors import RegimeError
from nrurn.montecarlo import run_ensemble, convergence_diagnostic, clt_diagnostic
from nrurn.sanity_check import verify_accounting


class UrnExperiment():
    """
    NRUrnPy simulates negatively reinforced balanced urns: a colour is drawn with probability
    proportional to w(proportion of the colour) for a non-increasing weight function w, and the
    row of the replacement matrix R belonging to the drawn colour is added to the urn.
    The experiment analyses the mean field dynamics of a configuration (equilibria, stability,
    scaling regime, limiting covariances), simulates it and verifies the predictions by Monte Carlo.
    """

    def __init__(self, config, out_dir=None, emit=None):

        self.config = config
        self.out_dir = out_dir if out_dir is not None else config.outputs.get('dir', '.')
        self.emit = emit or config.outputs.get('emit', 'both')

        #results
        self.report = None
        self.trajectory = None
        self.trajectory_accounting = None
        self.ensemble = None
        self.convergence = None
        self.clt = None
        self.clt_tilde = None
        self.criteria = []

        #written files
        self.files = []
        self.out_binary_raw_file = None

    def __repr__(self):

        def walk_dict(d, depth=24, repr_str=""):
            for k, v in sorted(d.items()):
                if isinstance(v, dict):
                    repr_str += "\n{0:>{1}}\n".format(k, depth)
                    repr_str += walk_dict(v, depth, "")
                else:
                    repr_str += "{0:>{1}}: {2:>8}\n".format(k, depth, str(v))
            return repr_str

        return walk_dict(self.create_meta_data())

    def create_meta_data(self):

        meta = {}

        meta['version'] = __version__
        meta['method'] = 'nrurn-py'
        meta['config_hash'] = self.config.config_hash()
        meta['seed'] = self.config.seed

        meta['workflow'] = []
        meta['workflow'].append({})
        meta['workflow'][0]['timestamp'] = str(datetime.datetime.now())
        meta['workflow'][0]['config'] = self.config.to_dict()

        if self.report is not None:
            meta['workflow'][0]['analysis'] = {
                'b': self.report.b,
                'rho': self.report.rho,
                'nu': self.report.nu,
                'regime': self.report.regime,
                'scaling': self.report.scaling.describe()
            }

        if self.criteria:
            meta['workflow'][0]['results'] = {}
            meta['workflow'][0]['results']['passed'] = self.passed
            meta['workflow'][0]['results']['criteria'] = dict((c['name'], c['passed']) for c in self.criteria)

        return meta

    def header(self):
        """Reproducibility block of every output file"""
        return {'version': __version__, 'config_hash': self.config.config_hash(), 'seed': self.config.seed}

    def _meta(self):
        meta = self.header()
        meta['workflow'] = self.create_meta_data()['workflow']
        return meta

    def _path(self, name):
        if not os.path.isdir(self.out_dir):
            os.makedirs(self.out_dir)
        return os.path.join(self.out_dir, name)

    def analyze(self, verbose=False):
        """Mean field analysis of the configuration"""

        print("\nAnalysing k={0} colours with {1}.".format(self.config.k, self.config.weight))
        self.report = classify_regime(self.config.weight, self.config.R, y0=self.config.U0, verbose=verbose)
        print("b={0:g} rho={1:g} nu={2} regime={3} stable={4}".format(
            self.report.b, self.report.rho, self.report.nu, self.report.regime, self.report.stability.stable))
        for note in self.report.notes:
            print("Note: {0}".format(note))

        return self.report

    def simulate(self, replica=0):
        """Single trajectory with accounting check"""

        print("\nSimulating replica {0} (seed={1}) up to n={2}.".format(replica, self.config.seed, self.config.n_max))
        self.trajectory = run_trajectory(self.config, replica=replica)
        self.trajectory_accounting = verify_accounting(self.trajectory)

        return self.trajectory

    def verify(self, verbose=True):
        """Run the ensemble and compare it with the analysis"""

        if self.report is None:
            self.analyze()

        thresholds = self.config.thresholds
        report = self.report

        self.ensemble = run_ensemble(self.config, report, verbose=verbose)
        self.criteria = []

        accounting = self.ensemble.accounting
        self._criterion("accounting", accounting['passed'],
                        "max linear residual={0:g}, max ||M R||^2={1:g}".format(
                            accounting['checks']['linear']['max_residual'],
                            accounting['checks']['martingale']['max_residual']))

        if report.y_limit is not None and len(self.ensemble.n) >= 3:
            self.convergence = convergence_diagnostic(self.ensemble, epsilon=thresholds['epsilon'])

            doubly_stochastic = self.config.R.doubly_stochastic
            if report.contraction.contraction or (doubly_stochastic and report.stability.stable):
                self._criterion(
                    "convergence",
                    self.convergence['final_mean_distance'] <= thresholds['epsilon'] and
                    self.convergence['fraction_within'] >= thresholds['convergence_fraction'],
                    "final mean distance={0:g}, fraction within {1:g}={2:g}".format(
                        self.convergence['final_mean_distance'], thresholds['epsilon'],
                        self.convergence['fraction_within']))
            elif doubly_stochastic:
                self._criterion(
                    "non-convergence fraction below threshold",
                    self.convergence['fraction_within'] < thresholds['nonconvergence_fraction'],
                    "fraction within {0:g}={1:g} (threshold {2:g}, last decade ratio={3:g})".format(
                        thresholds['epsilon'], self.convergence['fraction_within'],
                        thresholds['nonconvergence_fraction'], self.convergence['last_decade_ratio']))

        if report.clt_applicable and self.config.n_max > 1:
            try:
                self.clt = clt_diagnostic(self.ensemble)
                self.clt_tilde = clt_diagnostic(self.ensemble, tilde=True)
            except RegimeError as e:
                #e.g. R = J/k, where the limit is deterministic
                print("Note: covariance criteria skipped ({0})".format(e))
                return self.passed
            self._criterion("covariance", self.clt['covariance_pass'],
                            "relative error={0:g} (threshold {1:g})".format(
                                self.clt['covariance_error'], self.clt['covariance_threshold']))
            self._criterion("covariance_tilde", self.clt_tilde['covariance_pass'],
                            "relative error={0:g} (threshold {1:g})".format(
                                self.clt_tilde['covariance_error'], self.clt_tilde['covariance_threshold']))
            self._criterion("KS", self.clt['ks_pass'],
                            "max KS distance={0:g} (threshold {1:g})".format(
                                self.clt['ks_max'], self.clt['ks_threshold']))

        return self.passed

    def _criterion(self, name, passed, detail):
        passed = bool(passed)
        self.criteria.append({'name': name, 'passed': passed, 'detail': detail})
        print("{0} {1}: {2}".format("PASS" if passed else "FAIL", name, detail))

    @property
    def passed(self):
        return all(c['passed'] for c in self.criteria)

    def write_report(self):
        self.files += io.report.write_table(self._path("report"), self.report.to_dict(), None, self._meta(),
                                            emit=self.emit)

    def write_trajectory(self):
        self.files.append(self._path("trajectory.csv"))
        io.report.write_csv(self.files[-1], self.trajectory.to_dataframe(), self._meta())

    def write_ensemble(self):

        summary = self.ensemble.to_dict()
        summary['criteria'] = self.criteria
        summary['convergence'] = self.convergence
        summary['clt'] = self.clt
        summary['clt_tilde'] = self.clt_tilde
        summary['notes'] = list(self.report.notes)

        self.files += io.report.write_table(self._path("ensemble"), summary, self.ensemble.to_dataframe(),
                                            self._meta(), emit=self.emit)

    def write_binary_raw(self, out_binary_raw_file):
        """
        Write the final state of every replica including meta data to a msgpack-formatted binary raw file

        :param out_binary_raw_file: path to out file
        """

        self.out_binary_raw_file = out_binary_raw_file
        ensemble = self.ensemble

        raw_out = io.raw.UrnRaw(ensemble.Y[:, -1], ensemble.Y_tilde[:, -1], ensemble.N[:, -1], self._meta())
        print("\nWriting msgpack-formatted final states to {0}".format(out_binary_raw_file))
        io.raw.write_msgpack(out_binary_raw_file, raw_out)
