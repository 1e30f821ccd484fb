import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_runtest_logreport(report):
    # One explicit pass/fail line per acceptance check.
    if report.when == 'call' and 'test_acceptance' in report.nodeid:
        outcome = 'PASS' if report.passed else 'FAIL'
        sys.stderr.write('%s %s\n' % (outcome, report.nodeid))
        sys.stderr.flush()
