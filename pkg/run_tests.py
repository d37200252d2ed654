"""
folbound test runner

Runs the whole pytest suite from the project root and returns its exit code.
"""

import os
import sys

import pytest


def run_tests(extra_args=None):
    """Run every test under tests/."""
    script_dir = os.path.dirname(os.path.abspath(__file__))
    os.chdir(script_dir)
    return pytest.main(["tests", "-v"] + list(extra_args or []))


if __name__ == "__main__":
    sys.exit(run_tests(sys.argv[1:]))
