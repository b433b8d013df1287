"""
Command-line entry point

    python run.py analyze --params lyness
    python run.py rotor --ledger rotor_generic --json
    python run.py selftest --quick
"""
import sys

from app.controllers.cli_controller import main

if __name__ == '__main__':
    sys.exit(main())
