"""Entry point when running package as module: python -m generalized_turan."""

import sys

from generalized_turan.main import main

if __name__ == "__main__":
    sys.exit(main())
