import sys

from qcountsim.cli import main

sys.exit(main())
