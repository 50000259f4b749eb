import sys

from fomc_dissent.cli import main

sys.exit(main())
