import sys

from cbsimplex.cli import main

sys.exit(main())
