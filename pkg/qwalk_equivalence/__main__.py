import sys

from qwalk_equivalence.cli import main

sys.exit(main())
