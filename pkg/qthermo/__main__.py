import sys

from qthermo.main import main

sys.exit(main())
