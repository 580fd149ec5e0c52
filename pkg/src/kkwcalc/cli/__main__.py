import sys

from kkwcalc.cli.app import main

sys.exit(main())
