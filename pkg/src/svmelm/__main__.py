import sys

from svmelm.cli import main

sys.exit(main())
