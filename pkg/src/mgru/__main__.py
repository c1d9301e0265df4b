import sys

from mgru.cli import main

sys.exit(main())
