import sys

from logcleaner.cli import main

sys.exit(main())
