import sys

from fsrank.cli import main

sys.exit(main())
