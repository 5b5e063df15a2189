import sys

from fastcp.interface.cli.main import main

sys.exit(main())
