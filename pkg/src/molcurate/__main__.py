from molcurate.cli import main
import sys

sys.exit(main())
