import sys

from qualitative_decision.cli import main

sys.exit(main())
