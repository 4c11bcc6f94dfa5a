import sys

from svc_tunneling.cli import main

sys.exit(main())
