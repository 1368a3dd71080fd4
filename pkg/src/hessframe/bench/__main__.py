import sys

from hessframe.bench.cli import main

sys.exit(main())
