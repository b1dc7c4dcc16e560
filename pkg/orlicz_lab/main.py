import sys
from typing import List, Optional

from orlicz_lab.cli.router import dispatch


def main(argv: Optional[List[str]] = None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
