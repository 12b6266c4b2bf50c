#!/usr/bin/env python3
"""
Run script for the qudecide command-line tool.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from root directory
root_dir = Path(__file__).resolve().parent.parent  # Go up one level to reach the root directory
env_path = os.path.join(root_dir, '.env')
load_dotenv(dotenv_path=env_path)

from qudecide.main import main  # noqa: E402

if __name__ == "__main__":
    raise SystemExit(main())
