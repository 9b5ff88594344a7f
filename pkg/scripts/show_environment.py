#!/usr/bin/env python3
"""
This script shows the python installation, the versions of the packages btplan uses,
and the active configuration, including values taken from environment variables.
Attach its output when reporting problems with the package.
"""

import argparse
import json
import sys
from pathlib import Path

PACKAGE_PATH = Path(__file__).resolve().parents[1]
sys.path.append(str(PACKAGE_PATH))

from btplan import environment


def main():
    parser = argparse.ArgumentParser(description="Show the btplan environment")
    parser.add_argument("--json", action="store_true", help="Print JSON")
    args = parser.parse_args()

    env = environment()
    if args.json:
        print(json.dumps(env, indent=2, default=str))
        return

    for category, data in env.items():
        if hasattr(data, "items"):
            print(f"\n{category}:")
            for key, value in data.items():
                print(f"    {key}: {value}")
        else:
            data_formatted = str(data).replace("\n", "\n    ")
            print(f"{category}: {data_formatted}")


if __name__ == "__main__":
    main()
