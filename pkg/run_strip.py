#!/usr/bin/env python3
"""
Entry point for the strip factorization lab command line.
"""

import sys
import os

# Add src to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))


def main():
    print("=" * 60)
    print("🧮 STRIP FACTORIZATION LAB")
    print("=" * 60)
    print()
    try:
        from cli.main import main as cli_main
        status = cli_main(sys.argv[1:])
        print("-" * 60)
        return status
    except KeyboardInterrupt:
        print("\n🛑 Run stopped by user")
        return 130


if __name__ == "__main__":
    exit(main())
