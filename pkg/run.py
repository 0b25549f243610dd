#!/usr/bin/env python3
"""Entry point for Hurwitz Correlations"""
import os
import sys


def main():
    """Run the command-line interface"""
    # Add the project root to the Python path
    sys.path.append(os.path.dirname(os.path.abspath(__file__)))

    from src.app import cli
    cli(prog_name="hcn")


if __name__ == "__main__":
    main()
