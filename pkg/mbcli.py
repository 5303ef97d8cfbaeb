#!/usr/bin/env python3
"""
Entry point for the maxbent command-line tool.
This script imports and runs the main client application.
"""

from bentcli.client import app

if __name__ == "__main__":
    app()
