#!/usr/bin/env python3
"""
Wrapper script for running the GTCS pooling toolkit command line.
This script provides helpful error messages when the toolkit fails to start.
"""

import sys
import traceback


def main():
    """Run the command line with error handling."""
    try:
        # Try to import the command line entry point
        from gtcs.main import main as cli_main
    except ImportError as e:
        if "numpy" in str(e) or "scipy" in str(e):
            print("\n===== ERROR: Numerical Packages Missing =====")
            print("The toolkit failed to start because numpy or scipy could not be imported.")
            print("\nPossible solutions:")
            print("1. Install the numerical stack:")
            print("   pip install numpy scipy")
            print("\n2. If they are installed, check that you are using the same Python interpreter:")
            print(f"   {sys.executable} -m pip install numpy scipy")
            print("\nFull error message:")
            print(str(e))
        elif "pydantic_settings" in str(e):
            print("\n===== ERROR: pydantic-settings Import Failed =====")
            print("Settings are loaded with pydantic-settings, which is packaged separately from pydantic.")
            print("\nPossible solutions:")
            print("1. Install it:")
            print("   pip install pydantic-settings")
            print("\n2. Update pydantic to version 2:")
            print("   pip install -U 'pydantic>=2' pydantic-settings")
            print("\nFull error message:")
            print(str(e))
        else:
            # Generic import error
            print("\n===== ERROR: Import Failed =====")
            print(f"The toolkit failed to start because of an import error: {str(e)}")
            print("\nThis might be due to missing or incompatible packages.")
            print("Try updating your dependencies:")
            print("   pip install -U -r requirements.txt")
            print("\nFull error message:")
            print(str(e))
        return 1

    try:
        return cli_main()
    except Exception as e:
        print("\n===== ERROR: Command Failed =====")
        print(f"The command failed with error: {str(e)}")
        print("\nStack trace:")
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
