"""Module entry point: python -m phasegrover."""

from .cli import entry

if __name__ == "__main__":
    entry()
