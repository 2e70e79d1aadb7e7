"""
Subcommands; each module exposes `register(subparsers, config)` and sets its handler
"""
