"""
Command-line interface: one subcommand per module in ``commands``.
"""
