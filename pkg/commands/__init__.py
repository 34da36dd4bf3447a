from . import arcs, build, export, field_table, verify

COMMANDS = (build, verify, export, arcs, field_table)

__all__ = ['COMMANDS', 'arcs', 'build', 'export', 'field_table', 'verify']
