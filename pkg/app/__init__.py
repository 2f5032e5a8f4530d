import click


def create_cli():
    """Factory function to create the fuzzdep command group."""
    cli = click.Group(
        name='fuzzdep',
        help='Check fuzzy functional and multivalued dependencies on fuzzy relations, '
             'reason about dependency sets and test decompositions.',
    )

    # Register commands
    from app.commands import COMMANDS
    for command in COMMANDS:
        cli.add_command(command)

    return cli
