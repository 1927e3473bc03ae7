"""Main entry point for the qsense simulator CLI."""

from dotenv import load_dotenv

load_dotenv()

from src.cli import cli  # noqa: E402


if __name__ == "__main__":
    cli()
