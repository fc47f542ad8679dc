"""Service launcher: config resolution, store lock, uvicorn."""

from __future__ import annotations

import sys

import click
import uvicorn
from filelock import FileLock, Timeout

from desamon.config import load_config
from desamon.api.app import create_app
from desamon.errors import ConfigError


def lock_path(storage_path) -> str:
    return str(storage_path) + ".lock"


@click.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--store", default=None, help="Storage file path (overrides config).")
@click.option("--listen", default=None, help="host:port to listen on (overrides config).")
def main(config_path: str | None, store: str | None, listen: str | None) -> None:
    """Run the monitoring API service."""
    overrides = {}
    if store:
        overrides["storage_path"] = store
    if listen:
        overrides["listen"] = listen
    try:
        config = load_config(config_path, overrides=overrides)
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    # held for the whole run so maintenance commands cannot race the service
    lock = FileLock(lock_path(config.storage_path))
    try:
        lock.acquire(timeout=0.5)
    except Timeout:
        click.echo(f"error: store is locked by another process: {lock.lock_file}", err=True)
        sys.exit(1)
    try:
        app = create_app(config)
        uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    finally:
        lock.release()


if __name__ == "__main__":
    main()
