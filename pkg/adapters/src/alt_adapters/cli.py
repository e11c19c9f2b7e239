"""Adapter process entry point: one JSON request in, one JSON response out.

Anything the backends print (model download progress, library chatter) is
redirected to stderr while the request is served, so stdout carries exactly
the one response document.  Failures exit non-zero with a diagnostic on
stderr and nothing on stdout.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Callable, TextIO

from .protocol import BadRequest, handle


def main(
    argv: list[str] | None = None,
    stdin: TextIO | None = None,
    stdout: TextIO | None = None,
    transcriber_factory: Callable[[], object] | None = None,
    separator_factory: Callable[[], object] | None = None,
) -> int:
    parser = argparse.ArgumentParser(prog="alt-adapter", description=__doc__)
    parser.add_argument("--device", default="auto", help="compute device passthrough")
    parser.add_argument("--model", default=None, help="override the transcription model name")
    args = parser.parse_args(argv)

    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout

    if transcriber_factory is None:

        def transcriber_factory():
            from .transcriber import DEFAULT_MODEL, WhisperTranscriber

            return WhisperTranscriber(args.model or DEFAULT_MODEL, device=args.device)

    if separator_factory is None:

        def separator_factory():
            from .separator import DemucsSeparator

            device = None if args.device == "auto" else args.device
            return DemucsSeparator(device=device)

    try:
        request = json.load(stdin)
    except json.JSONDecodeError as exc:
        print(f"alt-adapter: malformed request JSON: {exc}", file=sys.stderr)
        return 2

    try:
        with contextlib.redirect_stdout(sys.stderr):
            response = handle(request, transcriber_factory, separator_factory)
    except BadRequest as exc:
        print(f"alt-adapter: bad request: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"alt-adapter: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    json.dump(response, stdout)
    stdout.write("\n")
    return 0


def entrypoint() -> None:  # console script
    sys.exit(main())
