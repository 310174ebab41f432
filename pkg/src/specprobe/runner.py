"""Subprocess runner protocol for evaluating foreign candidates.

The engine-side client spawns one runner process per candidate and
exchanges newline-delimited JSON: request `{"args": [<value>...]}`,
response `{"outcome": {...}}` in the shared wire encoding. A call that
does not answer within the wall-clock timeout (0.3 s by default) counts
as BudgetExhausted and the runner is restarted.

`serve_stdio` is the worker side for MiniFn candidates, exposed as the
`specprobe run-worker` subcommand.
"""

from __future__ import annotations

import json
import queue
import subprocess
import sys
import threading
from pathlib import Path
from typing import List, Optional, Sequence

from .minifn.interp import DEFAULT_FUEL, eval_call
from .minifn.jsoncodec import CodecError, outcome_from_json, outcome_to_json, value_from_json, value_to_json
from .minifn.parser import parse
from .minifn.syntax import BudgetExhausted, ErrorKind, ErrorOutcome, Outcome, Value
from .minifn.typecheck import typecheck

CALL_TIMEOUT = 0.3  # seconds per call


class RunnerProtocolError(Exception):
    pass


class SubprocessRunner:
    """Client side: evaluates argument tuples through a runner command."""

    def __init__(self, cmd: Sequence[str], timeout: float = CALL_TIMEOUT):
        self.cmd = list(cmd)
        self.timeout = timeout
        self._proc: Optional[subprocess.Popen] = None
        self._replies: "queue.Queue[Optional[str]]" = queue.Queue()

    def _start(self) -> None:
        self._proc = subprocess.Popen(
            self.cmd,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self._replies = queue.Queue()

        def pump(proc: subprocess.Popen, out: "queue.Queue[Optional[str]]") -> None:
            assert proc.stdout is not None
            for line in proc.stdout:
                out.put(line)
            out.put(None)

        threading.Thread(target=pump, args=(self._proc, self._replies), daemon=True).start()

    def _stop(self) -> None:
        if self._proc is not None:
            self._proc.kill()
            self._proc.wait()
            self._proc = None

    def close(self) -> None:
        self._stop()

    def __enter__(self) -> "SubprocessRunner":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def eval(self, args: Sequence[Value]) -> Outcome:
        if self._proc is None or self._proc.poll() is not None:
            self._stop()
            self._start()
        assert self._proc is not None and self._proc.stdin is not None
        request = json.dumps({"args": [value_to_json(a) for a in args]})
        try:
            self._proc.stdin.write(request + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError):
            self._stop()
            raise RunnerProtocolError("runner process died while writing")
        try:
            line = self._replies.get(timeout=self.timeout)
        except queue.Empty:
            # stuck call: kill the worker so the next call gets a fresh one
            self._stop()
            return BudgetExhausted()
        if line is None:
            self._stop()
            raise RunnerProtocolError("runner closed its output")
        try:
            data = json.loads(line)
            return outcome_from_json(data["outcome"])
        except (ValueError, KeyError, CodecError) as exc:
            self._stop()
            raise RunnerProtocolError(f"malformed runner reply: {exc}")


def serve_stdio(candidate_path: str | Path, fuel: int = DEFAULT_FUEL) -> None:
    """Worker side: answer eval requests for one MiniFn candidate."""
    fd = parse(Path(candidate_path).read_text(encoding="utf-8"))
    typecheck(fd)
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
            args: List[Value] = [value_from_json(a) for a in request["args"]]
            outcome = eval_call(fd, args, fuel)
        except (ValueError, KeyError, CodecError) as exc:
            outcome = ErrorOutcome(ErrorKind.USER_RAISED, f"bad request: {exc}")
        sys.stdout.write(json.dumps({"outcome": outcome_to_json(outcome)}) + "\n")
        sys.stdout.flush()
