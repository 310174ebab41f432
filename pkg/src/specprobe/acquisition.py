"""Building the suggestion space: function specs, prompts, candidate
providers (HTTP completion endpoint or offline directory), validation and
canonical-AST deduplication.

Spec files (`.fnspec`) carry a signature line, an optional purpose block
delimited by triple quotes, and optional example lines:

    fn first_nonzero(nums: List(Float)) -> Float
    \"\"\"
    Return the first non-zero value in nums.
    \"\"\"
    >>> first_nonzero([0.0, 3.7, 0.0])
    3.7
"""

from __future__ import annotations

import dataclasses
import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import httpx

from .minifn.parser import ParseError, _Parser, tokenize
from .minifn.printer import print_function
from .minifn.syntax import (
    BoolLit,
    BoolV,
    Expr,
    FloatLit,
    FloatV,
    FunctionDef,
    IntLit,
    IntV,
    ListLit,
    ListV,
    StrLit,
    StrV,
    Type,
    Value,
    canon,
    canon_args,
    type_of,
    types_compatible,
)
from .minifn.typecheck import TypeError_, typecheck

VARIANTS = ("S", "SP", "SP1", "SPx")


class SpecFormatError(ValueError):
    pass


class AnyError:
    """Expected-outcome marker: any runtime error is acceptable."""

    _instance: Optional["AnyError"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "AnyError"


ANY_ERROR = AnyError()


@dataclass(frozen=True)
class FunctionalExample:
    args: Tuple[Value, ...]
    expected: Union[Value, AnyError]


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    params: Tuple[Tuple[str, Type], ...]
    return_type: Type
    purpose: Optional[str] = None
    examples: Tuple[FunctionalExample, ...] = ()
    variant_tag: Optional[str] = None

    def __post_init__(self):
        tag = self.variant_tag
        if tag is not None:
            if tag not in VARIANTS:
                raise SpecFormatError(f"unknown variant tag {tag!r}")
            n = len(self.examples)
            if tag == "S" and (self.purpose or n):
                raise SpecFormatError("variant S carries no purpose and no examples")
            if tag == "SP" and (not self.purpose or n):
                raise SpecFormatError("variant SP carries a purpose and no examples")
            if tag == "SP1" and (not self.purpose or n != 1):
                raise SpecFormatError("variant SP1 carries a purpose and exactly one example")
            if tag == "SPx" and (not self.purpose or n < 2):
                raise SpecFormatError("variant SPx carries a purpose and at least two examples")

    @property
    def param_types(self) -> Tuple[Type, ...]:
        return tuple(t for _, t in self.params)

    def signature(self) -> str:
        ps = ", ".join(f"{n}: {t}" for n, t in self.params)
        return f"fn {self.name}({ps}) -> {self.return_type}"


@dataclass(frozen=True)
class Origin:
    kind: str  # llm | corpus | mutant
    parent: str = ""
    operator: str = ""


@dataclass(frozen=True)
class Candidate:
    id: str
    source: str
    def_: FunctionDef
    origin: Origin


def candidate_id(fd: FunctionDef) -> str:
    """Stable hash of the canonical AST (id equality == AST equality)."""
    return hashlib.sha256(print_function(fd).encode("utf-8")).hexdigest()[:16]


# ---------------------------------------------------------------------------
# Literal parsing


def _expr_to_value(e: Expr, expected: Optional[Type] = None) -> Value:
    if isinstance(e, IntLit):
        return IntV(e.n)
    if isinstance(e, FloatLit):
        return FloatV(e.x)
    if isinstance(e, BoolLit):
        return BoolV(e.b)
    if isinstance(e, StrLit):
        return StrV(e.s)
    if isinstance(e, ListLit):
        elem_t = expected.elem if expected is not None and expected.kind == "list" else None
        items = tuple(_expr_to_value(it, elem_t) for it in e.items)
        if elem_t is None and items:
            elem_t = type_of(items[0])
        return ListV(items, elem_t)
    raise SpecFormatError(f"not a literal value: {e!r}")


def parse_value_literal(text: str, expected: Optional[Type] = None) -> Value:
    p = _Parser(tokenize(text))
    e = p.expression()
    p.expect("eof")
    v = _expr_to_value(e, expected)
    if expected is not None and not types_compatible(type_of(v), expected):
        raise SpecFormatError(f"value {canon(v)} does not fit type {expected}")
    return v


def _parse_signature(line: str) -> Tuple[str, Tuple[Tuple[str, Type], ...], Type]:
    p = _Parser(tokenize(line))
    p.expect("keyword", "fn")
    name = p.expect("ident").text
    p.expect("punct", "(")
    params: List[Tuple[str, Type]] = []
    if not p.at("punct", ")"):
        while True:
            pname = p.expect("ident").text
            p.expect("punct", ":")
            params.append((pname, p.type_expr()))
            if p.at("punct", ","):
                p.next()
                continue
            break
    p.expect("punct", ")")
    p.expect("punct", "->")
    ret = p.type_expr()
    p.expect("eof")
    return name, tuple(params), ret


def parse_fnspec(text: str, variant_tag: Optional[str] = None) -> FunctionSpec:
    """Parse a `.fnspec` document."""
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx >= len(lines) or not lines[idx].strip().startswith("fn "):
        raise SpecFormatError("first line must be a 'fn' signature")
    try:
        name, params, ret = _parse_signature(lines[idx].strip())
    except ParseError as pe:
        raise SpecFormatError(f"bad signature: {pe}") from None
    idx += 1
    purpose: Optional[str] = None
    examples: List[FunctionalExample] = []
    while idx < len(lines):
        line = lines[idx].strip()
        if not line:
            idx += 1
            continue
        if line.startswith('"""'):
            if purpose is not None:
                raise SpecFormatError("duplicate purpose block")
            block: List[str] = []
            rest = line[3:]
            if rest.endswith('"""') and rest != "":
                purpose = rest[:-3].strip()
                idx += 1
                continue
            if rest:
                block.append(rest)
            idx += 1
            closed = False
            while idx < len(lines):
                line = lines[idx]
                if line.strip().endswith('"""'):
                    tail = line.strip()[:-3].strip()
                    if tail:
                        block.append(tail)
                    closed = True
                    idx += 1
                    break
                block.append(line.strip())
                idx += 1
            if not closed:
                raise SpecFormatError("unterminated purpose block")
            purpose = "\n".join(block).strip()
            continue
        if line.startswith(">>>"):
            call = line[3:].strip()
            prefix = f"{name}("
            if not (call.startswith(prefix) and call.endswith(")")):
                raise SpecFormatError(f"example must invoke {name}(...): {line!r}")
            args_text = call[len(prefix) : -1].strip()
            args: List[Value] = []
            if args_text:
                p = _Parser(tokenize(args_text))
                i = 0
                while True:
                    e = p.expression()
                    expected_t = params[i][1] if i < len(params) else None
                    args.append(_expr_to_value(e, expected_t))
                    i += 1
                    if p.at("punct", ","):
                        p.next()
                        continue
                    break
                p.expect("eof")
            idx += 1
            while idx < len(lines) and not lines[idx].strip():
                idx += 1
            if idx >= len(lines):
                raise SpecFormatError(f"example {line!r} is missing its expected value")
            exp_line = lines[idx].strip()
            idx += 1
            expected: Union[Value, AnyError]
            if exp_line == "!error":
                expected = ANY_ERROR
            else:
                expected = parse_value_literal(exp_line, ret)
            examples.append(FunctionalExample(tuple(args), expected))
            continue
        raise SpecFormatError(f"unexpected line: {line!r}")
    return FunctionSpec(name, params, ret, purpose, tuple(examples), variant_tag)


def load_fnspec(path: str | Path, variant_tag: Optional[str] = None) -> FunctionSpec:
    return parse_fnspec(Path(path).read_text(encoding="utf-8"), variant_tag)


# ---------------------------------------------------------------------------
# Prompt rendering


def build_prompt(spec: FunctionSpec) -> str:
    """Render the spec as a code-completion prefix, one part per detail
    level: signature, purpose comment, example lines."""
    out = [f"{spec.signature()} {{"]
    if spec.purpose:
        for line in spec.purpose.splitlines():
            out.append(f"    # {line}".rstrip())
        if spec.examples:
            out.append("    #")
    for ex in spec.examples:
        out.append(f"    # >>> {spec.name}({canon_args(ex.args)})")
        if isinstance(ex.expected, AnyError):
            out.append("    # !error")
        else:
            out.append(f"    # {canon(ex.expected)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Providers


class ProviderError(Exception):
    pass


class ProviderUnreachable(ProviderError):
    pass


class MalformedResponse(ProviderError):
    pass


class AuthFailure(ProviderError):
    pass


@dataclass(frozen=True)
class ProviderConfig:
    endpoint: str
    model: str = "default"
    api_key_env: str = ""
    temperature: float = 0.8
    timeout: float = 30.0


class OfflineProvider:
    """Reads `.mfn` files from a directory in lexicographic order."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def fetch(self, prompt: str, n: int) -> List[str]:
        if not self.directory.is_dir():
            raise ProviderUnreachable(f"corpus directory not found: {self.directory}")
        files = sorted(p for p in self.directory.iterdir() if p.suffix == ".mfn")
        return [p.read_text(encoding="utf-8") for p in files[:n]]


class HttpProvider:
    """POSTs a completion request and extracts text choices."""

    def __init__(self, config: ProviderConfig):
        self.config = config

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key_env:
            key = os.environ.get(self.config.api_key_env, "")
            if key:
                headers["Authorization"] = f"Bearer {key}"
        return headers

    def fetch(self, prompt: str, n: int) -> List[str]:
        body = {
            "model": self.config.model,
            "prompt": prompt,
            "n": n,
            "temperature": self.config.temperature,
        }
        last_exc: Optional[Exception] = None
        for _ in range(2):  # one retry
            try:
                resp = httpx.post(
                    self.config.endpoint,
                    json=body,
                    headers=self._headers(),
                    timeout=self.config.timeout,
                )
                break
            except httpx.HTTPError as exc:
                last_exc = exc
        else:
            raise ProviderUnreachable(str(last_exc))
        if resp.status_code in (401, 403):
            raise AuthFailure(f"provider returned {resp.status_code}")
        if resp.status_code != 200:
            raise MalformedResponse(f"provider returned {resp.status_code}")
        try:
            data = resp.json()
            choices = data["choices"]
            texts = [c["text"] for c in choices]
        except (ValueError, KeyError, TypeError):
            raise MalformedResponse("response is not a completion payload") from None
        if not all(isinstance(t, str) for t in texts):
            raise MalformedResponse("choice texts must be strings")
        return texts[:n]


def fetch_candidates(prompt: str, n: int, provider) -> List[str]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return provider.fetch(prompt, n)


# ---------------------------------------------------------------------------
# Validation and deduplication


def _signature_matches(fd: FunctionDef, spec: FunctionSpec) -> bool:
    if len(fd.params) != len(spec.params):
        return False
    if fd.return_type != spec.return_type:
        return False
    return all(t == st for (_, t), (_, st) in zip(fd.params, spec.params))


def validate_and_dedupe(
    sources: Sequence[str],
    spec: FunctionSpec,
    origin_kind: str = "llm",
) -> Tuple[List[Candidate], List[str]]:
    """Parse and typecheck each source against the spec's signature.

    Failures are dropped with a diagnostic; canonical-AST duplicates keep
    the first occurrence. A candidate whose name differs from the spec is
    renamed, not dropped.
    """
    from .minifn.parser import parse

    out: List[Candidate] = []
    diagnostics: List[str] = []
    seen = set()
    for i, src in enumerate(sources):
        label = f"source #{i + 1}"
        try:
            fd = parse(src)
        except ParseError as pe:
            diagnostics.append(f"{label}: parse error: {pe}")
            continue
        if fd.name != spec.name:
            fd = dataclasses.replace(fd, name=spec.name)
        if not _signature_matches(fd, spec):
            diagnostics.append(f"{label}: signature mismatch: {fd.signature()}")
            continue
        try:
            typecheck(fd)
        except TypeError_ as te:
            diagnostics.append(f"{label}: type error: {te}")
            continue
        cid = candidate_id(fd)
        if cid in seen:
            diagnostics.append(f"{label}: duplicate of an earlier candidate")
            continue
        seen.add(cid)
        out.append(Candidate(cid, src, fd, Origin(origin_kind)))
    return out, diagnostics
