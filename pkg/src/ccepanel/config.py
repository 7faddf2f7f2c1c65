"""Flat ``key = value`` run configuration files."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .exceptions import PanelError

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class RunConfig:
    """Parsed configuration with typed accessors.

    Lines are ``key = value``; ``#`` starts a comment; keys are
    case-insensitive and may not repeat.
    """

    values: dict = field(default_factory=dict)
    source: Optional[str] = None
    digest: str = ""
    _used: set = field(default_factory=set, repr=False)

    @classmethod
    def parse(cls, text: str, source: str = None) -> "RunConfig":
        values = {}
        for n, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise PanelError(f"{source or 'config'} line {n}: expected key = value, got {raw!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lower().replace("-", "_")
            if not key:
                raise PanelError(f"{source or 'config'} line {n}: empty key")
            if key in values:
                raise PanelError(f"{source or 'config'} line {n}: duplicate key {key!r}")
            values[key] = value
        digest = hashlib.sha256(text.encode()).hexdigest()
        return cls(values, source, digest)

    @classmethod
    def read(cls, path) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise PanelError(f"config file not found: {path}")
        return cls.parse(path.read_text(), str(path))

    def __contains__(self, key):
        return key in self.values

    def _raw(self, key, default):
        self._used.add(key)
        return self.values.get(key, default)

    def _fail(self, key, value, kind):
        raise PanelError(f"config key {key!r}: expected {kind}, got {value!r}")

    def get_str(self, key, default=None):
        return self._raw(key, default)

    def get_int(self, key, default=None):
        value = self._raw(key, default)
        if value is None or isinstance(value, int):
            return value
        try:
            return int(value)
        except ValueError:
            self._fail(key, value, "an integer")

    def get_float(self, key, default=None):
        value = self._raw(key, default)
        if value is None or isinstance(value, float):
            return value
        try:
            return float(value)
        except ValueError:
            self._fail(key, value, "a number")

    def get_bool(self, key, default=None):
        value = self._raw(key, default)
        if value is None or isinstance(value, bool):
            return value
        low = value.lower()
        if low in _TRUE:
            return True
        if low in _FALSE:
            return False
        self._fail(key, value, "true/false")

    def get_list(self, key, default=None, cast=str):
        value = self._raw(key, default)
        if value is None or isinstance(value, (list, tuple)):
            return value
        items = [s.strip() for s in value.split(",") if s.strip()]
        try:
            return [cast(s) for s in items]
        except ValueError:
            self._fail(key, value, f"a comma-separated list of {cast.__name__}")

    def unused(self) -> list:
        return sorted(set(self.values) - self._used)

    def require_all_used(self):
        extra = self.unused()
        if extra:
            raise PanelError(f"unknown config key(s): {', '.join(extra)}")
