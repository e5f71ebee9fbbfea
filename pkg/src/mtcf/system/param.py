"""
Layered settings: command-line values over MTCF_* environment variables over
built-in defaults.
"""

import os
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, Optional, Union


class Collection(ABC):
    """
    Abstract base class for settings collections.

    A collection looks up values by key and falls back to a parent collection
    when it has nothing to say about the key.
    """

    def __call__(self, key: str) -> Any:
        return self.get(key)

    @abstractmethod
    def find(self, key: str, current: 'Collection', parent: 'Collection') -> Optional[Any]:
        """
        Find a value by key.

        Args:
            key: The key to look up
            current: The collection the lookup started from
            parent: The collection to fall back to if key is not found

        Returns:
            The value associated with the key, or None if not found
        """
        pass

    def get(self, key: str) -> Optional[Any]:
        return self.find(key, self, EmptyCollection())


class EmptyCollection(Collection):
    """End of every lookup chain."""

    def find(self, key: str, current: Collection, parent: Collection) -> Optional[Any]:
        return parent.get(key)

    def get(self, key: str) -> None:
        return None


class MapCollection(Collection):

    def __init__(self, map: Dict[str, Any]):
        self.map = map

    def find(self, key: str, current: Collection, parent: Collection) -> Optional[Any]:
        if key in self.map and self.map[key] is not None:
            return self.map[key]
        return parent.get(key)


class EnvironCollection(Collection):
    """
    Reads `key` from the environment variable MTCF_<KEY>.

    The environment is consulted at lookup time, so tests can patch it.
    """

    def __init__(self, prefix: str = "MTCF_"):
        self.prefix = prefix

    def variable(self, key: str) -> str:
        return self.prefix + key.upper()

    def find(self, key: str, current: Collection, parent: Collection) -> Optional[Any]:
        value = os.environ.get(self.variable(key))
        if value not in (None, ""):
            return value
        return parent.get(key)


class PatternCollection(Collection):
    """Values computed by a function of (current, parent, key)."""

    def __init__(self, pattern: Callable[[Collection, Collection, str], Optional[Any]]):
        if not pattern.__code__.co_varnames[:pattern.__code__.co_argcount] == ('current', 'parent', 'key'):
            raise ValueError("Programmable setting must take exactly three named arguments: current, parent, and key")
        self.pattern = pattern

    def find(self, key: str, current: Collection, parent: Collection) -> Optional[Any]:
        value = self.pattern(current, parent, key)
        if value is not None:
            return value
        return parent.get(key)


class DerivedCollection(Collection):
    """A new collection searched before an old one."""

    def __init__(self, new: Collection, old: Collection):
        self.new = new
        self.old = old

    def find(self, key: str, current: Collection, parent: Collection) -> Optional[Any]:
        return self.new.find(key, current, DerivedCollection(self.old, parent))

    def get(self, key: str) -> Optional[Any]:
        return self.new.find(key, self, self.old)


DEFAULTS: Dict[str, Any] = {
    "threads": os.cpu_count() or 1,
    "search_budget": 10_000_000,
    "log_level": "INFO",
}


class Settings:
    """
    Lookup chain of collections; the most recently added layer wins.

    `Settings.default()` stacks the environment over DEFAULTS; callers then
    add the command-line layer with `settings + {...}`.
    """

    def __init__(self, arg: Optional[Union[Dict[str, Any], Callable, Collection]] = None):
        match arg:
            case None:
                self.collection = EmptyCollection()
            case dict():
                self.collection = MapCollection(arg)
            case Collection():
                self.collection = arg
            case _:
                if not callable(arg):
                    raise TypeError("Unsupported argument type for Settings initialization.")
                self.collection = PatternCollection(arg)

    @classmethod
    def default(cls) -> 'Settings':
        return cls(dict(DEFAULTS)) + cls(EnvironCollection())

    def __call__(self, key: str) -> Any:
        value = self.get(key)
        if value is None:
            raise KeyError(f"Key '{key}' not found in settings.")
        return value

    def get(self, key: str, default: Any = None) -> Optional[Any]:
        value = self.collection.find(key, self.collection, EmptyCollection())
        if value is None:
            return default
        return value

    def get_int(self, key: str, default: Optional[int] = None) -> Optional[int]:
        value = self.get(key, default)
        if value is None:
            return None
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ValueError(f"Setting '{key}' must be an integer, got {value!r}") from None

    def __add__(self, other: Union['Settings', Dict[str, Any], Callable]) -> 'Settings':
        return self.update(other)

    def update(self, new: Union['Settings', Dict[str, Any], Callable]) -> 'Settings':
        if isinstance(new, Settings):
            layer = new.collection
        elif isinstance(new, dict):
            layer = MapCollection(new)
        elif callable(new):
            layer = PatternCollection(new)
        else:
            raise TypeError("Can only add Settings, dict or callable to Settings")
        merged = Settings()
        merged.collection = DerivedCollection(layer, self.collection)
        return merged


def thread_count(settings: Optional[Settings] = None) -> int:
    settings = settings or Settings.default()
    return max(1, settings.get_int("threads", DEFAULTS["threads"]))
